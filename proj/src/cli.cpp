#include "spns/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "spns/calibration.hpp"
#include "spns/corpus.hpp"
#include "spns/field_io.hpp"
#include "spns/frequency.hpp"
#include "spns/hash.hpp"
#include "spns/navier_stokes.hpp"
#include "spns/registry.hpp"
#include "spns/scenarios.hpp"
#include "spns/semigroup.hpp"
#include "spns/sparseness.hpp"
#include "spns/spectral.hpp"

namespace spns::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Reads one JSON object, remembering which keys were consumed so that leftovers can be
// rejected.  Every accessor throws config with the key's path in the message.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    require(j.is_object(), ErrorKind::config, where_ + " must be an object");
  }

  bool has(const std::string& key) const {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& raw(const std::string& key) const {
    require(has(key), ErrorKind::config, "missing key '" + path(key) + "'");
    return j_.at(key);
  }

  double number(const std::string& key) const {
    const json& v = raw(key);
    require(v.is_number(), ErrorKind::config, "'" + path(key) + "' must be a number");
    const double x = v.get<double>();
    require(std::isfinite(x), ErrorKind::config, "'" + path(key) + "' must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
  }

  int integer(const std::string& key) const {
    const json& v = raw(key);
    require(v.is_number_integer(), ErrorKind::config, "'" + path(key) + "' must be an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  bool flag(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    require(j_.at(key).is_boolean(), ErrorKind::config, "'" + path(key) + "' must be true or false");
    return j_.at(key).get<bool>();
  }

  std::string text(const std::string& key) const {
    const json& v = raw(key);
    require(v.is_string(), ErrorKind::config, "'" + path(key) + "' must be a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  // A number ≥ 1 or "inf".
  double exponent(const std::string& key) const { return to_exponent(raw(key), path(key)); }
  double exponent(const std::string& key, double fallback) const {
    return has(key) ? exponent(key) : fallback;
  }
  std::vector<double> exponents(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    require(v.is_array() && !v.empty(), ErrorKind::config, "'" + path(key) + "' must be a nonempty list");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(to_exponent(x, path(key)));
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    const json& v = raw(key);
    require(v.is_array() && !v.empty(), ErrorKind::config, "'" + path(key) + "' must be a nonempty list");
    std::vector<double> out;
    for (const auto& x : v) {
      require(x.is_number(), ErrorKind::config, "'" + path(key) + "' must hold numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  Section section(const std::string& key) const { return Section(raw(key), path(key)); }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      require(seen_.count(k) > 0, ErrorKind::config, "unknown key '" + path(k) + "'");
    }
  }

  std::string path(const std::string& key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  static double to_exponent(const json& v, const std::string& where) {
    double p = 0.0;
    if (v.is_string()) {
      require(v.get<std::string>() == "inf", ErrorKind::config, "'" + where + "' must be a number or \"inf\"");
      p = infinity;
    } else {
      require(v.is_number(), ErrorKind::config, "'" + where + "' must be a number or \"inf\"");
      p = v.get<double>();
    }
    require(p >= 1.0, ErrorKind::config, "'" + where + "' = " + std::to_string(p) + " violates p >= 1");
    return p;
  }

  const json& j_;
  std::string where_;
  mutable std::set<std::string> seen_;
};

void open_interval(double x, const std::string& name) {
  if (!(x > 0.0 && x < 1.0)) {
    std::ostringstream s;
    s << name << " = " << x << " violates 0 < " << name << " < 1";
    fail(ErrorKind::config, s.str());
  }
}

void positive(double x, const std::string& name) {
  if (!(x > 0.0)) {
    std::ostringstream s;
    s << name << " = " << x << " violates " << name << " > 0";
    fail(ErrorKind::config, s.str());
  }
}

// ---------------------------------------------------------------------------
// Input fields

struct FieldSpec {
  std::string type;
  Grid grid;
  fs::path path;
  double inside = 1.0, outside = 0.5, width = 0.1;
  double sigma = 1.0, amplitude = 1.0;
  int kmax = 4;
  std::uint64_t seed = 0;
};

Grid parse_grid(const Section& s) {
  const Section g = s.section("grid");
  const int d = g.integer("d");
  const int n = g.integer("n");
  const double L = g.number("L");
  g.finish();
  require(d >= 1 && d <= 3, ErrorKind::config, "grid.d = " + std::to_string(d) + " violates 1 <= d <= 3");
  require(n >= 8 && (n & (n - 1)) == 0, ErrorKind::config, "grid.n = " + std::to_string(n) + " must be a power of two >= 8");
  positive(L, "grid.L");
  return Grid(d, n, L);
}

FieldSpec parse_field(const Section& s, const RunContext& ctx, std::uint64_t seed) {
  FieldSpec f;
  f.type = s.text("type");
  f.seed = seed;
  if (f.type == "file") {
    f.path = s.text("path");
    if (f.path.is_relative()) f.path = ctx.config_dir / f.path;
    s.finish();
    require(fs::exists(f.path), ErrorKind::config, "field file " + f.path.string() + " does not exist");
    return f;
  }
  f.grid = parse_grid(s);
  if (f.type == "indicator") {
    f.inside = s.number("inside", 1.0);
    f.outside = s.number("outside", 0.5);
    f.width = s.number("width");
    positive(f.width, "field.width");
  } else if (f.type == "gaussian") {
    f.sigma = s.number("sigma");
    f.amplitude = s.number("amplitude", 1.0);
    positive(f.sigma, "field.sigma");
  } else if (f.type == "vortex" || f.type == "taylor_green" || f.type == "random_velocity") {
    require(f.grid.dim() >= 2, ErrorKind::config, "a velocity field needs grid.d >= 2");
    f.amplitude = s.number("amplitude", 1.0);
    if (f.type == "vortex") {
      f.sigma = s.number("sigma");
      positive(f.sigma, "field.sigma");
    }
    if (f.type == "taylor_green") {
      require(f.grid.dim() == 2, ErrorKind::config, "taylor_green needs grid.d = 2");
    }
    if (f.type == "random_velocity") {
      f.kmax = s.integer("kmax", 4);
      require(f.kmax >= 1, ErrorKind::config, "field.kmax must be >= 1");
    }
  } else {
    fail(ErrorKind::config, "field.type '" + f.type +
                                "' is not one of file, indicator, gaussian, vortex, taylor_green, random_velocity");
  }
  s.finish();
  return f;
}

Field materialise(const FieldSpec& f) {
  if (f.type == "file") return read_field(f.path);
  const Grid& g = f.grid;
  if (f.type == "indicator") {
    const double r = f.width / 2;
    return Field::sample(g, [&](const auto& x) {
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < r * r ? f.inside : f.outside;
    });
  }
  if (f.type == "gaussian") return gaussian_bump(g, {0, 0, 0}, f.sigma).scaled(f.amplitude);
  if (f.type == "vortex") return vortex_blob(g, {0, 0, 0}, f.sigma, f.amplitude);
  if (f.type == "random_velocity") return random_smooth_velocity(g, f.seed, f.kmax, f.amplitude);
  const double k = 2 * std::numbers::pi / g.length();
  return Field::sample_vector(g, 2, [&](const auto& x, std::span<double> out) {
    out[0] = f.amplitude * std::sin(k * x[0]) * std::cos(k * x[1]);
    out[1] = -f.amplitude * std::cos(k * x[0]) * std::sin(k * x[1]);
  });
}

// ---------------------------------------------------------------------------
// Output helpers

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) {
      std::error_code ec;
      fs::create_directories(dir_, ec);
      require(!ec, ErrorKind::io, "cannot create " + dir_.string());
    }
  }

  bool enabled() const { return !dir_.empty(); }

  fs::path claim(const std::string& name) {
    files_.push_back(name);
    const fs::path p = dir_ / name;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    return p;
  }

  void text(const std::string& name, const std::string& content) {
    if (!enabled()) return;
    std::ofstream out(claim(name), std::ios::binary);
    out << content;
    require(out.good(), ErrorKind::io, "cannot write " + (dir_ / name).string());
  }
  void write_json(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }
  void field(const std::string& name, const Field& f) {
    if (enabled()) write_field(claim(name), f);
  }
  template <class Writer>
  void with_path(const std::string& name, Writer&& w) {
    if (enabled()) w(claim(name));
  }

  const std::vector<std::string>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<std::string> files_;
};

struct Common {
  ConstantsRegistry registry;
  std::uint64_t seed = 0;
};

ConstantsRegistry load_registry(const RunContext& ctx) {
  return ctx.registry ? ConstantsRegistry::load(*ctx.registry) : ConstantsRegistry::load_default();
}

std::string verdict_word(bool pass) { return pass ? "pass" : "fail"; }

// Each command validates its whole section first and returns the work as a closure.
using Work = std::function<json(Outputs&, const Common&, bool& pass)>;

// ---------------------------------------------------------------------------
// certify

struct CertifyJob {
  FieldSpec field;
  SparsenessParams params;
  bool dump_mask = false;
};

SparsenessParams parse_sparseness(const Section& s) {
  SparsenessParams p;
  p.epsilon = s.number("epsilon");
  p.beta = s.number("beta");
  p.ell = s.number("ell");
  p.p = s.exponent("p", 2.0);
  const std::string rule = s.text("tail_rule", "strict");
  require(rule == "strict" || rule == "inclusive", ErrorKind::config,
          "tail_rule must be \"strict\" or \"inclusive\"");
  p.tail_rule = rule == "strict" ? TailRule::strict : TailRule::inclusive;
  open_interval(p.epsilon, "epsilon");
  open_interval(p.beta, "beta");
  positive(p.ell, "ell");
  return p;
}

json certify_field(const Field& u, const SparsenessParams& params, bool dump_mask, Outputs& out,
                   bool& pass) {
  params.validate(u.grid().length());
  const SparsenessCertificate c = certify(u, params);
  out.field("field.spf", u);
  if (dump_mask) out.field("mask.spf", c.witness.as_field());
  pass = c.verdict;
  return {{"certificate", to_json(c)}};
}

Work parse_certify(const Section& s, const RunContext& ctx, std::uint64_t seed) {
  CertifyJob job;
  job.field = parse_field(s.section("field"), ctx, seed);
  job.params = parse_sparseness(s);
  job.dump_mask = s.flag("dump_mask", false);
  s.finish();
  if (job.field.type != "file") {
    try {
      job.params.validate(job.field.grid.length());
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::invalid_input) fail(ErrorKind::config, e.what());
      throw;
    }
  }
  return [job](Outputs& out, const Common&, bool& pass) {
    return certify_field(materialise(job.field), job.params, job.dump_mask, out, pass);
  };
}

// ---------------------------------------------------------------------------
// freq

Work parse_freq(const Section& s, const RunContext& ctx, std::uint64_t seed) {
  const FieldSpec field = parse_field(s.section("field"), ctx, seed);
  FrequencySparsenessParams params;
  params.beta = s.number("beta");
  params.J = s.number("J");
  const double p = s.exponent("p", 2.0);
  s.finish();
  open_interval(params.beta, "beta");
  return [=](Outputs& out, const Common&, bool& pass) {
    const Field u = materialise(field);
    const FrequencyCertificate c = certify_frequency(u, params, p);
    const BesovNorm b = besov_norm(u);
    const auto blocks = block_energies(u);
    out.with_path("blocks.csv", [&](const fs::path& path) { write_block_energy_csv(blocks, path); });
    pass = c.verdict;
    return json{{"certificate", to_json(c)}, {"besov", to_json(b)}};
  };
}

// ---------------------------------------------------------------------------
// heat-decay

KernelSpec kernel_by_name(const std::string& name, int d) {
  if (name == "heat") return KernelSpec::heat(d);
  if (name == "low_pass") return KernelSpec::low_pass(d);
  fail(ErrorKind::config, "kernel must be \"heat\" or \"low_pass\"");
}

Work parse_heat_decay(const Section& s, const RunContext& ctx, std::uint64_t seed) {
  const std::string mode = s.text("mode", "lemma");
  require(mode == "lemma" || mode == "frequency" || mode == "drop", ErrorKind::config,
          "mode must be \"lemma\", \"frequency\" or \"drop\"");

  if (mode == "drop") {
    const FieldSpec field = parse_field(s.section("field"), ctx, seed);
    const double ell = s.number("ell");
    const std::optional<double> C = s.has("C") ? std::optional(s.number("C")) : std::nullopt;
    s.finish();
    positive(ell, "ell");
    return [=](Outputs&, const Common& common, bool& pass) {
      const Field u = materialise(field);
      const double c = C ? *C : common.registry.get("heat", u.grid().dim(), infinity).C_drop;
      const double ratio = heat_drop_ratio(u, ell, c);
      pass = ratio <= 0.75;
      return json{{"mode", "drop"}, {"ell", ell}, {"C", c}, {"T", c * ell * ell}, {"ratio", ratio}, {"bound", 0.75}};
    };
  }

  const double gamma = s.number("gamma");
  open_interval(gamma, "gamma");
  const double p = s.exponent("p", 2.0);

  if (mode == "frequency") {
    const FieldSpec field = parse_field(s.section("field"), ctx, seed);
    const double t = s.number("t");
    s.finish();
    positive(t, "t");
    return [=](Outputs&, const Common& common, bool& pass) {
      const Field u = materialise(field);
      const auto r = frequency_decay_experiment(u, gamma, p, t, common.registry.get("heat", u.grid().dim(), p));
      pass = r.verdict;
      return json{{"mode", "frequency"}, {"report", to_json(r)}};
    };
  }

  require(p > 1.0, ErrorKind::config, "the decay lemma needs p > 1");
  const std::string kernel = s.text("kernel", "heat");
  const std::optional<double> ell = s.has("ell") ? std::optional(s.number("ell")) : std::nullopt;
  std::vector<FieldSpec> fields;
  std::optional<std::pair<Grid, int>> corpus;
  if (s.has("corpus")) {
    require(!s.has("field"), ErrorKind::config, "give either 'field' or 'corpus', not both");
    const Section c = s.section("corpus");
    const Grid g = parse_grid(c);
    const int count = c.integer("count");
    c.finish();
    require(count >= 1, ErrorKind::config, "corpus.count must be >= 1");
    corpus = std::pair(g, count);
  } else {
    fields.push_back(parse_field(s.section("field"), ctx, seed));
  }
  s.finish();
  kernel_by_name(kernel, 1);
  if (ell) positive(*ell, "ell");

  return [=](Outputs&, const Common& common, bool& pass) {
    std::vector<std::pair<std::string, Field>> inputs;
    if (corpus) {
      for (auto& item : scalar_corpus(corpus->first, seed, corpus->second)) {
        inputs.emplace_back(item.name, std::move(item.field));
      }
    } else {
      inputs.emplace_back("field", materialise(fields.front()));
    }
    json rows = json::array();
    int tested = 0, passed = 0;
    for (const auto& [name, u] : inputs) {
      const int d = u.grid().dim();
      const KernelSpec k = kernel_by_name(kernel, d);
      const double C0 = common.registry.get(kernel, d, p).C0;
      const DecayRequirements req = decay_requirements(k, gamma, p, C0);
      const double scale = ell ? *ell : smallest_certified_scale(u, req);
      if (scale == 0.0) {
        rows.push_back({{"name", name}, {"qualified", false}});
        continue;
      }
      const DecayReport r = decay_experiment(u, gamma, p, k, scale, C0);
      ++tested;
      passed += r.verdict ? 1 : 0;
      rows.push_back({{"name", name}, {"qualified", true}, {"report", to_json(r)}});
    }
    // A single field that fails the preconditions is a failed run; a corpus only
    // needs one qualifying member.
    pass = tested > 0 && passed == tested;
    return json{{"mode", "lemma"}, {"kernel", kernel}, {"gamma", gamma}, {"p", exponent_to_json(p)},
                {"tested", tested}, {"passed", passed}, {"fields", rows}};
  };
}

// ---------------------------------------------------------------------------
// ns-run

Work parse_ns_run(const Section& s, const RunContext& ctx, std::uint64_t seed) {
  const FieldSpec field = parse_field(s.section("field"), ctx, seed);
  const double T = s.number("T");
  RunOptions options;
  options.dt_max = s.number("dt_max", options.dt_max);
  options.sample_every = s.integer("sample_every", 0);
  const std::vector<double> ps = s.exponents("ps", {2.0, infinity});
  const double T_ref = s.number("T_ref", 2 * T);
  const std::optional<double> c_p = s.has("c_p") ? std::optional(s.number("c_p")) : std::nullopt;
  const bool snapshots = s.flag("snapshots", true);
  std::optional<std::pair<double, double>> decreasing;  // (γ, p)
  bool frequency_version = false;
  if (s.has("decreasing")) {
    const Section d = s.section("decreasing");
    decreasing = std::pair(d.number("gamma"), d.exponent("p", infinity));
    frequency_version = d.flag("frequency", false);
    d.finish();
    open_interval(decreasing->first, "decreasing.gamma");
  }
  s.finish();
  positive(T, "T");
  positive(options.dt_max, "dt_max");
  require(options.sample_every >= 0, ErrorKind::config, "sample_every must be >= 0");
  require(T_ref > T, ErrorKind::config, "T_ref must exceed T");
  require(field.type == "file" || field.grid.dim() >= 2, ErrorKind::config, "ns-run needs a velocity field");

  return [=](Outputs& out, const Common& common, bool& pass) {
    const Field u0 = materialise(field);
    const int d = u0.grid().dim();
    require(u0.components() == d, ErrorKind::invalid_input, "ns-run needs a d-component velocity");
    json result;
    if (decreasing) {
      const auto& k = common.registry.get("heat", d, decreasing->second);
      const DecreasingReport r = frequency_version
                                     ? decreasing_frequency_experiment(u0, decreasing->first, decreasing->second, k, options)
                                     : decreasing_experiment(u0, decreasing->first, decreasing->second, k, options);
      result["decreasing"] = to_json(r);
      pass = r.verdict;
    }
    const Trajectory tr = run(u0, T, options);
    double cp = 0.0;
    if (c_p) {
      cp = *c_p;
    } else {
      for (double p : ps) {
        if (p > d && common.registry.contains("heat", d, p)) {
          cp = common.registry.get("heat", d, p).c_p;
          break;
        }
      }
    }
    const BlowupMonitor m = monitor(tr.times, tr.snapshots, T_ref, ps, cp);
    out.with_path("monitor.csv", [&](const fs::path& path) { write_monitor_csv(m, path); });
    if (snapshots) {
      for (std::size_t i = 0; i < tr.snapshots.size(); ++i) {
        std::ostringstream name;
        name << "snapshots/u_" << std::setw(4) << std::setfill('0') << i << ".spf";
        out.field(name.str(), tr.snapshots[i]);
      }
    }
    json ps_json = json::array();
    for (double p : ps) ps_json.push_back(exponent_to_json(p));
    result["trajectory"] = {{"T", T},
                            {"steps", tr.steps},
                            {"times", tr.times},
                            {"max_divergence", tr.max_divergence},
                            {"max_energy_increase", tr.max_energy_increase},
                            {"final_energy", tr.final.history.back().energy},
                            {"final_sup", tr.final.history.back().sup}};
    result["monitor"] = {{"T_ref", T_ref}, {"c_p", cp}, {"ps", ps_json}, {"escape_times", m.escape_times()}};
    if (!decreasing) pass = true;
    return result;
  };
}

// ---------------------------------------------------------------------------
// criterion

Work parse_criterion(const Section& s) {
  const int d = s.integer("d");
  const double p = s.exponent("p");
  const double norm = s.number("norm_p");
  const std::vector<double> T0s = s.numbers("T0");
  s.finish();
  require(d >= 2 && d <= 3, ErrorKind::config, "d must be 2 or 3");
  require(p > d, ErrorKind::config, "the criterion needs p > d");
  positive(norm, "norm_p");
  for (double t : T0s) positive(t, "T0");
  return [=](Outputs& out, const Common& common, bool& pass) {
    const RegistryEntry& k = common.registry.get("heat", d, p);
    json rows = json::array();
    std::ostringstream csv;
    csv << "T0,T_bar,trivial,gamma,ell_bar,ell,beta,epsilon\n" << std::setprecision(17);
    for (double T0 : T0s) {
      const CriterionThresholds c = criterion_thresholds(norm, p, d, T0, k);
      rows.push_back(to_json(c));
      csv << c.T0 << ',' << c.T_bar << ',' << (c.trivial ? 1 : 0) << ',' << c.gamma << ',' << c.ell_bar
          << ',' << c.ell << ',' << c.beta << ',' << c.epsilon << '\n';
    }
    out.text("criterion.csv", csv.str());
    pass = true;
    return json{{"rows", rows}};
  };
}

// ---------------------------------------------------------------------------
// region

Rational rational_of(const json& v, const std::string& where) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  require(v.is_number_integer(), ErrorKind::config, "'" + where + "' must be an integer or a rational string");
  return Rational(v.get<std::int64_t>());
}

Work parse_region(const Section& s) {
  const int d = s.integer("d");
  std::optional<Rational> p;
  const json& pj = s.raw("p");
  if (!(pj.is_string() && pj.get<std::string>() == "inf")) p = rational_of(pj, "p");
  RegionOptions o;
  o.finite_energy = s.flag("finite_energy", o.finite_energy);
  o.energy_class = s.flag("energy_class", o.energy_class);
  o.sup_criterion = s.flag("sup_criterion", o.sup_criterion);
  o.lp_criterion = s.flag("lp_criterion", o.lp_criterion);
  if (s.has("z_classes")) {
    const json& z = s.raw("z_classes");
    require(z.is_array(), ErrorKind::config, "'z_classes' must be a list of integers");
    for (const auto& k : z) {
      require(k.is_number_integer() && k.get<int>() >= 0, ErrorKind::config, "'z_classes' must hold integers >= 0");
      o.z_classes.push_back(k.get<int>());
    }
  }
  if (s.has("window")) {
    const json& w = s.raw("window");
    require(w.is_array() && w.size() == 4, ErrorKind::config, "'window' must be [zx_min, zx_max, zt_min, zt_max]");
    std::array<Rational, 4> win;
    for (int i = 0; i < 4; ++i) win[i] = rational_of(w[i], "window");
    require(win[0] < win[1] && win[2] < win[3], ErrorKind::config, "'window' bounds must be increasing");
    o.window = win;
  }
  s.finish();
  require(d >= 2, ErrorKind::config, "d must be >= 2");
  require(!p || *p >= Rational(d), ErrorKind::config, "p must be >= d");
  return [=](Outputs& out, const Common&, bool& pass) {
    const ExponentRegion r = admissible_region(d, p, o);
    out.with_path("region.csv", [&](const fs::path& path) { write_region_csv(r, path); });
    out.with_path("region.dat", [&](const fs::path& path) { write_region_gnuplot(r, path); });
    pass = true;
    return json{{"region", to_json(r)}};
  };
}

// ---------------------------------------------------------------------------
// calibrate

Work parse_calibrate(const Section& s, std::uint64_t seed) {
  CalibrationOptions o;
  o.seed = seed;
  o.scalar_count = s.integer("scalar_count", o.scalar_count);
  o.velocity_count = s.integer("velocity_count", o.velocity_count);
  if (s.has("dims")) {
    o.dims.clear();
    for (double d : s.numbers("dims")) o.dims.push_back(static_cast<int>(d));
  }
  o.ps = s.exponents("ps", o.ps);
  o.navier_stokes = s.flag("navier_stokes", o.navier_stokes);
  s.finish();
  require(o.scalar_count >= 1 && o.velocity_count >= 1, ErrorKind::config, "corpus counts must be >= 1");
  for (int d : o.dims) require(d >= 1 && d <= 3, ErrorKind::config, "dims must lie in {1, 2, 3}");
  return [=](Outputs& out, const Common&, bool& pass) {
    const CalibrationResult r = calibrate_registry(o);
    out.write_json("constants_registry.json", r.registry.to_json());
    out.write_json("calibration_log.json", r.log);
    pass = true;
    return json{{"calibrated_version", r.registry.version}, {"entries", r.registry.entries.size()}};
  };
}

std::uint64_t seed_of(const Section& s, const RunContext& ctx, std::uint64_t fallback) {
  std::uint64_t seed = fallback;
  if (s.has("seed")) {
    const json& v = s.raw("seed");
    require(v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0), ErrorKind::config,
            "'seed' must be a nonnegative integer");
    seed = v.get<std::uint64_t>();
  }
  return ctx.seed ? *ctx.seed : seed;
}

// ---------------------------------------------------------------------------
// ustar

std::string octal(std::uint64_t v, std::size_t width) {
  std::ostringstream s;
  s << std::oct << std::setw(static_cast<int>(width - 1)) << std::setfill('0') << v;
  return s.str();
}

void append_member(std::string& tar, const std::string& name, const std::string& data) {
  require(!name.empty() && name.size() < 100, ErrorKind::io, "bundle member name too long: " + name);
  char h[512] = {};
  std::memcpy(h, name.data(), name.size());
  std::memcpy(h + 100, octal(0644, 8).c_str(), 7);
  std::memcpy(h + 108, octal(0, 8).c_str(), 7);
  std::memcpy(h + 116, octal(0, 8).c_str(), 7);
  std::memcpy(h + 124, octal(data.size(), 12).c_str(), 11);
  std::memcpy(h + 136, octal(0, 12).c_str(), 11);  // mtime fixed for byte-identical bundles
  std::memset(h + 148, ' ', 8);
  h[156] = '0';
  std::memcpy(h + 257, "ustar", 6);
  std::memcpy(h + 263, "00", 2);
  unsigned sum = 0;
  for (unsigned char c : h) sum += c;
  std::memcpy(h + 148, octal(sum, 7).c_str(), 6);
  h[154] = '\0';
  h[155] = ' ';
  tar.append(h, 512);
  tar.append(data);
  tar.append((512 - data.size() % 512) % 512, '\0');
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  require(in.good(), ErrorKind::io, "cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::contract:
      return 1;
    case ErrorKind::resolution:
    case ErrorKind::domain:
    case ErrorKind::calibration:
      return 3;
    default:
      return 2;
  }
}

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = {"certify", "freq",   "heat-decay", "ns-run",
                                                 "criterion", "region", "calibrate"};
  return names;
}

std::string config_hash(const json& config) { return sha256_hex(config.dump()); }

RunResult run(const std::string& command, const json& config, const RunContext& ctx) {
  require(ctx.threads >= 1, ErrorKind::config, "--threads must be >= 1");
  const Section s(config, "");
  const std::uint64_t seed = seed_of(s, ctx, command == "calibrate" ? CalibrationOptions{}.seed : 0);

  Work work;
  try {
    if (command == "certify") {
      work = parse_certify(s, ctx, seed);
    } else if (command == "freq") {
      work = parse_freq(s, ctx, seed);
    } else if (command == "heat-decay") {
      work = parse_heat_decay(s, ctx, seed);
    } else if (command == "ns-run") {
      work = parse_ns_run(s, ctx, seed);
    } else if (command == "criterion") {
      work = parse_criterion(s);
    } else if (command == "region") {
      work = parse_region(s);
    } else if (command == "calibrate") {
      work = parse_calibrate(s, seed);
    } else {
      fail(ErrorKind::config, "unknown command '" + command + "'");
    }
  } catch (const Error& e) {
    // Anything rejected before computing is a configuration problem.
    if (e.kind() == ErrorKind::invalid_input) fail(ErrorKind::config, e.what());
    throw;
  }

  Common common{load_registry(ctx), seed};
  Outputs out(ctx.out);
  out.write_json("config.json", config);
  bool pass = false;
  json result = work(out, common, pass);

  RunResult r;
  r.exit_code = pass ? 0 : 1;
  r.files = out.files();
  r.files.push_back("report.json");
  r.report = {{"command", command},
              {"registry_version", common.registry.version},
              {"config_sha256", config_hash(config)},
              {"seed", seed},
              {"verdict", verdict_word(pass)},
              {"exit_code", r.exit_code},
              {"files", r.files},
              {"result", result}};
  out.write_json("report.json", r.report);
  return r;
}

json write_bundle(const fs::path& run_dir, const fs::path& archive) {
  const fs::path report_path = run_dir / "report.json";
  require(fs::exists(report_path), ErrorKind::io, "incomplete bundle: " + report_path.string() + " is missing");
  json report;
  try {
    report = json::parse(slurp(report_path));
  } catch (const json::exception& e) {
    fail(ErrorKind::io, "incomplete bundle: report.json does not parse: " + std::string(e.what()));
  }
  require(report.contains("files") && report.at("files").is_array() && !report.at("files").empty(), ErrorKind::io,
          "incomplete bundle: the report lists no outputs");
  std::vector<std::string> names = report.at("files").get<std::vector<std::string>>();
  std::sort(names.begin(), names.end());
  json files = json::array();
  std::vector<std::pair<std::string, std::string>> members;
  for (const auto& name : names) {
    const fs::path p = run_dir / name;
    require(fs::exists(p), ErrorKind::io, "incomplete bundle: " + name + " is missing");
    std::string data = slurp(p);
    files.push_back({{"name", name}, {"bytes", data.size()}, {"sha256", sha256_hex(data)}});
    members.emplace_back(name, std::move(data));
  }
  const json manifest = {{"command", report.at("command")},
                         {"config_sha256", report.at("config_sha256")},
                         {"seed", report.at("seed")},
                         {"registry_version", report.at("registry_version")},
                         {"files", files}};
  std::string tar;
  append_member(tar, "manifest.json", manifest.dump(2) + "\n");
  for (const auto& [name, data] : members) append_member(tar, name, data);
  tar.append(1024, '\0');
  std::ofstream out(archive, std::ios::binary);
  out << tar;
  require(out.good(), ErrorKind::io, "cannot write " + archive.string());
  return manifest;
}

std::map<std::string, std::string> read_bundle(const fs::path& archive) {
  const std::string tar = slurp(archive);
  std::map<std::string, std::string> members;
  std::size_t pos = 0;
  while (pos + 512 <= tar.size()) {
    const char* h = tar.data() + pos;
    if (h[0] == '\0') break;
    const std::string name(h, strnlen(h, 100));
    const std::size_t size = std::stoull(std::string(h + 124, 11), nullptr, 8);
    pos += 512;
    require(pos + size <= tar.size(), ErrorKind::io, "truncated bundle member " + name);
    members[name] = tar.substr(pos, size);
    pos += (size + 511) / 512 * 512;
  }
  require(members.count("manifest.json") > 0, ErrorKind::io, "bundle has no manifest.json");
  return members;
}

RunResult certify_from_bundle(const fs::path& archive, const RunContext& ctx) {
  const auto members = read_bundle(archive);
  for (const char* need : {"config.json", "report.json", "field.spf"}) {
    require(members.count(need) > 0, ErrorKind::io, std::string("bundle lacks ") + need);
  }
  const json manifest = json::parse(members.at("manifest.json"));
  require(manifest.at("command") == "certify", ErrorKind::config, "bundle was not produced by certify");
  const json config = json::parse(members.at("config.json"));
  const json bundled = json::parse(members.at("report.json"));
  require(config_hash(config) == manifest.at("config_sha256").get<std::string>(), ErrorKind::io,
          "bundle config does not match its manifest hash");

  const Section s(config, "");
  s.has("seed");
  s.has("field");
  s.has("dump_mask");
  const SparsenessParams params = parse_sparseness(s);
  s.finish();
  const Field u = decode_field(members.at("field.spf"));

  Outputs out(ctx.out);
  bool pass = false;
  const json result = certify_field(u, params, false, out, pass);
  const bool reproduced = result.at("certificate") == bundled.at("result").at("certificate");
  const ConstantsRegistry registry = load_registry(ctx);

  RunResult r;
  r.exit_code = pass && reproduced ? 0 : 1;
  r.files = out.files();
  r.files.push_back("report.json");
  r.report = {{"command", "certify"},
              {"from_bundle", archive.string()},
              {"registry_version", registry.version},
              {"bundled_registry_version", manifest.at("registry_version")},
              {"config_sha256", manifest.at("config_sha256")},
              {"seed", manifest.at("seed")},
              {"reproduced", reproduced},
              {"verdict", verdict_word(pass)},
              {"exit_code", r.exit_code},
              {"files", r.files},
              {"result", result}};
  out.write_json("report.json", r.report);
  return r;
}

}  // namespace spns::cli
