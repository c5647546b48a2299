#include "spns/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "spns/errors.hpp"
#include "spns/spectral.hpp"

namespace spns {

namespace {

using std::numbers::pi;

double sphere_area(int d) { return d == 1 ? 2.0 : d == 2 ? 2 * pi : 4 * pi; }

double radius_of(const std::array<double, 3>& v) {
  return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
}

// G = F⁻¹χ at radius r.  χ = 1 on [0, 3/4] is integrated in closed form; only the
// transition band [3/4, 4/3] needs quadrature (Simpson, nodes and χ precomputed).
class LowPassQuadrature {
 public:
  explicit LowPassQuadrature(int d) : d_(d) {
    const double h = (b - a) / intervals;
    for (int i = 0; i <= intervals; ++i) {
      const double q = a + i * h;
      const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      nodes_.push_back(q);
      weights_.push_back(w * h / 3.0 * low_pass_profile(q));
    }
  }

  double operator()(double r) const {
    namespace bm = boost::math;
    double band = 0.0;
    if (d_ == 1) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) band += weights_[i] * std::cos(nodes_[i] * r);
      return ((r == 0.0 ? a : std::sin(a * r) / r) + band) / pi;
    }
    if (d_ == 2) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        band += weights_[i] * bm::cyl_bessel_j(0, nodes_[i] * r) * nodes_[i];
      }
      return ((r == 0.0 ? a * a / 2 : a * bm::cyl_bessel_j(1, a * r) / r) + band) / (2 * pi);
    }
    if (r == 0.0) {
      for (std::size_t i = 0; i < nodes_.size(); ++i) band += weights_[i] * nodes_[i] * nodes_[i];
      return (a * a * a / 3 + band) / (2 * pi * pi);
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) band += weights_[i] * std::sin(nodes_[i] * r) * nodes_[i];
    const double core = (std::sin(a * r) - a * r * std::cos(a * r)) / (r * r);
    return (core + band) / (2 * pi * pi * r);
  }

 private:
  static constexpr double a = 0.75, b = 4.0 / 3.0;
  static constexpr int intervals = 700;
  int d_;
  std::vector<double> nodes_, weights_;
};

std::vector<double> masked_values(const Field& u, const Mask& m, bool keep) {
  std::vector<double> v(u.values().begin(), u.values().end());
  const std::size_t N = u.points();
  for (int c = 0; c < u.components(); ++c) {
    for (std::size_t i = 0; i < N; ++i) {
      if (static_cast<bool>(m.bits[i]) != keep) v[c * N + i] = 0.0;
    }
  }
  return v;
}

double max_abs_difference(const Field& a, const Field& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  }
  return m;
}

void check_time(const Grid& g, double t) {
  require(t > 0.0 && std::isfinite(t), ErrorKind::invalid_input, "time must be positive");
  require(std::sqrt(t) <= g.length() / 8, ErrorKind::domain,
          "sqrt(t) = " + std::to_string(std::sqrt(t)) + " exceeds L/8 = " +
              std::to_string(g.length() / 8) + "; enlarge the box");
}

std::string format_check(const InequalityCheck& c) {
  std::ostringstream os;
  os << c.name << ": " << c.lhs << " vs " << c.rhs;
  return os.str();
}

}  // namespace

KernelSpec KernelSpec::heat(int d) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input, "dimension must be 1, 2 or 3");
  KernelSpec k;
  k.kind_ = KernelKind::heat;
  k.d_ = d;
  k.name_ = "heat";
  const double amp = std::pow(4 * pi, -d / 2.0);
  k.profile_ = [amp](double r) { return amp * std::exp(-r * r / 4); };
  k.tabulate(k.profile_, 24.0, 0.01);
  k.l1_ = 1.0;
  k.integral_ = 1.0;
  k.linf_ = amp;
  return k;
}

KernelSpec KernelSpec::low_pass(int d) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input, "dimension must be 1, 2 or 3");
  static std::mutex mutex;
  static std::map<int, KernelSpec> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(d); it != cache.end()) return it->second;
  KernelSpec k;
  k.kind_ = KernelKind::low_pass;
  k.d_ = d;
  k.name_ = "low_pass";
  const LowPassQuadrature quadrature(d);
  k.tabulate(quadrature, 160.0, 0.05);
  // Evaluations between table nodes interpolate; the table is the kernel.
  auto radii = k.radii_;
  auto values = k.values_;
  k.profile_ = [radii, values](double r) {
    if (r >= radii.back()) return 0.0;
    const double dr = radii[1] - radii[0];
    const auto i = static_cast<std::size_t>(r / dr);
    const double w = r / dr - static_cast<double>(i);
    return (1 - w) * values[i] + w * values[i + 1];
  };
  cache.emplace(d, k);
  return k;
}

KernelSpec KernelSpec::custom(int d, std::string name, std::function<double(double)> profile,
                              double support_radius) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input, "dimension must be 1, 2 or 3");
  require(support_radius > 0.0, ErrorKind::invalid_input, "support radius must be positive");
  KernelSpec k;
  k.kind_ = KernelKind::custom;
  k.d_ = d;
  k.name_ = std::move(name);
  k.profile_ = std::move(profile);
  k.tabulate(k.profile_, support_radius, support_radius / 20000);
  require(k.l1_ > 0.0 && std::isfinite(k.l1_), ErrorKind::invalid_input,
          "kernel must have finite nonzero L1 norm");
  return k;
}

void KernelSpec::tabulate(const std::function<double(double)>& g, double support, double dr) {
  support_ = support;
  const auto count = static_cast<std::size_t>(std::llround(support / dr)) + 1;
  radii_.resize(count);
  values_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    radii_[i] = static_cast<double>(i) * dr;
    values_[i] = g(radii_[i]);
  }
  // Per-interval Simpson with a midpoint sample; trapezoid errors of O(dr²) would
  // show up when sampled kernels are renormalised to ∫G.
  const double s = sphere_area(d_);
  auto w = [&](double r) { return s * std::pow(r, d_ - 1); };
  tails_.assign(count, 0.0);
  double signed_total = 0.0;
  for (std::size_t i = count - 1; i-- > 0;) {
    const double r0 = radii_[i], r1 = radii_[i + 1], rm = 0.5 * (r0 + r1);
    const double gm = g(rm);
    const double f0 = values_[i] * w(r0), fm = gm * w(rm), f1 = values_[i + 1] * w(r1);
    tails_[i] = tails_[i + 1] + dr / 6 * (std::abs(f0) + 4 * std::abs(fm) + std::abs(f1));
    signed_total += dr / 6 * (f0 + 4 * fm + f1);
  }
  l1_ = tails_[0];
  integral_ = signed_total;
  linf_ = 0.0;
  for (double v : values_) linf_ = std::max(linf_, std::abs(v));
}

double KernelSpec::value(double r) const { return profile_(r); }

double KernelSpec::tail(double ell_bar) const {
  if (ell_bar <= 0.0) return l1_;
  if (kind_ == KernelKind::heat) {
    return boost::math::gamma_q(d_ / 2.0, ell_bar * ell_bar / 4);
  }
  if (ell_bar >= radii_.back()) return 0.0;
  const double dr = radii_[1] - radii_[0];
  const auto i = static_cast<std::size_t>(ell_bar / dr);
  const double w = ell_bar / dr - static_cast<double>(i);
  return (1 - w) * tails_[i] + w * tails_[i + 1];
}

double KernelSpec::tail_inverse(double level) const {
  require(level > 0.0, ErrorKind::invalid_input, "tail level must be positive");
  if (kind_ == KernelKind::heat) {
    double lo = 0.0, hi = 64.0;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) <= level ? hi : lo) = mid;
    }
    return hi;
  }
  for (std::size_t i = 0; i < tails_.size(); ++i) {
    if (tails_[i] <= level) return radii_[i];
  }
  fail(ErrorKind::calibration, "kernel tail never drops below " + std::to_string(level) +
                                   " within the tabulated support");
}

double KernelSpec::lq_norm(double q) const {
  require(q >= 1.0, ErrorKind::invalid_input, "q must be at least 1");
  if (std::isinf(q)) return linf_;
  if (kind_ == KernelKind::heat) {
    return linf_ * std::pow(4 * pi / q, d_ / (2 * q));
  }
  const double s = sphere_area(d_);
  const double dr = radii_[1] - radii_[0];
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < radii_.size(); ++i) {
    const double a = std::pow(std::abs(values_[i]), q) * s * std::pow(radii_[i], d_ - 1);
    const double b = std::pow(std::abs(values_[i + 1]), q) * s * std::pow(radii_[i + 1], d_ - 1);
    sum += 0.5 * (a + b) * dr;
  }
  return std::pow(sum, 1.0 / q);
}

Field convolve(const Field& kernel, const Field& u) {
  require(kernel.grid() == u.grid() && kernel.components() == 1, ErrorKind::invalid_input,
          "convolve needs a scalar kernel on the field's grid");
  const Grid& g = u.grid();
  const auto N = static_cast<double>(g.size());
  SpectralField K = transform(kernel);
  SpectralField U = transform(u);
  for (int c = 0; c < U.components; ++c) {
    auto block = U.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) block[i] *= K.coefficients[i] * N;
  }
  return inverse(U);
}

Field discrete_kernel(const Grid& grid, double t, const KernelSpec& kernel) {
  check_time(grid, t);
  require(kernel.dim() == grid.dim(), ErrorKind::invalid_input, "kernel and grid dimensions differ");
  const double st = std::sqrt(t);
  if (kernel.kind() == KernelKind::custom) {
    const double lost = kernel.tail(grid.length() / (2 * st));
    require(lost <= 1e-8 * kernel.l1_norm(), ErrorKind::domain,
            "kernel mass outside the box is " + std::to_string(lost) + "; enlarge the box");
    const double scale = std::pow(t, -grid.dim() / 2.0) * grid.cell_volume();
    std::vector<double> v(grid.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      v[i] = scale * kernel.value(radius_of(grid.position(i)) / st);
      mass += v[i];
    }
    if (std::abs(kernel.integral()) > 0.0 && mass != 0.0) {
      const double fix = kernel.integral() / mass;
      for (double& x : v) x *= fix;
    }
    return Field(grid, 1, std::move(v));
  }
  SpectralField S{grid, 1, std::vector<std::complex<double>>(grid.size())};
  const auto N = static_cast<double>(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double xi2 = grid.frequency_squared(i);
    const double m = kernel.kind() == KernelKind::heat ? std::exp(-t * xi2)
                                                       : low_pass_profile(st * std::sqrt(xi2));
    S.coefficients[i] = m / N;
  }
  return inverse(S);
}

Field evolve(const Field& u, double t, const KernelSpec& kernel) {
  const Grid& g = u.grid();
  check_time(g, t);
  require(kernel.dim() == g.dim(), ErrorKind::invalid_input, "kernel and grid dimensions differ");
  switch (kernel.kind()) {
    case KernelKind::heat:
      return apply_multiplier(u, [t](const auto& xi) {
        return std::exp(-t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]));
      });
    case KernelKind::low_pass: {
      const double st = std::sqrt(t);
      return apply_multiplier(u, [st](const auto& xi) { return low_pass_profile(st * radius_of(xi)); });
    }
    case KernelKind::custom:
      break;
  }
  return convolve(discrete_kernel(g, t, kernel), u);
}

DecayRequirements decay_requirements(const KernelSpec& kernel, double gamma, double p, double C0) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::invalid_input, "gamma must lie in (0,1)");
  validate_exponent(p);
  require(p > 1.0, ErrorKind::contract,
          "p = 1 refused: the case p=1 fails, since the heat equation preserves the L1 norm of "
          "nonnegative data regardless of sparseness");
  require(C0 > gamma, ErrorKind::calibration, "C0 must exceed gamma");
  DecayRequirements r;
  r.gamma = gamma;
  r.p = p;
  r.d = kernel.dim();
  r.C0 = C0;
  r.g_l1 = kernel.l1_norm();
  r.g_linf = kernel.linf_norm();
  r.f_of_gamma = kernel.kind() == KernelKind::heat ? std::sqrt(C0 * std::log(C0 / gamma))
                                                   : kernel.tail_inverse(gamma / 3);
  r.ell_bar = r.f_of_gamma;
  r.beta_max = gamma / (3 * r.g_l1);
  const double rhs = gamma / (C0 * r.g_linf * std::pow(r.ell_bar, r.d));
  r.epsilon_max = std::isinf(p) ? rhs : std::pow(rhs, p / (p - 1));
  r.epsilon_max = std::min(r.epsilon_max, 1.0 - 1e-12);
  r.beta_max = std::min(r.beta_max, 1.0 - 1e-12);
  return r;
}

namespace {

SparsenessParams params_for(const DecayRequirements& req, double ell) {
  return SparsenessParams{req.epsilon_max, req.beta_max, ell, req.p, TailRule::strict};
}

std::vector<InequalityCheck> requirement_checks(const DecayRequirements& req,
                                                const SparsenessCertificate& c) {
  const double inv_pp = std::isinf(req.p) ? 1.0 : 1.0 - 1.0 / req.p;
  const double vol_rhs = req.gamma / (req.C0 * req.g_linf * std::pow(req.ell_bar, req.d));
  return {
      {"ell_bar >= f(gamma)", req.ell_bar, req.f_of_gamma, req.ell_bar >= req.f_of_gamma},
      {"tail fraction < gamma/(3 |G|_1)", c.measured_beta, req.beta_max, c.tail_ok},
      {"volume fraction^(1-1/p) <= gamma/(C0 |G|_inf ell_bar^d)",
       std::pow(c.measured_epsilon, inv_pp), vol_rhs, c.fraction_ok},
  };
}

}  // namespace

double smallest_certified_scale(const Field& u, const DecayRequirements& req) {
  const Grid& g = u.grid();
  for (int k = 8;; ++k) {
    const double ell = g.spacing() * std::exp2(k / 4.0);
    if (ell >= g.length() / 2) return 0.0;
    if (ell / req.ell_bar > g.length() / 8) return 0.0;
    if (certify(u, params_for(req, ell)).verdict) return ell;
  }
}

DecayReport decay_experiment(const Field& u, double gamma, double p, const KernelSpec& kernel,
                             double ell, double C0) {
  const Grid& g = u.grid();
  DecayReport r;
  r.req = decay_requirements(kernel, gamma, p, C0);
  r.ell = ell;
  r.t = std::pow(ell / r.req.ell_bar, 2);
  check_time(g, r.t);
  r.certificate = certify(u, params_for(r.req, ell));
  r.checks = requirement_checks(r.req, r.certificate);
  if (!r.certificate.verdict) {
    std::string msg = "decay preconditions unmet at ell = " + std::to_string(ell) + ":";
    for (const auto& c : r.checks) {
      if (!c.holds) msg += " [" + format_check(c) + "]";
    }
    fail(ErrorKind::contract, msg);
  }

  Field K = discrete_kernel(g, r.t, kernel);
  std::vector<double> near(g.size()), far(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const bool inside = radius_of(g.position(i)) <= ell;
    near[i] = inside ? K.values()[i] : 0.0;
    far[i] = inside ? 0.0 : K.values()[i];
  }
  const Field Knear(g, 1, std::move(near)), Kfar(g, 1, std::move(far));
  const Mask& S = r.certificate.witness;
  const Field uS(g, u.components(), masked_values(u, S, true));
  const Field uSc(g, u.components(), masked_values(u, S, false));
  const Field I_far = convolve(Kfar, u);
  const Field II_S = convolve(Knear, uS);
  const Field II_Sc = convolve(Knear, uSc);
  const Field total = evolve(u, r.t, kernel);

  r.norm_u = lp_norm(u, p);
  r.norm_evolved = lp_norm(total, p);
  r.ratio = r.norm_evolved / r.norm_u;
  r.far = lp_norm(I_far, p);
  r.near_s = lp_norm(II_S, p);
  r.near_sc = lp_norm(II_Sc, p);
  const double peak = lp_norm(total, infinity);
  r.identity_residual =
      max_abs_difference(I_far.plus(II_S).plus(II_Sc), total) / (peak > 0 ? peak : 1.0);
  const double cap = (gamma / 3 + 1e-6) * r.norm_u;
  r.terms_ok = r.far <= cap && r.near_s <= cap && r.near_sc <= cap;
  r.verdict = r.ratio <= gamma && r.terms_ok;
  return r;
}

FrequencyDecayReport frequency_decay_experiment(const Field& u, double gamma, double p, double t,
                                                const RegistryEntry& k) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::invalid_input, "gamma must lie in (0,1)");
  require(t > 0.0, ErrorKind::invalid_input, "time must be positive");
  const Grid& g = u.grid();
  DyadicDecomposition dec(g);
  FrequencyDecayReport r;
  r.gamma = gamma;
  r.p = p;
  r.t = t;
  r.J = std::log2(k.K_cal / (gamma * std::sqrt(t)));
  require(r.J >= dec.j_min() && r.J <= dec.j_max() + 1, ErrorKind::domain,
          "frequency level J = " + std::to_string(r.J) + " outside the resolvable range [" +
              std::to_string(dec.j_min()) + ", " + std::to_string(dec.j_max() + 1) + "]");
  r.certificate = certify_frequency(u, {gamma / 2, r.J}, p);
  if (!r.certificate.verdict) {
    fail(ErrorKind::contract, "frequency decay precondition unmet: |low-pass|/|u| = " +
                                  std::to_string(r.certificate.ratio) + " > beta = gamma/2 = " +
                                  std::to_string(gamma / 2) + " at J = " + std::to_string(r.J));
  }
  const double norm = lp_norm(u, p);
  const KernelSpec heat = KernelSpec::heat(g.dim());
  r.ratio = lp_norm(evolve(u, t, heat), p) / norm;
  const double J = r.J;
  auto heat_symbol = [t](const auto& xi) {
    return std::exp(-t * (xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]));
  };
  r.low_ratio = lp_norm(apply_multiplier(u, [&](const auto& xi) {
                          return heat_symbol(xi) * dec.low_pass_symbol(J, radius_of(xi));
                        }), p) / norm;
  r.high_ratio = lp_norm(apply_multiplier(u, [&](const auto& xi) {
                           return heat_symbol(xi) * (1.0 - dec.low_pass_symbol(J, radius_of(xi)));
                         }), p) / norm;
  r.inverse_square = 1.0 / (t * std::exp2(2 * J));
  r.blocks_ok = true;
  const Field heated = evolve(u, t, heat);
  const auto blocks = dec.blocks(heated);
  // Blocks far below the transform's round-off of the heated field are not resolved.
  const double floor = 1e-12 * lp_norm(heated, p) / norm;
  for (int j = dec.j_min(); j <= dec.j_max(); ++j) {
    BlockDecay b;
    b.j = j;
    b.measured = lp_norm(blocks[j - dec.j_min()], p) / norm;
    b.bound = k.block_C * std::exp(-k.block_c * t * std::exp2(2 * j));
    b.holds = b.measured <= b.bound * (1 + 1e-9) + floor;
    r.blocks_ok = r.blocks_ok && b.holds;
    if (j >= std::floor(J)) r.tail_sum_bound += b.bound;
    r.blocks.push_back(b);
  }
  r.verdict = r.ratio <= gamma;
  return r;
}

SpatialFrequencyReport spatial_implies_frequency_check(const Field& u, double gamma, double J,
                                                       double p, double C0) {
  const Grid& g = u.grid();
  const KernelSpec kernel = KernelSpec::low_pass(g.dim());
  SpatialFrequencyReport r;
  r.req = decay_requirements(kernel, gamma, p, C0);
  r.gamma = gamma;
  r.p = p;
  r.J = J;
  const double ell = r.req.ell_bar * std::exp2(-J);
  double lo = infinity, hi = 0.0;
  for (std::size_t i = 0; i < u.points(); ++i) {
    lo = std::min(lo, u.magnitude(i));
    hi = std::max(hi, u.magnitude(i));
  }
  if (hi == 0.0 || hi - lo <= 1e-14 * hi) {
    r.vacuous = true;
    if (hi > 0.0) r.frequency = certify_frequency(u, {gamma, J}, p);
    r.verdict = true;
    return r;
  }
  r.spatial = certify(u, params_for(r.req, ell));
  r.precondition_met = r.spatial.verdict;
  r.frequency = certify_frequency(u, {gamma, J}, p);
  if (!r.precondition_met && !r.frequency.verdict) {
    std::string msg = "spatial sparseness precondition absent at ell = " + std::to_string(ell) + ":";
    for (const auto& c : requirement_checks(r.req, r.spatial)) {
      if (!c.holds) msg += " [" + format_check(c) + "]";
    }
    fail(ErrorKind::contract, msg);
  }
  r.verdict = r.frequency.verdict;
  return r;
}

double heat_drop_ratio(const Field& u, double ell, double C) {
  const double peak = lp_norm(u, infinity);
  require(peak > 0.0, ErrorKind::degenerate, "heat drop of a zero field");
  return lp_norm(evolve(u, C * ell * ell, KernelSpec::heat(u.grid().dim())), infinity) / peak;
}

namespace {

nlohmann::json requirements_json(const DecayRequirements& q) {
  return {{"gamma", q.gamma},       {"p", exponent_to_json(q.p)}, {"d", q.d},
          {"C0", q.C0},             {"f_of_gamma", q.f_of_gamma}, {"ell_bar", q.ell_bar},
          {"G_l1", q.g_l1},         {"G_linf", q.g_linf},         {"beta_max", q.beta_max},
          {"epsilon_max", q.epsilon_max}};
}

}  // namespace

nlohmann::json to_json(const DecayReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  return {{"requirements", requirements_json(r.req)},
          {"ell", r.ell},
          {"t", r.t},
          {"certificate", to_json(r.certificate)},
          {"checks", checks},
          {"norm_u", r.norm_u},
          {"norm_evolved", r.norm_evolved},
          {"ratio", r.ratio},
          {"terms", {{"far", r.far}, {"near_S", r.near_s}, {"near_Sc", r.near_sc},
                     {"cap", r.req.gamma / 3 * r.norm_u}}},
          {"identity_residual", r.identity_residual},
          {"terms_ok", r.terms_ok},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const FrequencyDecayReport& r) {
  nlohmann::json blocks = nlohmann::json::array();
  for (const auto& b : r.blocks) {
    blocks.push_back({{"j", b.j}, {"measured", b.measured}, {"bound", b.bound}, {"holds", b.holds}});
  }
  return {{"gamma", r.gamma},
          {"p", exponent_to_json(r.p)},
          {"t", r.t},
          {"J", r.J},
          {"certificate", to_json(r.certificate)},
          {"ratio", r.ratio},
          {"low_ratio", r.low_ratio},
          {"high_ratio", r.high_ratio},
          {"tail_sum_bound", r.tail_sum_bound},
          {"inverse_square", r.inverse_square},
          {"blocks", blocks},
          {"blocks_ok", r.blocks_ok},
          {"verdict", r.verdict}};
}

nlohmann::json to_json(const SpatialFrequencyReport& r) {
  nlohmann::json j = {{"gamma", r.gamma},
                      {"p", exponent_to_json(r.p)},
                      {"J", r.J},
                      {"vacuous", r.vacuous},
                      {"precondition_met", r.precondition_met},
                      {"requirements", requirements_json(r.req)},
                      {"verdict", r.verdict}};
  if (!r.vacuous) j["spatial"] = to_json(r.spatial);
  if (r.vacuous && r.frequency.ratio == 0.0) return j;
  j["frequency"] = to_json(r.frequency);
  return j;
}

}  // namespace spns
