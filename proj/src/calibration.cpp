#include "spns/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spns/errors.hpp"
#include "spns/frequency.hpp"
#include "spns/hash.hpp"
#include "spns/navier_stokes.hpp"
#include "spns/spectral.hpp"
#include "spns/sparseness.hpp"

namespace spns {

namespace {

using std::numbers::pi;

constexpr int max_doublings = 8;

double radius(const std::array<double, 3>& xi) {
  return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

// Points per axis for kernel-level FFT norms.
int kernel_points(int d) { return d == 1 ? 8192 : d == 2 ? 512 : 128; }

double a_exponent(int d, double p) { return 0.5 * (1.0 - (std::isinf(p) ? 0.0 : d / p)); }

}  // namespace

double dyadic_ceil(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorKind::invalid_input, "dyadic ceiling of a nonpositive value");
  return std::exp2(std::ceil(std::log2(x) - 1e-12));
}

double unit_ball_volume(int d) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input, "dimension must be 1, 2 or 3");
  return d == 1 ? 2.0 : d == 2 ? pi : 4.0 * pi / 3.0;
}

std::vector<double> calibration_gammas() {
  return {1.0 / 2, 1.0 / 4, 1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};
}

double multiplier_kernel_l1(int d, const std::function<double(double)>& symbol, double L, int n) {
  const Grid g(d, n, L);
  SpectralField F{g, 1, std::vector<std::complex<double>>(g.size())};
  const double inv_n = 1.0 / static_cast<double>(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    F.coefficients[i] = symbol(radius(g.frequency_vector(i))) * inv_n;
  }
  const Field K = inverse(F);
  double sum = 0.0;
  for (double v : K.values()) sum += std::abs(v);
  return sum;
}

double high_pass_heat_norm(int d, double s) {
  require(s > 0.0, ErrorKind::invalid_input, "s must be positive");
  const int n = kernel_points(d);
  // e^{−s(π/h)²} ≤ e^{−30} at the Nyquist radius; the box holds the Gaussian to e^{−30}.
  const double h_max = pi * std::sqrt(s / 30.0);
  const double L = std::min(static_cast<double>(n) * h_max, std::max(32.0, 24.0 * std::sqrt(s)));
  return multiplier_kernel_l1(
      d, [s](double r) { return (1.0 - low_pass_profile(r)) * std::exp(-s * r * r); }, L, n);
}

double block_heat_norm(int d, double tau) {
  require(tau >= 0.0, ErrorKind::invalid_input, "tau must be nonnegative");
  // φ vanishes beyond 8/3 < π, so h = 1 resolves the symbol exactly.
  const int n = d == 1 ? 1024 : d == 2 ? 128 : 64;
  return multiplier_kernel_l1(
      d, [tau](double r) { return block_profile(r) * std::exp(-tau * r * r); }, n, n);
}

double heat_tail_constant(const KernelSpec& kernel) {
  const auto& r = kernel.tail_radii();
  const auto& t = kernel.tail_values();
  double worst = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst = std::max(worst, t[i] * std::exp(r[i] * r[i] / 8.0));
  }
  return worst;
}

double kernel_C0(const KernelSpec& kernel, const std::vector<double>& gammas) {
  double C0 = dyadic_ceil(std::max(3.0 * unit_ball_volume(kernel.dim()), 1.5));
  if (kernel.kind() != KernelKind::heat) return C0;
  for (int k = 0; k <= max_doublings; ++k, C0 *= 2) {
    bool ok = true;
    for (double g : gammas) ok = ok && kernel.tail(std::sqrt(C0 * std::log(C0 / g))) <= g / 3;
    if (ok) return C0;
  }
  fail(ErrorKind::calibration, "no dyadic C0 controls the heat tail");
}

double kernel_C0_ns(const KernelSpec& heat, const std::vector<double>& gammas) {
  const int d = heat.dim();
  double C = dyadic_ceil(3.0 * unit_ball_volume(d) * heat.linf_norm());
  for (int k = 0; k <= max_doublings; ++k, C *= 2) {
    bool ok = true;
    for (double g : gammas) ok = ok && heat.tail(std::sqrt(C * std::log(2 * C / g))) <= g / 6;
    if (ok) return C;
  }
  fail(ErrorKind::calibration, "no dyadic C0_ns controls the heat tail");
}

double calibrate_K(int d, const std::vector<double>& gammas) {
  for (double K = 1.0 / 16; K <= 256.0; K *= 2) {
    bool ok = true;
    for (double g : gammas) {
      const double s = K * K / (g * g);
      // ‖F⁻¹m‖₁ ≥ sup|m|; the symbol peaks where χ has vanished, at |ξ| = 4/3.
      if (std::exp(-s * 16.0 / 9.0) > g / 2 || high_pass_heat_norm(d, s) > g / 2) {
        ok = false;
        break;
      }
    }
    if (ok) return K;
  }
  fail(ErrorKind::calibration, "no dyadic K_cal makes the high-pass heat kernel small");
}

BlockConstants calibrate_block(int d) {
  BlockConstants b;
  double worst = 0.0;
  // B(τ)e^{τ/4} ≤ sup|φ|-weighted e^{−(9/16 − 1/4)τ} decays well before τ = 16.
  for (double tau = 0.0; tau <= 16.0; tau += 0.25) {
    worst = std::max(worst, block_heat_norm(d, tau) * std::exp(b.c * tau));
  }
  b.C = dyadic_ceil(worst);
  return b;
}

double bernstein_constant(int d, double p) {
  require(p >= 2.0, ErrorKind::invalid_input, "Bernstein constant needs p >= 2");
  const double r = std::isinf(p) ? 2.0 : 2.0 * p / (p + 2.0);
  const double scale = std::exp2(d * (0.5 - (std::isinf(p) ? 0.0 : 1.0 / p)));
  return dyadic_ceil(scale * KernelSpec::low_pass(d).lq_norm(r));
}

double low_pass_constant(int d) { return dyadic_ceil(KernelSpec::low_pass(d).l1_norm()); }

double validate_C0(const KernelSpec& kernel, double p, double C0,
                   const std::vector<CorpusItem>& corpus, CorpusCheck* check) {
  for (int k = 0; k <= max_doublings; ++k, C0 *= 2) {
    CorpusCheck c{"C0"};
    for (double gamma : {0.5, 0.25}) {
      const DecayRequirements req = decay_requirements(kernel, gamma, p, C0);
      for (const auto& item : corpus) {
        const double ell = smallest_certified_scale(item.field, req);
        if (ell == 0.0) continue;
        DecayReport r;
        try {
          r = decay_experiment(item.field, gamma, p, kernel, ell, C0);
        } catch (const Error& e) {
          if (e.kind() == ErrorKind::domain) continue;
          throw;
        }
        ++c.fields;
        c.worst = std::max(c.worst, r.ratio / gamma);
        if (!r.verdict || !r.terms_ok) ++c.violations;
      }
    }
    if (c.violations == 0) {
      if (check != nullptr) *check = c;
      return C0;
    }
  }
  fail(ErrorKind::calibration, "no dyadic C0 up to 2^" + std::to_string(max_doublings) +
                                   " times the kernel value passes the corpus");
}

double calibrate_drop(const std::vector<CorpusItem>& corpus, CorpusCheck* check) {
  std::vector<std::pair<const Field*, double>> sparse;
  for (const auto& item : corpus) {
    const Grid& g = item.field.grid();
    for (int k = 8;; ++k) {
      const double ell = g.spacing() * std::exp2(k / 4.0);
      if (ell >= g.length() / 2) break;
      const SparsenessParams params{0.1, 0.5, ell, infinity, TailRule::inclusive};
      if (certify(item.field, params).verdict) {
        sparse.emplace_back(&item.field, ell);
        break;
      }
    }
  }
  require(!sparse.empty(), ErrorKind::calibration, "no corpus field is naively sparse");
  for (double C = std::exp2(-12); C <= 16.0; C *= 2) {
    CorpusCheck c{"C_drop", static_cast<int>(sparse.size())};
    for (const auto& [f, ell] : sparse) {
      const double ratio = heat_drop_ratio(*f, ell, C);
      c.worst = std::max(c.worst, ratio);
      if (ratio > 0.75) ++c.violations;
    }
    if (c.violations == 0) {
      if (check != nullptr) *check = c;
      return C;
    }
  }
  fail(ErrorKind::calibration, "no dyadic C produces the heat drop to 3/4");
}

NavierStokesConstants calibrate_navier_stokes(int d, double p, const Grid& grid,
                                              std::uint64_t seed, int count, double T) {
  require(grid.dim() == d && d >= 2, ErrorKind::invalid_input, "solver constants need d >= 2");
  require(p > d, ErrorKind::invalid_input, "solver constants need p > d");
  const double a = a_exponent(d, p);
  const auto corpus = velocity_corpus(grid, seed, count, 1.0);
  RunOptions opts;
  opts.sample_every = 1;
  opts.duhamel = true;
  NavierStokesConstants out;
  for (double c = 1.0; c >= std::exp2(-max_doublings); c /= 2) {
    CorpusCheck growth{"c_p", static_cast<int>(corpus.size())};
    CorpusCheck duhamel{"C_duhamel", static_cast<int>(corpus.size())};
    // ‖u₀‖_p = c T^{−a} makes T̄ = T exactly.
    const double target = c * std::pow(T, -a);
    for (const auto& item : corpus) {
      const Field u0 = item.field.scaled(target / lp_norm(item.field, p));
      const Trajectory tr = run(u0, T, opts);
      for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double t = tr.times[i];
        growth.worst = std::max(growth.worst, lp_norm(tr.snapshots[i], p) / target);
        if (t > 0.0) {
          duhamel.worst = std::max(duhamel.worst, lp_norm(tr.duhamel_snapshots[i], p) /
                                                      (std::pow(t, a) * target * target));
        }
      }
    }
    if (growth.worst <= 2.0) {
      out.c_p = c;
      out.growth = growth;
      out.C_duhamel = dyadic_ceil(duhamel.worst);
      out.duhamel = duhamel;
      return out;
    }
  }
  fail(ErrorKind::calibration, "no dyadic c_p keeps the corpus below twice its initial norm");
}

Grid calibration_grid(int d) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input, "dimension must be 1, 2 or 3");
  return d == 1 ? Grid(1, 4096, 64) : d == 2 ? Grid(2, 256, 64) : Grid(3, 64, 64);
}

namespace {

nlohmann::json check_json(const CorpusCheck& c) {
  return {{"constant", c.constant}, {"fields", c.fields}, {"violations", c.violations},
          {"worst", c.worst}};
}

// §1 example: ½ + ½·1 on an interval of width 0.1.
CorpusItem indicator_example() {
  const Grid g(1, 4096, 8.0);
  return {"indicator", Field::sample(g, [](const auto& x) {
            return 0.5 + (std::abs(x[0]) < 0.05 ? 0.5 : 0.0);
          })};
}

}  // namespace

CalibrationResult calibrate_registry(const CalibrationOptions& o) {
  require(o.scalar_count > 0 && o.velocity_count > 0, ErrorKind::invalid_input,
          "calibration corpus must be nonempty");
  CalibrationResult result;
  result.log = nlohmann::json::array();
  const auto gammas = calibration_gammas();
  for (int d : o.dims) {
    const KernelSpec heat = KernelSpec::heat(d);
    const KernelSpec low = KernelSpec::low_pass(d);
    auto corpus = scalar_corpus(calibration_grid(d), o.seed + static_cast<std::uint64_t>(d),
                                o.scalar_count);
    auto drop_corpus = corpus;
    if (d == 1) drop_corpus.push_back(indicator_example());

    const double C0_heat = kernel_C0(heat, gammas);
    const double C0_low = kernel_C0(low, gammas);
    const double C0_ns = kernel_C0_ns(heat, gammas);
    const double K = calibrate_K(d, gammas);
    const BlockConstants block = calibrate_block(d);
    const double C_LP = low_pass_constant(d);
    CorpusCheck drop_check;
    const double C_drop = calibrate_drop(drop_corpus, &drop_check);
    result.log.push_back({{"d", d},
                          {"heat_tail_constant", heat_tail_constant(heat)},
                          {"C0_heat_kernel", C0_heat},
                          {"C0_low_pass_kernel", C0_low},
                          {"C0_ns", C0_ns},
                          {"K_cal", K},
                          {"block_C", block.C},
                          {"block_c", block.c},
                          {"C_LP", C_LP},
                          {"C_drop", C_drop},
                          {"drop_check", check_json(drop_check)}});

    for (double p : o.ps) {
      for (const KernelSpec* kernel : {&heat, &low}) {
        RegistryEntry e;
        e.kernel = kernel->name();
        e.d = d;
        e.p = p;
        CorpusCheck c0_check;
        e.C0 = validate_C0(*kernel, p, kernel == &heat ? C0_heat : C0_low, corpus, &c0_check);
        for (double g : gammas) {
          e.f_table.emplace_back(g, decay_requirements(*kernel, g, p, e.C0).f_of_gamma);
        }
        e.K_cal = K;
        e.block_C = block.C;
        e.block_c = block.c;
        e.C_B = bernstein_constant(d, p);
        e.C_LP = C_LP;
        e.C_drop = C_drop;
        nlohmann::json log = {{"kernel", e.kernel},
                              {"d", d},
                              {"p", exponent_to_json(p)},
                              {"C0_check", check_json(c0_check)}};
        if (kernel == &heat) {
          e.C0_ns = C0_ns;
          if (o.navier_stokes && d >= 2 && p > d) {
            const Grid g(d, d == 2 ? 64 : 32, 2 * std::numbers::pi);
            const auto ns = calibrate_navier_stokes(d, p, g, o.seed + 100 + d, o.velocity_count,
                                                    0.05);
            e.c_p = ns.c_p;
            e.C_duhamel = ns.C_duhamel;
            log["c_p_check"] = check_json(ns.growth);
            log["C_duhamel_check"] = check_json(ns.duhamel);
          }
        }
        result.registry.put(e);
        result.log.push_back(log);
      }
    }
  }
  const ConstantsRegistry& r = result.registry;
  result.registry.version =
      "1+" + sha256_hex(r.to_json().at("entries").dump()).substr(0, 12);
  return result;
}

}  // namespace spns
