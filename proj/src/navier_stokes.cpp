#include "spns/navier_stokes.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <iomanip>
#include <limits>

#include "spns/errors.hpp"
#include "spns/spectral.hpp"

namespace spns {

namespace {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

// Precomputed symbols for one grid.
struct Operators {
  Grid g;
  std::size_t N;
  int d;
  std::vector<double> k2;
  std::vector<std::array<double, 3>> xi;  // Nyquist-free first-order symbol
  std::vector<unsigned char> keep;        // 2/3 rule
  std::vector<std::size_t> neg;           // flat index of −κ

  explicit Operators(const Grid& grid) : g(grid), N(grid.size()), d(grid.dim()) {
    k2.resize(N);
    xi.resize(N);
    keep.resize(N);
    neg.resize(N);
    const int cut = g.n() / 3;
    for (std::size_t i = 0; i < N; ++i) {
      k2[i] = g.frequency_squared(i);
      xi[i] = g.derivative_frequency_vector(i);
      auto idx = g.unflatten(i);
      bool k = true;
      for (int a = 0; a < d; ++a) k = k && std::abs(g.wrapped(idx[a])) <= cut;
      keep[i] = k ? 1 : 0;
      std::array<int, 3> m{0, 0, 0};
      for (int a = 0; a < d; ++a) m[a] = (g.n() - idx[a]) % g.n();
      neg[i] = g.flatten(m);
    }
  }

  std::vector<double> decay(double dt) const {
    std::vector<double> e(N);
    for (std::size_t i = 0; i < N; ++i) e[i] = std::exp(-dt * k2[i]);
    return e;
  }

  // −ℙ∇·(u⊗u) from a spectrum, with the dealiased velocity's sup norm as a by-product.
  // Real fields are transformed two at a time as the real and imaginary parts of one
  // complex array.
  Spectrum nonlinear(const Spectrum& uh, double* sup = nullptr) const {
    const cplx I(0.0, 1.0);
    std::vector<std::vector<double>> phys(d, std::vector<double>(N));
    Spectrum work(N);
    for (int c = 0; c < d; c += 2) {
      const bool pair = c + 1 < d;
      for (std::size_t i = 0; i < N; ++i) {
        work[i] = keep[i] ? uh[c * N + i] + (pair ? I * uh[(c + 1) * N + i] : cplx(0.0))
                          : cplx(0.0);
      }
      fft_in_place(g, work, +1);
      for (std::size_t i = 0; i < N; ++i) {
        phys[c][i] = work[i].real();
        if (pair) phys[c + 1][i] = work[i].imag();
      }
    }
    if (sup) {
      double s = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        double m2 = 0.0;
        for (int c = 0; c < d; ++c) m2 += phys[c][i] * phys[c][i];
        s = std::max(s, m2);
      }
      *sup = std::sqrt(s);
    }
    std::vector<std::pair<int, int>> products;
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) products.emplace_back(a, b);
    }
    Spectrum out(d * N, cplx(0.0));
    const double scale = 1.0 / static_cast<double>(N);
    // ∂_b(u_a u_b) feeds component a, ∂_a(u_a u_b) feeds component b.
    auto accumulate = [&](int a, int b, std::size_t i, cplx P) {
      out[a * N + i] -= I * xi[i][b] * P;
      if (b != a) out[b * N + i] -= I * xi[i][a] * P;
    };
    for (std::size_t q = 0; q < products.size(); q += 2) {
      const auto [a1, b1] = products[q];
      const bool pair = q + 1 < products.size();
      const auto [a2, b2] = pair ? products[q + 1] : std::pair<int, int>{0, 0};
      for (std::size_t i = 0; i < N; ++i) {
        work[i] = cplx(phys[a1][i] * phys[b1][i], pair ? phys[a2][i] * phys[b2][i] : 0.0);
      }
      fft_in_place(g, work, -1);
      for (std::size_t i = 0; i < N; ++i) {
        if (!keep[i]) continue;
        const cplx z = work[i] * scale;
        if (!pair) {
          accumulate(a1, b1, i, z);
          continue;
        }
        const cplx zc = std::conj(work[neg[i]]) * scale;
        accumulate(a1, b1, i, 0.5 * (z + zc));
        accumulate(a2, b2, i, -0.5 * I * (z - zc));
      }
    }
    for (std::size_t i = 0; i < N; ++i) {
      if (k2[i] == 0.0 || !keep[i]) continue;
      const double kk = xi[i][0] * xi[i][0] + xi[i][1] * xi[i][1] + xi[i][2] * xi[i][2];
      if (kk == 0.0) continue;
      cplx dot = 0.0;
      for (int c = 0; c < d; ++c) dot += xi[i][c] * out[c * N + i];
      for (int c = 0; c < d; ++c) out[c * N + i] -= xi[i][c] * dot / kk;
    }
    return out;
  }

  double energy(const Spectrum& uh) const {
    double s = 0.0;
    for (const auto& z : uh) s += std::norm(z);
    return s * std::pow(g.length(), d);
  }

  double divergence(const Spectrum& uh) const {
    double div = 0.0, grad = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      cplx dot = 0.0;
      for (int c = 0; c < d; ++c) {
        dot += xi[i][c] * uh[c * N + i];
        grad += k2[i] * std::norm(uh[c * N + i]);
      }
      div += std::norm(dot);
    }
    return grad > 0.0 ? std::sqrt(div / grad) : 0.0;
  }
};

Spectrum to_spectrum(const Field& u) { return transform(u).coefficients; }

Field to_field(const Grid& g, int d, Spectrum s) {
  return inverse(SpectralField{g, d, std::move(s)});
}

void check_velocity(const Field& u) {
  require(u.components() == u.grid().dim(), ErrorKind::invalid_input,
          "velocity must have d components");
}

double exponent_a(int d, double p) { return std::isinf(p) ? 0.5 : 0.5 * (1.0 - d / p); }

DiagnosticSample sample_of(const Operators& op, const Spectrum& uh, double t, double sup) {
  return {t, op.energy(uh), op.divergence(uh), sup};
}

}  // namespace

NSState NSState::initial(const Field& u0) {
  check_velocity(u0);
  NSState s;
  s.u = leray_project(u0);
  Operators op(u0.grid());
  s.history.push_back(sample_of(op, to_spectrum(s.u), 0.0, lp_norm(s.u, infinity)));
  return s;
}

double cfl_limit(const Field& u) {
  const double h = u.grid().spacing();
  const double sup = lp_norm(u, infinity);
  const double diffusive = h * h / 4;
  return sup > 0.0 ? std::min(diffusive, h / (2 * sup)) : diffusive;
}

StepOutcome try_step(const NSState& state, double dt) {
  check_velocity(state.u);
  require(dt > 0.0 && std::isfinite(dt), ErrorKind::invalid_input, "dt must be positive");
  StepOutcome out;
  const double limit = cfl_limit(state.u);
  if (dt > limit) {
    out.suggested_dt = limit;
    out.state = state;
    return out;
  }
  const Grid& g = state.u.grid();
  const Operators op(g);
  const int d = g.dim();
  const auto E = op.decay(dt);
  Spectrum uh = to_spectrum(state.u);
  const Spectrum k1 = op.nonlinear(uh);
  Spectrum pred(uh.size());
  for (std::size_t i = 0; i < uh.size(); ++i) pred[i] = E[i % op.N] * (uh[i] + dt * k1[i]);
  const Spectrum k2 = op.nonlinear(pred);
  for (std::size_t i = 0; i < uh.size(); ++i) {
    const double e = E[i % op.N];
    uh[i] = e * uh[i] + 0.5 * dt * (e * k1[i] + k2[i]);
  }
  out.accepted = true;
  out.suggested_dt = dt;
  out.state.t = state.t + dt;
  out.state.history = state.history;
  out.state.u = to_field(g, d, uh);
  out.state.history.push_back(sample_of(op, uh, out.state.t, lp_norm(out.state.u, infinity)));
  return out;
}

NSState step(const NSState& state, double dt) {
  StepOutcome o = try_step(state, dt);
  if (!o.accepted) {
    fail(ErrorKind::resolution, "CFL violation: dt = " + std::to_string(dt) +
                                    " exceeds the limit; suggested dt = " +
                                    std::to_string(o.suggested_dt));
  }
  return std::move(o.state);
}

Trajectory run(const Field& u0, double t_end, const RunOptions& opt) {
  check_velocity(u0);
  require(t_end >= 0.0 && std::isfinite(t_end), ErrorKind::invalid_input,
          "final time must be nonnegative");
  require(opt.dt_max > 0.0, ErrorKind::invalid_input, "dt_max must be positive");
  const Grid& g = u0.grid();
  const int d = g.dim();
  const Operators op(g);
  const double h = g.spacing();

  Trajectory tr;
  tr.final = NSState::initial(u0);
  Spectrum uh = to_spectrum(tr.final.u);
  const Spectrum u0h = uh;
  Spectrum D(uh.size(), cplx(0.0));
  tr.times.push_back(0.0);
  tr.snapshots.push_back(tr.final.u);
  if (opt.duhamel) tr.duhamel_snapshots.push_back(Field::zeros(g, d));
  tr.max_divergence = tr.final.history.back().divergence;

  double sup = 0.0;
  Spectrum Nn = op.nonlinear(uh, &sup);
  sup = std::max(sup, lp_norm(tr.final.u, infinity));
  double t = 0.0;
  double energy = op.energy(uh);
  // Equal steps of the planned size; re-planned only when the CFL limit tightens.
  double dt = 0.0;
  std::vector<double> E;
  while (t < t_end) {
    const double limit = sup > 0.0 ? std::min(h * h / 4, h / (2 * sup)) : h * h / 4;
    const double allowed = std::min(opt.dt_max, 0.9 * limit);
    const double remaining = t_end - t;
    if (dt == 0.0 || dt > allowed) {
      dt = remaining / std::ceil(remaining / allowed * (1 - 1e-12));
      E = op.decay(dt);
    }
    const bool last = remaining <= dt * (1 + 1e-9);
    Spectrum pred(uh.size());
    for (std::size_t i = 0; i < uh.size(); ++i) pred[i] = E[i % op.N] * (uh[i] + dt * Nn[i]);
    const Spectrum k2 = op.nonlinear(pred);
    for (std::size_t i = 0; i < uh.size(); ++i) {
      const double e = E[i % op.N];
      uh[i] = e * uh[i] + 0.5 * dt * (e * Nn[i] + k2[i]);
    }
    t = last ? t_end : t + dt;
    ++tr.steps;
    const Spectrum Nnext = op.nonlinear(uh, &sup);
    if (opt.duhamel) {
      for (std::size_t i = 0; i < uh.size(); ++i) {
        const double e = E[i % op.N];
        D[i] = e * D[i] + 0.5 * dt * (e * Nn[i] + Nnext[i]);
      }
    }
    Nn = Nnext;
    if (!std::isfinite(sup)) {
      fail(ErrorKind::resolution, "solution became non-finite at t = " + std::to_string(t));
    }
    const DiagnosticSample s = sample_of(op, uh, t, sup);
    tr.max_divergence = std::max(tr.max_divergence, s.divergence);
    if (energy > 0.0) {
      tr.max_energy_increase = std::max(tr.max_energy_increase, (s.energy - energy) / energy);
    }
    energy = s.energy;
    tr.final.history.push_back(s);
    if (!last && opt.sample_every > 0 && tr.steps % opt.sample_every == 0) {
      tr.times.push_back(t);
      tr.snapshots.push_back(to_field(g, d, uh));
      if (opt.duhamel) tr.duhamel_snapshots.push_back(to_field(g, d, D));
    }
  }
  tr.final.t = t;
  tr.final.u = to_field(g, d, uh);
  if (tr.steps > 0) {
    tr.times.push_back(t);
    tr.snapshots.push_back(tr.final.u);
  }
  if (opt.duhamel) {
    tr.duhamel = to_field(g, d, D);
    if (tr.steps > 0) tr.duhamel_snapshots.push_back(tr.duhamel);
    Spectrum L = u0h;
    const auto Et = op.decay(t);
    for (std::size_t i = 0; i < L.size(); ++i) L[i] *= Et[i % op.N];
    tr.linear = to_field(g, d, std::move(L));
  }
  return tr;
}

double guaranteed_time(double norm_p, double p, int d, double c_p) {
  validate_exponent(p);
  require(p > d, ErrorKind::invalid_input,
          "guaranteed existence time needs p > d (exponent 1 - d/p must be positive)");
  require(norm_p > 0.0 && std::isfinite(norm_p), ErrorKind::degenerate,
          "guaranteed existence time needs a positive norm");
  require(c_p > 0.0, ErrorKind::calibration, "c_p must be positive");
  return std::pow(c_p / norm_p, 1.0 / exponent_a(d, p));
}

DuhamelReport duhamel_bound_check(const Field& u0, double p, double t, double C,
                                  const RunOptions& options) {
  validate_exponent(p);
  require(t > 0.0, ErrorKind::invalid_input, "time must be positive");
  const int d = u0.grid().dim();
  require(p > d, ErrorKind::invalid_input, "Duhamel bound needs p > d");
  DuhamelReport r;
  r.t = t;
  r.p = p;
  r.bound = C;
  const Field u = leray_project(u0);
  r.norm_u0 = lp_norm(u, p);
  if (r.norm_u0 == 0.0) return r;
  RunOptions opt = options;
  opt.duhamel = true;
  const Trajectory tr = run(u, t, opt);
  r.duhamel_norm = lp_norm(tr.duhamel, p);
  r.measured_constant = r.duhamel_norm / (std::pow(t, exponent_a(d, p)) * r.norm_u0 * r.norm_u0);
  r.holds = r.measured_constant <= C;
  return r;
}

CriterionThresholds criterion_thresholds(double norm_p, double p, int d, double T0,
                                         const RegistryEntry& k) {
  require(T0 > 0.0, ErrorKind::invalid_input, "T0 must be positive");
  CriterionThresholds c;
  c.norm_p = norm_p;
  c.p = p;
  c.d = d;
  c.T0 = T0;
  c.c_p = k.c_p;
  c.C0 = 2 * k.C0_ns;
  c.T_bar = guaranteed_time(norm_p, p, d, k.c_p);
  c.gamma = k.c_p / (norm_p * std::pow(T0, exponent_a(d, p)));
  if (T0 <= c.T_bar * (1 + 1e-12)) {
    c.trivial = true;
    c.gamma = std::min(c.gamma, 1.0);
    return c;
  }
  require(c.gamma > 0.0 && c.gamma < 1.0, ErrorKind::contract,
          "inconsistent inputs: gamma = " + std::to_string(c.gamma) + " is not in (0,1)");
  require(c.C0 > c.gamma, ErrorKind::calibration, "C0 must exceed gamma");
  c.ell_bar = std::sqrt(c.C0 * std::log(c.C0 / c.gamma));
  c.ell = std::sqrt(T0) * c.ell_bar;
  c.beta = c.gamma / c.C0;
  const double rhs = c.gamma / (c.C0 * std::pow(c.ell_bar, d));
  c.epsilon = std::isinf(p) ? rhs : std::pow(rhs, p / (p - 1));
  return c;
}

namespace {

void setup_decreasing(DecreasingReport& r, const Field& u0, double gamma, double p,
                      const RegistryEntry& k) {
  require(gamma > 0.0 && gamma < 1.0, ErrorKind::invalid_input, "gamma must lie in (0,1)");
  validate_exponent(p);
  const int d = u0.grid().dim();
  require(p > d, ErrorKind::invalid_input, "the decreasing proposition needs p > d");
  require(k.c_p > 0.0 && k.C_duhamel > 0.0 && k.C0_ns > 0.0, ErrorKind::calibration,
          "registry entry lacks c_p, C_duhamel or C0_ns");
  r.gamma = gamma;
  r.p = p;
  r.norm_u0 = lp_norm(u0, p);
  r.C_eff = std::max(k.C_duhamel, gamma / k.c_p);
  if (r.norm_u0 == 0.0) return;
  const double a = exponent_a(d, p);
  r.T = std::pow(gamma / (2 * r.C_eff * r.norm_u0), 1.0 / a);
  r.T_bar = guaranteed_time(r.norm_u0, p, d, k.c_p);
}

void finish_decreasing(DecreasingReport& r, const Field& u0, const RunOptions& options) {
  RunOptions opt = options;
  opt.duhamel = true;
  const Trajectory tr = run(u0, r.t, opt);
  const double n0 = r.norm_u0;
  r.ratio = lp_norm(tr.final.u, r.p) / n0;
  r.linear_ratio = lp_norm(tr.linear, r.p) / n0;
  r.nonlinear_ratio = lp_norm(tr.duhamel, r.p) / n0;
  r.mild_residual = lp_norm(tr.final.u.minus(tr.linear).minus(tr.duhamel), r.p) / n0;
  r.parts_ok = r.linear_ratio <= r.gamma / 2 && r.nonlinear_ratio <= r.gamma / 2;
  r.verdict = r.ratio <= r.gamma;
}

std::string failed_checks(const std::string& head, const std::vector<InequalityCheck>& checks) {
  std::string msg = head;
  for (const auto& c : checks) {
    if (!c.holds) {
      msg += " [" + c.name + ": " + std::to_string(c.lhs) + " vs " + std::to_string(c.rhs) + "]";
    }
  }
  return msg;
}

}  // namespace

DecreasingReport decreasing_experiment(const Field& u0_in, double gamma, double p,
                                       const RegistryEntry& k, const RunOptions& options) {
  check_velocity(u0_in);
  const Field u0 = leray_project(u0_in);
  DecreasingReport r;
  setup_decreasing(r, u0, gamma, p, k);
  if (r.norm_u0 == 0.0) {
    r.parts_ok = r.verdict = true;
    return r;
  }
  const Grid& g = u0.grid();
  const int d = g.dim();
  const double C0 = k.C0_ns;
  require(2 * C0 > gamma, ErrorKind::calibration, "C0_ns too small");
  r.t = r.T;
  r.ell_bar = std::sqrt(C0 * std::log(2 * C0 / gamma));
  r.ell = std::sqrt(r.T) * r.ell_bar;
  require(r.ell < g.length() / 2, ErrorKind::domain,
          "sparseness scale ell = " + std::to_string(r.ell) + " does not fit in the box");
  const double vol_rhs = gamma / (2 * C0 * std::pow(r.ell_bar, d));
  const double eps = std::isinf(p) ? vol_rhs : std::pow(vol_rhs, p / (p - 1));
  SparsenessParams sp{std::min(eps, 1.0 - 1e-12), gamma / 6, r.ell, p, TailRule::strict};
  r.certificate = certify(u0, sp);
  const double inv_pp = std::isinf(p) ? 1.0 : 1.0 - 1.0 / p;
  r.checks = {
      {"tail fraction < gamma/6", r.certificate.measured_beta, gamma / 6, r.certificate.tail_ok},
      {"volume fraction^(1-1/p) <= gamma/(2 C0 ell_bar^d)",
       std::pow(r.certificate.measured_epsilon, inv_pp), vol_rhs, r.certificate.fraction_ok},
      {"T < T_bar", r.T, r.T_bar, r.T < r.T_bar},
  };
  if (!r.certificate.verdict) {
    fail(ErrorKind::contract, failed_checks("decreasing preconditions unmet at ell = " +
                                                std::to_string(r.ell) + ":",
                                            r.checks));
  }
  finish_decreasing(r, u0, options);
  return r;
}

DecreasingReport decreasing_frequency_experiment(const Field& u0_in, double gamma, double p,
                                                 const RegistryEntry& k,
                                                 const RunOptions& options) {
  check_velocity(u0_in);
  const Field u0 = leray_project(u0_in);
  DecreasingReport r;
  r.frequency_version = true;
  setup_decreasing(r, u0, gamma, p, k);
  if (r.norm_u0 == 0.0) {
    r.parts_ok = r.verdict = true;
    return r;
  }
  require(k.K_cal > 0.0, ErrorKind::calibration, "registry entry lacks K_cal");
  r.t = r.T / 2;
  r.J = std::log2(k.K_cal / (gamma * std::sqrt(r.t)));
  DyadicDecomposition dec(u0.grid());
  require(r.J >= dec.j_min() && r.J <= dec.j_max() + 1, ErrorKind::domain,
          "frequency level J = " + std::to_string(r.J) + " outside the resolvable range");
  r.frequency_certificate = certify_frequency(u0, {gamma / 2, r.J}, p);
  r.checks = {{"|low-pass|/|u| <= gamma/2", r.frequency_certificate.ratio, gamma / 2,
               r.frequency_certificate.verdict},
              {"T < T_bar", r.T, r.T_bar, r.T < r.T_bar}};
  if (!r.frequency_certificate.verdict) {
    fail(ErrorKind::contract, failed_checks("frequency decreasing precondition unmet:", r.checks));
  }
  finish_decreasing(r, u0, options);
  return r;
}

double half_norm_level(const Field& u, double p) {
  const double norm = lp_norm(u, p);
  require(norm > 0.0, ErrorKind::degenerate, "half-norm level of a zero field");
  DyadicDecomposition dec(u.grid());
  auto below = [&](double J) { return lp_norm(dec.low_pass(u, J), p) < 0.5 * norm; };
  double lo = dec.j_min() - 2, hi = dec.j_max() + 2;
  if (!below(lo)) return lo;
  if (below(hi)) return hi;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (below(mid) ? lo : hi) = mid;
  }
  return lo;
}

std::vector<double> BlowupMonitor::escape_times() const {
  std::vector<double> out;
  for (const auto& r : rows) {
    if (r.escape) out.push_back(r.t);
  }
  return out;
}

BlowupMonitor monitor(const std::vector<double>& times, const std::vector<Field>& snaps,
                      double T_ref, const std::vector<double>& ps, double c_p) {
  require(times.size() == snaps.size(), ErrorKind::invalid_input,
          "times and snapshots differ in length");
  require(!ps.empty(), ErrorKind::invalid_input, "monitor needs at least one exponent");
  for (double p : ps) validate_exponent(p);
  BlowupMonitor m;
  m.T_ref = T_ref;
  m.c_p = c_p;
  m.ps = ps;
  double p_main = 0.0;
  for (double p : ps) {
    if (p > 2.0) {
      p_main = p;
      break;
    }
  }
  std::vector<double> sups;
  double u0_l2 = -1.0;
  for (std::size_t s = 0; s < snaps.size(); ++s) {
    const double t = times[s];
    const Field& u = snaps[s];
    if (t >= T_ref) continue;
    const double sup = lp_norm(u, infinity);
    if (sup == 0.0) continue;
    const int d = u.grid().dim();
    const double l2 = lp_norm(u, 2.0);
    if (u0_l2 < 0.0) u0_l2 = l2;
    MonitorRow row;
    row.t = t;
    for (double p : ps) {
      const double n = lp_norm(u, p);
      row.norms.push_back(n);
      row.gammas.push_back(c_p / (n * std::pow(T_ref - t, 0.5 * (1.0 - d / p))));
    }
    if (p_main > 0.0) {
      const double np = lp_norm(u, p_main);
      row.apriori_lhs = l2 / np;
      row.ell0 = std::pow(row.apriori_lhs, mu_p(d, p_main));
      const double a = 0.5 * (1.0 - d / p_main);
      row.apriori_rhs = u0_l2 * std::pow(T_ref - t, a) / c_p;
      const double gamma_main = c_p / (np * std::pow(T_ref - t, a));
      row.apriori_checked = gamma_main <= 1.0;
      row.apriori_holds = !row.apriori_checked || row.apriori_lhs <= row.apriori_rhs * (1 + 1e-9);
    }
    row.J = half_norm_level(u, ps.front());
    row.besov = besov_norm(u).value;
    sups.push_back(sup);
    m.rows.push_back(std::move(row));
  }
  // A sample is an escape time when it sets a new running maximum above ‖u₀‖_∞
  // and a later sample exceeds it.
  double running = sups.empty() ? 0.0 : sups.front();
  double later = 0.0;
  std::vector<double> later_max(sups.size(), 0.0);
  for (std::size_t i = sups.size(); i-- > 0;) {
    later_max[i] = later;
    later = std::max(later, sups[i]);
  }
  for (std::size_t i = 1; i < sups.size(); ++i) {
    if (sups[i] > running) {
      m.rows[i].escape = later_max[i] > sups[i];
      running = sups[i];
    }
  }
  return m;
}

void write_monitor_csv(const BlowupMonitor& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::io, "cannot write " + path.string());
  auto label = [](double p) { return std::isinf(p) ? std::string("inf") : std::to_string(p); };
  out << "t";
  for (double p : m.ps) out << ",norm_" << label(p);
  for (double p : m.ps) out << ",gamma_" << label(p);
  out << ",ell0,J,besov,escape\n";
  out << std::setprecision(17);
  for (const auto& r : m.rows) {
    out << r.t;
    for (double v : r.norms) out << ',' << v;
    for (double v : r.gammas) out << ',' << v;
    out << ',' << r.ell0 << ',' << r.J << ',' << r.besov << ',' << (r.escape ? 1 : 0) << '\n';
  }
}

nlohmann::json to_json(const DuhamelReport& r) {
  return {{"t", r.t},
          {"p", exponent_to_json(r.p)},
          {"norm_u0", r.norm_u0},
          {"duhamel_norm", r.duhamel_norm},
          {"measured_constant", r.measured_constant},
          {"bound", r.bound},
          {"holds", r.holds}};
}

nlohmann::json to_json(const CriterionThresholds& c) {
  return {{"norm_p", c.norm_p}, {"p", exponent_to_json(c.p)}, {"d", c.d},
          {"T0", c.T0},         {"T_bar", c.T_bar},           {"c_p", c.c_p},
          {"C0", c.C0},         {"trivial", c.trivial},       {"gamma", c.gamma},
          {"ell_bar", c.ell_bar}, {"ell", c.ell},             {"beta", c.beta},
          {"epsilon", c.epsilon}};
}

nlohmann::json to_json(const DecreasingReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"holds", c.holds}});
  }
  nlohmann::json j = {{"version", r.frequency_version ? "frequency" : "physical"},
                      {"gamma", r.gamma},
                      {"p", exponent_to_json(r.p)},
                      {"C_eff", r.C_eff},
                      {"T", r.T},
                      {"T_bar", r.T_bar},
                      {"t", r.t},
                      {"checks", checks},
                      {"norm_u0", r.norm_u0},
                      {"ratio", r.ratio},
                      {"linear_ratio", r.linear_ratio},
                      {"nonlinear_ratio", r.nonlinear_ratio},
                      {"mild_residual", r.mild_residual},
                      {"parts_ok", r.parts_ok},
                      {"verdict", r.verdict}};
  if (r.frequency_version) {
    j["J"] = r.J;
    j["frequency_certificate"] = to_json(r.frequency_certificate);
  } else {
    j["ell_bar"] = r.ell_bar;
    j["ell"] = r.ell;
    j["certificate"] = to_json(r.certificate);
  }
  return j;
}

}  // namespace spns
