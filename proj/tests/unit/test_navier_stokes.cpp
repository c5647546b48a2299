#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "spns/corpus.hpp"
#include "spns/errors.hpp"
#include "spns/navier_stokes.hpp"
#include "spns/spectral.hpp"

using namespace spns;
using std::numbers::pi;

namespace {

// Taylor–Green plus an optional shear/cross perturbation that switches on the nonlinearity.
Field taylor_green(const Grid& g, double amplitude = 1.0, double perturbation = 0.0) {
  return Field::sample_vector(g, 2, [&](const auto& x, std::span<double> out) {
    out[0] = amplitude * std::sin(x[0]) * std::cos(x[1]) + perturbation * std::sin(2 * x[1]);
    out[1] = -amplitude * std::cos(x[0]) * std::sin(x[1]) + perturbation * std::sin(x[0]);
  });
}

double gradient_energy(const Field& u) { return std::pow(lp_norm(derivative_tensor_magnitude(u, 1), 2.0), 2); }

RegistryEntry test_constants() {
  RegistryEntry k;
  k.kernel = "heat";
  k.d = 2;
  k.p = infinity;
  k.C0_ns = 4;
  k.c_p = 1.0;
  k.C_duhamel = 0.25;
  k.K_cal = 2.0;
  return k;
}

}  // namespace

TEST_CASE("zero field stays zero and the CFL limit is enforced") {
  Grid g(2, 32, 2 * pi);
  NSState s = NSState::initial(Field::zeros(g, 2));
  for (int i = 0; i < 3; ++i) s = step(s, 1e-3);
  CHECK(lp_norm(s.u, infinity) == 0.0);
  CHECK(s.t == doctest::Approx(3e-3));

  NSState tg = NSState::initial(taylor_green(g));
  const double limit = cfl_limit(tg.u);
  CHECK(limit == doctest::Approx(std::min(g.spacing() * g.spacing() / 4, g.spacing() / 2)));
  StepOutcome o = try_step(tg, 2 * limit);
  CHECK_FALSE(o.accepted);
  CHECK(o.suggested_dt == limit);
  CHECK_THROWS_AS(step(tg, 2 * limit), Error);
  CHECK_THROWS_AS(NSState::initial(Field::zeros(g, 1)), Error);
}

TEST_CASE("Taylor-Green decays as e^{-2t}") {
  Grid g(2, 64, 2 * pi);
  Trajectory tr = run(taylor_green(g), 0.1);
  const Field exact = taylor_green(g, std::exp(-0.2));
  CHECK(lp_norm(tr.final.u.minus(exact), infinity) <= 1e-6);
  CHECK(tr.final.t == 0.1);
  CHECK(tr.max_divergence <= 1e-8);
  CHECK(tr.max_energy_increase <= 1e-6);
}

TEST_CASE("single-mode energy balance per step") {
  Grid g(2, 32, 2 * pi);
  NSState s = NSState::initial(taylor_green(g));
  const double dt = 1e-3;
  for (int i = 0; i < 20; ++i) {
    NSState next = step(s, dt);
    const double e0 = std::pow(lp_norm(s.u, 2.0), 2);
    const double e1 = std::pow(lp_norm(next.u, 2.0), 2);
    const double dissipation = dt * (gradient_energy(s.u) + gradient_energy(next.u));
    CHECK(std::abs((e1 - e0) + dissipation) <= 1e-6 * e0);
    s = std::move(next);
  }
  CHECK(s.history.size() == 21);
}

TEST_CASE("temporal order of the integrating-factor scheme") {
  Grid g(2, 32, 2 * pi);
  const Field u0 = taylor_green(g, 1.0, 0.5);
  RunOptions fine;
  fine.dt_max = 6.25e-5;
  const Field ref = run(u0, 0.1, fine).final.u;
  std::vector<double> errors;
  for (double dt : {2e-3, 1e-3, 5e-4}) {
    RunOptions o;
    o.dt_max = dt;
    errors.push_back(lp_norm(run(u0, 0.1, o).final.u.minus(ref), infinity));
  }
  const double order = std::log2(errors[1] / errors[2]);
  CHECK(std::log2(errors[0] / errors[1]) >= 1.8);
  CHECK(order >= 1.8);
}

TEST_CASE("divergence and energy inequality on random data") {
  for (int d : {2, 3}) {
    Grid g(d, d == 2 ? 64 : 16, 2 * pi);
    RunOptions o;
    o.sample_every = 5;
    Trajectory tr = run(random_smooth_velocity(g, 17, 3, 2.0), 0.05, o);
    CHECK(tr.max_divergence <= 1e-8);
    for (std::size_t i = 1; i < tr.snapshots.size(); ++i) {
      const double e0 = std::pow(lp_norm(tr.snapshots[i - 1], 2.0), 2);
      const double e1 = std::pow(lp_norm(tr.snapshots[i], 2.0), 2);
      CHECK(e1 <= e0 * (1 + 1e-6));
      CHECK(lp_norm(divergence(tr.snapshots[i]), 2.0) <=
            1e-8 * lp_norm(derivative_tensor_magnitude(tr.snapshots[i], 1), 2.0));
    }
  }
}

TEST_CASE("mild formulation and semigroup consistency") {
  Grid g(2, 64, 2 * pi);
  const Field shape = random_smooth_velocity(g, 5, 3, 1.0);
  const double t = 0.1;
  std::vector<double> heat_gap, constants;
  for (double A : {0.1, 0.2, 0.4}) {
    RunOptions o;
    o.duhamel = true;
    Trajectory tr = run(shape.scaled(A), t, o);
    // u(t) = e^{tΔ}u₀ + Duhamel up to the quadrature error.
    CHECK(lp_norm(tr.final.u.minus(tr.linear).minus(tr.duhamel), infinity) <=
          1e-6 * lp_norm(tr.final.u, infinity));
    heat_gap.push_back(lp_norm(tr.final.u.minus(tr.linear), infinity) / (A * A));
    DuhamelReport r = duhamel_bound_check(shape.scaled(A), infinity, t, 0.25);
    constants.push_back(r.measured_constant);
    CHECK(r.holds);
  }
  // NS − heat = O(A²); the Duhamel constant does not depend on A.
  for (std::size_t i = 1; i < 3; ++i) {
    CHECK(std::abs(heat_gap[i] / heat_gap[0] - 1) <= 0.2);
    CHECK(std::abs(constants[i] / constants[0] - 1) <= 0.2);
  }
  CHECK(duhamel_bound_check(Field::zeros(g, 2), infinity, t, 0.25).duhamel_norm == 0.0);
  const double small = duhamel_bound_check(shape, infinity, 1e-4, 0.25).duhamel_norm;
  const double larger = duhamel_bound_check(shape, infinity, 1e-2, 0.25).duhamel_norm;
  CHECK(small < 0.02 * larger);
}

TEST_CASE("guaranteed existence time") {
  CHECK(guaranteed_time(2.0, infinity, 2, 0.5) == doctest::Approx(0.0625));
  CHECK(guaranteed_time(4.0, infinity, 3, 0.5) == doctest::Approx(0.0625 / 4));
  CHECK(guaranteed_time(2.0, 6.0, 3, 1.0) == doctest::Approx(std::pow(0.5, 4.0)));
  CHECK_THROWS_AS(guaranteed_time(1.0, 3.0, 3, 1.0), Error);
  CHECK_THROWS_AS(guaranteed_time(0.0, infinity, 2, 1.0), Error);

  // ‖u(t)‖_∞ ≤ 2‖u₀‖_∞ on (0, T̄) over a small corpus.
  Grid g(2, 64, 2 * pi);
  for (const auto& item : velocity_corpus(g, 3, 3, 1.0)) {
    const double norm = lp_norm(item.field, infinity);
    const double T_bar = guaranteed_time(norm, infinity, 2, test_constants().c_p);
    RunOptions o;
    o.sample_every = 10;
    Trajectory tr = run(item.field, T_bar, o);
    for (const auto& s : tr.final.history) CHECK(s.sup <= 2 * norm);
  }
}

TEST_CASE("criterion thresholds") {
  const RegistryEntry k = test_constants();
  const double norm = 2.0;
  const double T_bar = guaranteed_time(norm, infinity, 2, k.c_p);
  CriterionThresholds at = criterion_thresholds(norm, infinity, 2, T_bar, k);
  CHECK(at.trivial);
  CHECK(at.gamma == doctest::Approx(1.0));

  CriterionThresholds four = criterion_thresholds(norm, infinity, 2, 4 * T_bar, k);
  CHECK_FALSE(four.trivial);
  CHECK(four.gamma == doctest::Approx(0.5));
  CHECK(four.ell_bar * four.ell_bar >= four.C0 * std::log(four.C0 / four.gamma) * (1 - 1e-12));
  CHECK(four.beta == doctest::Approx(four.gamma / four.C0));
  CHECK(four.epsilon == doctest::Approx(four.gamma / (four.C0 * std::pow(four.ell_bar, 2))));
  CHECK(four.ell == doctest::Approx(std::sqrt(4 * T_bar) * four.ell_bar));

  CriterionThresholds prev = four;
  for (double m : {8.0, 16.0, 64.0}) {
    CriterionThresholds c = criterion_thresholds(norm, 4.0, 2, m * T_bar, k);
    CriterionThresholds c_inf = criterion_thresholds(norm, infinity, 2, m * T_bar, k);
    CHECK(c_inf.gamma < prev.gamma);
    CHECK(c_inf.ell_bar > prev.ell_bar);
    CHECK(c_inf.beta < prev.beta);
    CHECK(c_inf.epsilon < prev.epsilon);
    CHECK(c.gamma > 0.0);
    prev = c_inf;
  }
}

TEST_CASE("decreasing proposition, physical version") {
  const RegistryEntry k = test_constants();
  Grid g(2, 128, 2 * pi);
  const double h = g.spacing();

  DecreasingReport zero = decreasing_experiment(Field::zeros(g, 2), 0.5, infinity, k);
  CHECK(zero.verdict);
  CHECK(zero.ratio == 0.0);

  SUBCASE("spread-out data is refused with the failing inequality named") {
    Field u = random_smooth_velocity(g, 9, 2, 2.0);
    try {
      decreasing_experiment(u, 0.5, infinity, k);
      CHECK(false);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::contract);
      CHECK(std::string(e.what()).find("volume fraction") != std::string::npos);
    }
  }

  SUBCASE("small sparse vortex") {
    // γ = 0.9 keeps the required scale inside a 128² box: ℓ ≈ 22σ.
    const double gamma = 0.9;
    const double ell_bar = std::sqrt(k.C0_ns * std::log(2 * k.C0_ns / gamma));
    const double ell = 50 * h;
    const double T = std::pow(ell / ell_bar, 2);
    const double C_eff = std::max(k.C_duhamel, gamma / k.c_p);
    const double A = gamma / (2 * C_eff * std::sqrt(T));
    Field u = vortex_blob(g, {0, 0, 0}, 2 * h, A);
    DecreasingReport r = decreasing_experiment(u, gamma, infinity, k);
    CHECK(r.T == doctest::Approx(T).epsilon(1e-3));
    CHECK(r.T < r.T_bar);
    CHECK(r.verdict);
    CHECK(r.parts_ok);
    CHECK(r.linear_ratio <= gamma / 2);
    CHECK(r.nonlinear_ratio <= gamma / 2);
    CHECK(r.mild_residual <= 1e-6);
  }
}

TEST_CASE("decreasing proposition, frequency version") {
  const RegistryEntry k = test_constants();
  Grid g(2, 64, 2 * pi);
  // 2^J = K/(γ√t), t = T/2, √T = γ/(2 C_eff A): a mode at |κ| = 4√2 clears the cutoff.
  Field u = Field::sample_vector(g, 2, [](const auto& x, std::span<double> out) {
    out[0] = 0.25 * std::sin(4 * x[0]) * std::cos(4 * x[1]);
    out[1] = -0.25 * std::cos(4 * x[0]) * std::sin(4 * x[1]);
  });
  DecreasingReport r = decreasing_frequency_experiment(u, 0.5, infinity, k);
  CHECK(r.frequency_certificate.verdict);
  CHECK(r.t == doctest::Approx(r.T / 2));
  CHECK(std::exp2(r.J) == doctest::Approx(k.K_cal / (0.5 * std::sqrt(r.t))));
  CHECK(r.verdict);
  CHECK(r.parts_ok);

  Field low = taylor_green(g, 0.25);
  CHECK_THROWS_AS(decreasing_frequency_experiment(low, 0.5, infinity, k), Error);
  CHECK(decreasing_frequency_experiment(Field::zeros(g, 2), 0.5, infinity, k).verdict);
}

TEST_CASE("monitor on decaying Taylor-Green") {
  Grid g(2, 32, 2 * pi);
  RunOptions o;
  o.sample_every = 25;
  Trajectory tr = run(taylor_green(g), 0.5, o);
  const double T_ref = 2.0;
  BlowupMonitor m = monitor(tr.times, tr.snapshots, T_ref, {infinity, 4.0}, 1.0);
  REQUIRE(m.rows.size() == tr.snapshots.size());
  CHECK(m.escape_times().empty());
  for (std::size_t i = 1; i < m.rows.size(); ++i) {
    CHECK(m.rows[i].gammas[0] > m.rows[i - 1].gammas[0]);
    CHECK(m.rows[i].besov < m.rows[i - 1].besov);
  }
  for (const auto& r : m.rows) {
    CHECK(std::isfinite(r.J));
    CHECK(r.apriori_holds);
    CHECK(r.ell0 > 0.0);
  }

  const auto path = std::filesystem::temp_directory_path() / "spns_monitor.csv";
  write_monitor_csv(m, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,norm_inf,norm_4.000000,gamma_inf,gamma_4.000000,ell0,J,besov,escape");
  std::filesystem::remove(path);

  BlowupMonitor empty = monitor({0.0, 0.1}, {Field::zeros(g, 2), Field::zeros(g, 2)}, 1.0,
                                {infinity}, 1.0);
  CHECK(empty.rows.empty());
}

TEST_CASE("monitor on a constructed self-similar trajectory") {
  // u(x,t) = τ^{-1/2} U(x/√τ), τ = T_ref − t: the half-norm level tracks τ^{-1/2}.
  Grid g(2, 256, 16.0);
  const double T_ref = 1.0;
  std::vector<double> times;
  std::vector<Field> snaps;
  for (double tau : {0.1, 0.05, 0.025, 0.0125, 0.01}) {
    const double s = std::sqrt(tau);
    times.push_back(T_ref - tau);
    snaps.push_back(vortex_blob(g, {0, 0, 0}, s, 1.0 / s));
  }
  BlowupMonitor m = monitor(times, snaps, T_ref, {infinity}, 1.0);
  REQUIRE(m.rows.size() == 5);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 0; i < m.rows.size(); ++i) {
    const double v = std::exp2(m.rows[i].J) * std::sqrt(T_ref - times[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo <= 1.25);
  // The sup grows monotonically: every interior sample sets a level above ‖u₀‖_∞
  // that is exceeded later.
  CHECK(m.escape_times().size() == 3);
  CHECK(m.rows.front().escape == false);
  CHECK(m.rows.back().escape == false);
}
