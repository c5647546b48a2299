#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "spns/errors.hpp"
#include "spns/random.hpp"
#include "spns/scenarios.hpp"
#include "spns/sparseness.hpp"
#include "spns/spectral.hpp"

using namespace spns;

namespace {

Rational R(std::int64_t p, std::int64_t q = 1) { return Rational(p, q); }

}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(parse_rational("3") == R(3));
  CHECK(parse_rational("-1/2") == R(-1, 2));
  CHECK(parse_rational("0.25") == R(1, 4));
  CHECK(parse_rational("1.5") == R(3, 2));
  CHECK(to_string(R(2, 4)) == "1/2");
  CHECK(to_string(R(3)) == "3");
  CHECK_THROWS_AS(parse_rational("x"), Error);
  CHECK_THROWS_AS(parse_rational("1/0"), Error);
}

TEST_CASE("alpha_k, alpha_bar and homogeneity") {
  // ᾱ_1 in d = 3 is 1/(1 + 3/2) = 2/5.
  CHECK(alpha_bar(3, 1) == R(2, 5));
  CHECK(alpha_bar(3, 0) == R(2, 3));
  // ζ_x = ζ_t: α_k = 1/(1 + k).
  for (int k = 0; k <= 5; ++k) CHECK(alpha_k(R(1, 2), R(1, 2), k) == R(1, k + 1));
  CHECK(alpha_k(R(1, 2), R(1, 2), 0) == R(1));
  // Z^{(k)}_{ᾱ_k} has the homogeneity of L²: k − (k + d/2) = −d/2.
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k <= 6; ++k) CHECK(homogeneity_index(alpha_bar(d, k), k) == R(-d, 2));
  }
  CHECK(homogeneity_index(R(2, 5), 1) == R(-3, 2));
  CHECK_THROWS_AS(alpha_k(R(0), R(1), 1), Error);
  CHECK(alpha_k(0.3, 0.6, 2) == doctest::Approx(0.3 / 1.2));
}

TEST_CASE("alpha_k and alpha_bar decrease in k and coincide on the energy line") {
  for (int d = 2; d <= 3; ++d) {
    for (int k = 0; k < 6; ++k) {
      CHECK(alpha_k(R(1, 3), R(2, 3), k + 1) < alpha_k(R(1, 3), R(2, 3), k));
      CHECK(alpha_bar(d, k + 1) < alpha_bar(d, k));
      // ζ_t = (d/2)ζ_x exactly.
      const Rational zx(2, 7);
      CHECK(alpha_k(zx, Rational(d, 2) * zx, k) == alpha_bar(d, k));
    }
  }
}

TEST_CASE("exponent region d = 3, p = 3") {
  const auto region = admissible_region(3, R(3));
  REQUIRE_FALSE(region.empty);
  CHECK(region.bounded);
  std::vector<std::pair<Rational, Rational>> got;
  for (const auto& v : region.vertices) got.emplace_back(v.zeta_x, v.zeta_t);
  const std::vector<std::pair<Rational, Rational>> expected = {
      {R(1, 3), R(1, 2)}, {R(1, 2), R(1, 2)}, {R(1), R(1)}, {R(1, 2), R(3, 4)}};
  CHECK(got.size() == 4);
  for (const auto& e : expected) CHECK(std::find(got.begin(), got.end(), e) != got.end());
  // Every vertex lies on two constraint lines and satisfies all constraints closed.
  for (const auto& v : region.vertices) {
    int on = 0;
    for (const auto& h : region.constraints) {
      CHECK(h.value(v.zeta_x, v.zeta_t) >= R(0));
      on += h.value(v.zeta_x, v.zeta_t) == R(0) ? 1 : 0;
    }
    CHECK(on >= 2);
  }
  // The energy-class edge is open; the vertices on it are not attained.
  int open = 0;
  for (const auto& e : region.edges) open += e.closed ? 0 : 1;
  CHECK(open == 1);
  CHECK_FALSE(region.vertices[2].attained);
  // Standard point (½, ½): on ζ_t = ζ_x and on ζ_t = ½.
  CHECK(region.contains(R(1, 2), R(1, 2)));
  CHECK(region.polygon_contains(R(1, 2), R(1, 2)));
}

TEST_CASE("finite energy and Z^(k) give the same half-plane") {
  for (int d = 2; d <= 3; ++d) {
    RegionOptions o;
    o.z_classes = {0, 1, 2, 3, 4, 5};
    const auto hs = region_constraints(d, R(d), o);
    const auto fe = std::find_if(hs.begin(), hs.end(), [](const HalfPlane& h) { return h.label == "finite kinetic energy"; });
    REQUIRE(fe != hs.end());
    int z = 0;
    for (const auto& h : hs) {
      if (h.label.rfind("Z^(", 0) == 0) {
        CHECK(h.same_set(*fe));
        ++z;
      }
    }
    CHECK(z == 6);
  }
  // Adding the Z constraints does not change the region.
  RegionOptions o;
  o.z_classes = {0, 1, 2, 3, 4, 5};
  const auto with = admissible_region(3, R(3), o);
  const auto without = admissible_region(3, R(3));
  REQUIRE(with.vertices.size() == without.vertices.size());
  for (std::size_t i = 0; i < with.vertices.size(); ++i) {
    CHECK(with.vertices[i].zeta_x == without.vertices[i].zeta_x);
    CHECK(with.vertices[i].zeta_t == without.vertices[i].zeta_t);
  }
}

TEST_CASE("region invariant under constraint reordering and consistent with direct evaluation") {
  RegionOptions o;
  o.z_classes = {1, 2};
  auto hs = region_constraints(3, R(3), o);
  const auto base = intersect(3, R(3), hs);
  std::mt19937_64 engine(3);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(hs.begin(), hs.end(), engine);
    const auto again = intersect(3, R(3), hs);
    REQUIRE(again.vertices.size() == base.vertices.size());
    for (std::size_t i = 0; i < base.vertices.size(); ++i) {
      CHECK(again.vertices[i].zeta_x == base.vertices[i].zeta_x);
      CHECK(again.vertices[i].zeta_t == base.vertices[i].zeta_t);
      CHECK(again.vertices[i].attained == base.vertices[i].attained);
    }
  }
  // 100 random rational points, plus the vertices and edge midpoints.
  Rng rng(17);
  std::vector<std::pair<Rational, Rational>> pts;
  for (int i = 0; i < 100; ++i) pts.emplace_back(R(rng.integer(0, 48), 32), R(rng.integer(0, 48), 32));
  for (const auto& v : base.vertices) pts.emplace_back(v.zeta_x, v.zeta_t);
  for (const auto& e : base.edges) {
    pts.emplace_back((base.vertices[e.from].zeta_x + base.vertices[e.to].zeta_x) / 2,
                     (base.vertices[e.from].zeta_t + base.vertices[e.to].zeta_t) / 2);
  }
  int inside = 0;
  for (const auto& [x, y] : pts) {
    CHECK(base.contains(x, y) == base.polygon_contains(x, y));
    inside += base.contains(x, y) ? 1 : 0;
  }
  CHECK(inside > 0);
}

TEST_CASE("empty, unbounded and windowed regions") {
  // ζ_t ≥ ½ with ζ_t < ζ_x/2 + ½ − 1 = ζ_x/2 − ½ inside a window ζ_x ≤ 1 is empty.
  std::vector<HalfPlane> hs = {{"a", "", R(0), R(1), R(-1, 2), false}, {"b", "", R(1, 2), R(-1), R(-1, 2), true}};
  const auto empty = intersect(3, R(3), hs, std::array<Rational, 4>{R(0), R(1), R(0), R(2)});
  CHECK(empty.empty);
  CHECK_FALSE(empty.contains(R(1, 2), R(1, 2)));
  // Without the energy class the region is unbounded.
  RegionOptions o;
  o.energy_class = false;
  const auto open = admissible_region(3, R(3), o);
  CHECK_FALSE(open.empty);
  CHECK_FALSE(open.bounded);
  o.window = std::array<Rational, 4>{R(0), R(2), R(0), R(2)};
  const auto clipped = admissible_region(3, R(3), o);
  CHECK(clipped.bounded);
  CHECK(std::any_of(clipped.vertices.begin(), clipped.vertices.end(), [](const RegionVertex& v) { return v.on_window; }));
  CHECK_THROWS_AS(admissible_region(3, R(2)), Error);
  CHECK_THROWS_AS(admissible_region(1, R(3)), Error);
  // p = ∞ drops the L^p criterion.
  const auto inf = admissible_region(3, std::nullopt);
  CHECK(std::none_of(inf.constraints.begin(), inf.constraints.end(), [](const HalfPlane& h) { return h.label == "L^p criterion"; }));
}

TEST_CASE("region exports") {
  const auto region = admissible_region(3, R(3));
  const auto dir = std::filesystem::temp_directory_path() / "spns_region_test";
  std::filesystem::create_directories(dir);
  write_region_csv(region, dir / "region.csv");
  write_region_gnuplot(region, dir / "region.dat");
  std::ifstream csv(dir / "region.csv");
  std::string line;
  std::getline(csv, line);
  CHECK(line == "zeta_x,zeta_t,zeta_x_float,zeta_t_float,attained,on_window");
  int rows = 0;
  bool third = false;
  while (std::getline(csv, line)) {
    ++rows;
    third = third || line.rfind("1/3,1/2,", 0) == 0;
  }
  CHECK(rows == 4);
  CHECK(third);
  std::ifstream gp(dir / "region.dat");
  int gp_rows = 0;
  while (std::getline(gp, line)) gp_rows += line.empty() || line[0] == '#' ? 0 : 1;
  CHECK(gp_rows == 5);  // closed polyline
  const auto j = to_json(region);
  CHECK(j.at("vertices").size() == 4);
  CHECK(j.at("constraints").at(2).contains("source"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("profile bounds and decay") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid y(2, 128, 16.0);
  for (int k = 0; k <= 2; ++k) {
    const auto b = profile_bounds(a, y, k);
    CHECK(b.C_k > 0.0);
    CHECK(b.c_k == b.C_k);  // steady
    CHECK(b.decays);
    CHECK(b.R_k < 4.0);
  }
  const auto periodic = profile_bounds(gaussian_ansatz(2, 0.5, 0.5, true), y, 1);
  CHECK(periodic.c_k <= periodic.C_k);
  CHECK(periodic.c_k > 0.0);
  CHECK(periodic.decays);
  // The profile is divergence-free.
  const Field U = sample_profile(a, y, 0.0);
  CHECK(lp_norm(divergence(U), infinity) < 1e-10 * lp_norm(U, infinity) * 8);
}

TEST_CASE("trajectory amplitude law and derivative identity") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid g(2, 512, 16.0);
  const Grid y(2, 128, 20.0);
  const std::vector<double> times = {-1.0, -0.5, -0.25, -0.1, -0.05};
  const auto traj = build_trajectory(a, g, times);
  const double sup_U = lp_norm(sample_profile(a, g, 0.0), infinity);
  for (int k = 0; k <= 1; ++k) {
    std::vector<double> norms, tau;
    double first = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
      const double n = lp_norm(derivative_tensor_magnitude(traj[i], k), infinity);
      const double scaled = n * std::pow(-times[i], a.zeta_t + k * a.zeta_x);
      if (i == 0) first = scaled;
      CHECK(std::abs(scaled / first - 1.0) < 0.01);
      norms.push_back(n);
      tau.push_back(-times[i]);
    }
    CHECK(fit_exponent(tau, norms) == doctest::Approx(-(a.zeta_t + k * a.zeta_x)).epsilon(0.02));
  }
  // ‖u(t)‖_∞ = (−t)^{−1/2}‖U‖_∞ (U sampled on the same points at t = −1).
  CHECK(lp_norm(traj[0], infinity) == doctest::Approx(sup_U).epsilon(1e-14));
  for (double t : times) CHECK(derivative_identity_error(a, g, y, t, 2) < 0.01);
}

TEST_CASE("local L^p norms scale with the ansatz exponent") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid g(2, 512, 16.0);
  const std::vector<double> taus = {1.0, 0.5, 0.2, 0.1};
  std::vector<double> times;
  for (double t : taus) times.push_back(-t);
  const auto traj = build_trajectory(a, g, times);
  const double p = 4.0;
  for (int k = 0; k <= 1; ++k) {
    std::vector<double> norms;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const Field m = derivative_tensor_magnitude(traj[i], k);
      const double R = 2.0 * std::pow(taus[i], a.zeta_x);
      std::vector<unsigned char> keep(g.size());
      for (std::size_t j = 0; j < g.size(); ++j) {
        const auto x = g.position(j);
        keep[j] = x[0] * x[0] + x[1] * x[1] <= R * R;
      }
      norms.push_back(lp_norm_masked(m, p, keep));
    }
    const double expected = -a.zeta_t + (2.0 / p - k) * a.zeta_x;
    CHECK(std::abs(fit_exponent(taus, norms) - expected) < 0.02);
  }
}

TEST_CASE("support overflow and discrete self-similarity") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5, true);
  const Grid g(2, 64, 16.0);
  CHECK_THROWS_AS(build_trajectory(a, g, {-4.0}), Error);
  try {
    build_trajectory(a, g, {-4.0});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::domain);
  }
  CHECK_THROWS_AS(build_trajectory(a, g, {0.5}), Error);
  CHECK(discrete_self_similarity_error(a, g, -1.0) < 1e-6);
  // A steady profile is self-similar for every λ, but a periodic one needs the full period.
  auto half = a;
  half.period = a.period / 2;
  CHECK(discrete_self_similarity_error(half, g, -1.0) > 1e-2);
}

TEST_CASE("sparseness scales of a Gaussian profile") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid g(2, 256, 16.0);
  const Field u = build_trajectory(a, g, {-1.0}).front();
  const auto s = sparseness_scales(u, 0, 0.5, 0.3);
  CHECK(s.passes_upper);
  CHECK(s.fails_lower);
  CHECK(s.lower < s.upper);
  // Brute force over the dyadic ladder.
  const Field m = u.magnitude_field();
  double brute = infinity;
  for (double ell = 2 * g.spacing(); ell < g.length() / 2; ell *= 2) {
    const auto c = certify(m, SparsenessParams{0.5, 0.3, ell, infinity, TailRule::inclusive});
    if (c.verdict) {
      brute = ell;
      break;
    }
  }
  CHECK(s.upper == brute);
  // Refinement stays inside the last octave and still passes.
  const auto r = sparseness_scales(u, 0, 0.5, 0.3, 6);
  CHECK(r.upper <= s.upper);
  CHECK(r.upper > s.upper / 2);
  CHECK(certify(m, SparsenessParams{0.5, 0.3, r.upper, infinity, TailRule::inclusive}).verdict);
  CHECK(to_json(s).at("passes_upper") == true);
}

TEST_CASE("compactly supported profile: ε ≤ (R̄/ℓ)^d") {
  const double R0 = 1.5;
  const auto a = compact_ansatz(R0, 0.5, 0.5);
  const Grid g(2, 256, 16.0);
  const Field u = build_trajectory(a, g, {-1.0}).front();
  const Field m = u.magnitude_field();
  for (double ell : {2.0, 3.0, 5.0, 7.0}) {
    const auto c = certify(m, SparsenessParams{0.5, 0.2, ell, infinity, TailRule::inclusive});
    // S ⊂ B_{R̄} with R̄ = R0 plus one cell for the discrete ball.
    const double Rbar = R0 + g.spacing();
    CHECK(c.measured_epsilon <= std::pow(Rbar / ell, 2) + 1e-12);
  }
}

TEST_CASE("coarse grid leaves the lower scale unresolved") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid g(2, 64, 16.0);
  const auto s = sparseness_scales(build_trajectory(a, g, {-1.0}).front(), 0, 0.5, 0.3);
  CHECK_FALSE(s.lower_resolved);
  CHECK(std::isnan(s.lower));
  CHECK_FALSE(s.fails_lower);
  CHECK(s.passes_upper);
  CHECK(to_json(s).at("lower").is_null());
}

TEST_CASE("constant profile is never sparse") {
  const auto a = constant_ansatz(2, 0.5, 0.5);
  const Grid g(2, 64, 16.0);
  const Field u = build_trajectory(a, g, {-1.0}).front();
  const auto s = sparseness_scales(u, 0, 0.1, 0.5);
  CHECK(std::isinf(s.upper));
  CHECK_FALSE(s.passes_upper);
  CHECK(std::isinf(s.lower));
  CHECK(to_json(s).at("lower") == "inf");
}

TEST_CASE("sparseness scales shrink like (−t)^ζ_x") {
  const auto a = gaussian_ansatz(2, 0.5, 0.5);
  const Grid g(2, 1024, 16.0);
  const std::vector<double> taus = {1.0, 0.5, 0.25, 0.125};
  std::vector<double> upper, lower;
  for (double tau : taus) {
    const auto s = sparseness_scales(build_trajectory(a, g, {-tau}).front(), 0, 0.25, 0.3, 8);
    CHECK(s.passes_upper);
    CHECK(s.fails_lower);
    upper.push_back(s.upper);
    lower.push_back(s.lower);
  }
  CHECK(std::abs(fit_exponent(taus, upper) - 0.5) < 0.02);
  CHECK(std::abs(fit_exponent(taus, lower) - 0.5) < 0.02);
}
