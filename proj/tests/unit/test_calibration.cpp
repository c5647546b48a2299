#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "spns/calibration.hpp"
#include "spns/errors.hpp"
#include "spns/frequency.hpp"
#include "spns/random.hpp"
#include "spns/spectral.hpp"

using namespace spns;
using std::numbers::pi;

TEST_CASE("dyadic ceiling and unit balls") {
  CHECK(dyadic_ceil(1.0) == 1.0);
  CHECK(dyadic_ceil(1.01) == 2.0);
  CHECK(dyadic_ceil(0.3) == 0.5);
  CHECK(dyadic_ceil(9.42) == 16.0);
  CHECK_THROWS_AS(dyadic_ceil(0.0), Error);
  CHECK(unit_ball_volume(1) == 2.0);
  CHECK(unit_ball_volume(2) == doctest::Approx(pi));
  CHECK(unit_ball_volume(3) == doctest::Approx(4 * pi / 3));
}

TEST_CASE("Gaussian norms and the heat tail bound") {
  for (int d = 1; d <= 3; ++d) {
    const KernelSpec heat = KernelSpec::heat(d);
    CHECK(heat.l1_norm() == 1.0);
    CHECK(heat.linf_norm() == doctest::Approx(std::pow(4 * pi, -d / 2.0)));
    const double C = heat_tail_constant(heat);
    CHECK(std::isfinite(C));
    CHECK(C <= 2.0);
    for (double r = 0.0; r <= 12.0; r += 0.5) {
      CHECK(heat.tail(r) <= C * std::exp(-r * r / 8) * (1 + 1e-9));
    }
  }
  // d = 1: erfc(r/2) ≤ e^{−r²/4} ≤ e^{−r²/8}, so C = 1 (attained at r = 0).
  CHECK(heat_tail_constant(KernelSpec::heat(1)) == doctest::Approx(1.0));
}

TEST_CASE("multiplier kernel norms") {
  // A Gaussian symbol has a positive kernel of unit mass.
  for (int d = 1; d <= 2; ++d) {
    const double l1 = multiplier_kernel_l1(
        d, [](double r) { return std::exp(-r * r); }, 64.0, d == 1 ? 1024 : 256);
    CHECK(l1 == doctest::Approx(1.0).epsilon(1e-10));
  }
  // ‖F⁻¹m‖₁ ≥ sup|m| and the high-pass heat norm decreases in s.
  double prev = 1e300;
  for (double s : {1.0, 2.0, 4.0, 8.0}) {
    const double M = high_pass_heat_norm(2, s);
    CHECK(M >= std::exp(-s * 16.0 / 9.0) * (1 - 1e-9));
    CHECK(M < prev);
    prev = M;
  }
  // Blocks: B(0) is the block kernel's mass, at least sup φ = 1.
  CHECK(block_heat_norm(1, 0.0) >= 1.0);
}

TEST_CASE("kernel-level C0 is the smallest dyadic value meeting the proof's inequalities") {
  const auto gammas = calibration_gammas();
  auto tail_ok = [&](const KernelSpec& k, double C) {
    for (double g : gammas) {
      if (k.tail(std::sqrt(C * std::log(C / g))) > g / 3) return false;
    }
    return true;
  };
  const double expected[] = {8.0, 16.0, 16.0};
  for (int d = 1; d <= 3; ++d) {
    const KernelSpec heat = KernelSpec::heat(d);
    const double C0 = kernel_C0(heat, gammas);
    CHECK(C0 == expected[d - 1]);
    CHECK(C0 >= 3 * unit_ball_volume(d));
    CHECK(tail_ok(heat, C0));
    CHECK(C0 / 2 < 3 * unit_ball_volume(d));
  }
  // d = 1 by closed form: ‖G‖_{L¹(B_r^c)} = erfc(r/2).
  for (double g : gammas) {
    CHECK(std::erfc(std::sqrt(8 * std::log(8 / g)) / 2) <= g / 3);
  }
}

TEST_CASE("C0_ns: tail ≤ γ/6 and the volume display absorbs ‖G‖_∞") {
  const auto gammas = calibration_gammas();
  const double expected[] = {4.0, 4.0, 8.0};
  for (int d = 1; d <= 3; ++d) {
    const KernelSpec heat = KernelSpec::heat(d);
    const double C = kernel_C0_ns(heat, gammas);
    CHECK(C == expected[d - 1]);
    CHECK(2 * C >= 6 * unit_ball_volume(d) * heat.linf_norm());
    bool half_fails = 2 * (C / 2) < 6 * unit_ball_volume(d) * heat.linf_norm();
    for (double g : gammas) {
      CHECK(heat.tail(std::sqrt(C * std::log(2 * C / g))) <= g / 6);
      const double c = C / 2;
      half_fails = half_fails || heat.tail(std::sqrt(c * std::log(2 * c / g))) > g / 6;
    }
    CHECK(half_fails);
  }
  // d = 3, γ = 1/2, C0_ns = 4 by hand: ℓ̄² = 4 ln 16, erfc(ℓ̄/2) + ℓ̄e^{−ℓ̄²/4}/√π ≈ 0.137 > 1/12.
  const double r = std::sqrt(4 * std::log(16.0));
  CHECK(std::erfc(r / 2) + r * std::exp(-r * r / 4) / std::sqrt(pi) > 1.0 / 12);
}

TEST_CASE("K_cal makes the high-pass heat kernel at most γ/2") {
  const std::vector<double> gammas = {0.5, 0.25, 0.125};
  const double K = calibrate_K(2, gammas);
  CHECK(K == 1.0);
  for (double g : gammas) CHECK(high_pass_heat_norm(2, K * K / (g * g)) <= g / 2);
  bool half_fails = false;
  for (double g : gammas) {
    half_fails = half_fails || high_pass_heat_norm(2, K * K / (4 * g * g)) > g / 2;
  }
  CHECK(half_fails);
}

TEST_CASE("block constants bound every heated block of a random field") {
  const BlockConstants b = calibrate_block(2);
  CHECK(b.c == 0.25);
  CHECK(b.C == 4.0);
  for (double tau = 0.0; tau <= 16.0; tau += 1.0) {
    CHECK(block_heat_norm(2, tau) * std::exp(b.c * tau) <= b.C);
  }
  const Grid g(2, 128, 2 * pi);
  Rng rng(5);
  std::vector<double> v(g.size());
  for (double& x : v) x = rng.uniform(-1, 1);
  const Field u(g, 1, std::move(v));
  const DyadicDecomposition dec(g);
  for (double t : {1e-4, 1e-3, 1e-2}) {
    const auto blocks = dec.blocks(evolve(u, t, KernelSpec::heat(2)));
    for (int j = dec.j_min(); j <= dec.j_max(); ++j) {
      for (double p : {2.0, infinity}) {
        CHECK(lp_norm(blocks[j - dec.j_min()], p) <=
              b.C * std::exp(-b.c * t * std::exp2(2 * j)) * lp_norm(u, p) * (1 + 1e-9));
      }
    }
  }
}

TEST_CASE("Bernstein and low-pass constants") {
  // Single mode at level j₀ ≤ J, d = 1, p = ∞: calibrated C_B ≤ 4 bounds the ratio.
  const double CB = bernstein_constant(1, infinity);
  CHECK(CB <= 4.0);
  const Grid g(1, 1024, 2 * pi);
  for (int k : {1, 3, 8, 20}) {
    const Field u = Field::sample(g, [k](const auto& x) { return std::cos(k * x[0]); });
    for (double J : {std::ceil(std::log2(k)) + 0.0, std::ceil(std::log2(k)) + 2.0}) {
      CHECK(bernstein_ratio(u, J, infinity) <= CB);
    }
  }
  // p = 2 reduces to ‖F⁻¹χ(·/2)‖₁ = ‖F⁻¹χ‖₁.
  CHECK(bernstein_constant(2, 2.0) == low_pass_constant(2));
  CHECK(low_pass_constant(1) == 2.0);
  CHECK(low_pass_constant(2) == 4.0);
  CHECK(low_pass_constant(3) == 8.0);
  CHECK(KernelSpec::low_pass(2).l1_norm() <= low_pass_constant(2));
}

TEST_CASE("calibrated C0 is reproducible across corpus shuffles") {
  const KernelSpec heat = KernelSpec::heat(1);
  auto corpus = scalar_corpus(calibration_grid(1), 7, 12);
  CorpusCheck first;
  const double C0 = validate_C0(heat, infinity, kernel_C0(heat, calibration_gammas()), corpus, &first);
  CHECK(first.fields > 0);
  CHECK(first.violations == 0);
  CHECK(first.worst <= 1.0);
  std::mt19937_64 engine(11);
  for (int shuffle = 0; shuffle < 2; ++shuffle) {
    std::shuffle(corpus.begin(), corpus.end(), engine);
    CorpusCheck again;
    CHECK(validate_C0(heat, infinity, C0, corpus, &again) == C0);
    CHECK(again.fields == first.fields);
    CHECK(again.worst == first.worst);
  }
}

TEST_CASE("heat drop constant on the indicator example") {
  // ½ + ½·1 on width 0.1 has 51 samples above ½ (h = 1/512); the first ladder radius
  // with 51/(2m+1) ≤ 0.1 is ℓ = 256h = ½.  The centre drops to ¾ once
  // erf(0.05/(2√t)) ≤ ½, i.e. t ≥ t* = (0.025/erf⁻¹(½))², so C = 1/64.
  const Grid g(1, 4096, 8.0);
  const Field f = Field::sample(g, [](const auto& x) { return 0.5 + (std::abs(x[0]) < 0.05 ? 0.5 : 0.0); });
  CorpusCheck check;
  const double C = calibrate_drop({{"indicator", f}}, &check);
  CHECK(check.fields == 1);
  const double t_star = std::pow(0.025 / 0.4769362762044699, 2);
  CHECK(C == 1.0 / 64);
  CHECK(C * 0.25 >= t_star);
  CHECK(C / 2 * 0.25 < t_star);
  CHECK(heat_drop_ratio(f, 0.5, C) <= 0.75);
  CHECK(heat_drop_ratio(f, 0.5, C / 2) > 0.75);
  // At ℓ = 1 the frozen 1-D constant drops the peak as well.
  CHECK(heat_drop_ratio(f, 1.0, ConstantsRegistry::load_default().get("heat", 1, infinity).C_drop) <= 0.75);
}

TEST_CASE("calibration failure when nothing qualifies") {
  const Grid g(1, 256, 8.0);
  CHECK_THROWS_AS(calibrate_drop({{"flat", Field::constant(g, 1.0)}}), Error);
  try {
    calibrate_drop({{"flat", Field::constant(g, 1.0)}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::calibration);
  }
}

TEST_CASE("solver constants on a small corpus") {
  const NavierStokesConstants ns = calibrate_navier_stokes(2, infinity, Grid(2, 32, 2 * pi), 3, 3, 0.02);
  CHECK(ns.c_p > 0.0);
  CHECK(ns.c_p <= 1.0);
  CHECK(ns.growth.worst <= 2.0);
  CHECK(ns.C_duhamel >= ns.duhamel.worst);
  CHECK(ns.C_duhamel < 2 * ns.duhamel.worst);
  CHECK_THROWS_AS(calibrate_navier_stokes(2, 2.0, Grid(2, 32, 2 * pi), 3, 3, 0.02), Error);
}

TEST_CASE("frozen registry agrees with the kernel-level recomputation") {
  const ConstantsRegistry reg = ConstantsRegistry::load_default();
  CHECK(reg.version.rfind("1+", 0) == 0);
  const auto gammas = calibration_gammas();
  for (int d = 1; d <= 3; ++d) {
    const auto& e = reg.get("heat", d, infinity);
    CHECK(e.C0 >= kernel_C0(KernelSpec::heat(d), gammas));
    CHECK(e.C0_ns == kernel_C0_ns(KernelSpec::heat(d), gammas));
    CHECK(e.C_LP == low_pass_constant(d));
    CHECK(e.C_B == bernstein_constant(d, infinity));
    CHECK(e.f_table.size() == gammas.size());
    CHECK(e.f_of_gamma(0.5) == doctest::Approx(std::sqrt(e.C0 * std::log(2 * e.C0))));
    CHECK_THROWS_AS(e.f_of_gamma(1.0 / 128), Error);
    CHECK(reg.get("low_pass", d, 4.0).C0 > 1.0);
  }
  CHECK(reg.get("heat", 2, infinity).c_p > 0.0);
  CHECK(reg.get("heat", 3, 6.0).C_duhamel > 0.0);
  CHECK(reg.get("heat", 2, 2.0).c_p == 0.0);  // p ≤ d: no local theory constant
}
