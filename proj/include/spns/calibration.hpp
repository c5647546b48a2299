#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "spns/corpus.hpp"
#include "spns/registry.hpp"
#include "spns/semigroup.hpp"

namespace spns {

/// Smallest power of two ≥ x (x > 0).
double dyadic_ceil(double x);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// Decay levels tabulated in f_table, 1/2 down to 1/64.
std::vector<double> calibration_gammas();

/// ‖F⁻¹m‖_{L¹(R^d)} for a radial symbol m(|ξ|), by FFT on a box wide enough for the
/// kernel.  The discrete kernel is periodised, so this can only underestimate by the
/// mass that wraps; the box is chosen so that is negligible for the symbols used here.
double multiplier_kernel_l1(int d, const std::function<double(double)>& symbol, double L, int n);

/// M(s) = ‖F⁻¹((1 − χ)e^{−s|ξ|²})‖₁: the high-pass heat kernel at s = t4^J.
double high_pass_heat_norm(int d, double s);
/// B(τ) = ‖F⁻¹(φ e^{−τ|ξ|²})‖₁: one Littlewood–Paley block under heat at τ = t4^j.
double block_heat_norm(int d, double tau);

/// max over the tabulated tail of ‖G‖_{L¹(B_r^c)} e^{r²/8}.
double heat_tail_constant(const KernelSpec& kernel);

/// Smallest dyadic C0 > 1 with C0 ≥ 3ω_d (near-S term) and, for heat, tail at
/// √(C0 ln(C0/γ)) ≤ γ/3 for every γ in `gammas`.
double kernel_C0(const KernelSpec& kernel, const std::vector<double>& gammas);

/// Smallest dyadic C0_ns with 2C0_ns ≥ 6ω_d‖G‖_∞ and tail at √(C0_ns ln(2C0_ns/γ)) ≤ γ/6.
double kernel_C0_ns(const KernelSpec& heat, const std::vector<double>& gammas);

/// Smallest dyadic K with M(K²/γ²) ≤ γ/2 for every γ in `gammas`.
double calibrate_K(int d, const std::vector<double>& gammas);

struct BlockConstants {
  double C = 0.0;
  double c = 0.25;
};
/// C = dyadic ceiling of sup_τ B(τ)e^{cτ} for fixed c = 1/4 (φ lives on |ξ| ≥ 3/4).
BlockConstants calibrate_block(int d);

/// 2^{d(1/2−1/p)}‖F⁻¹χ‖_r with 1/r = 1/2 + 1/p, rounded up dyadically (p ≥ 2).
double bernstein_constant(int d, double p);
/// ‖F⁻¹χ‖₁ rounded up dyadically.
double low_pass_constant(int d);

struct CorpusCheck {
  std::string constant;
  int fields = 0;      // corpus fields that met the preconditions
  int violations = 0;  // at the returned constant
  double worst = 0.0;  // the worst measured quantity at the returned constant
};

/// Validates C0 on the corpus: every field certified at its smallest ladder scale
/// for γ ∈ {1/2, 1/4} must decay by γ with each proof term ≤ γ/3.  Doubles C0 until
/// that holds; throws calibration after 8 doublings.
double validate_C0(const KernelSpec& kernel, double p, double C0,
                   const std::vector<CorpusItem>& corpus, CorpusCheck* check = nullptr);

/// Smallest dyadic C with ‖e^{Cℓ²Δ}f‖_∞ ≤ ¾‖f‖_∞ for every nonnegative corpus field,
/// ℓ the smallest ladder scale at which f is naively sparse (ε = 0.1, β = ½, L^∞).
double calibrate_drop(const std::vector<CorpusItem>& corpus, CorpusCheck* check = nullptr);

struct NavierStokesConstants {
  double c_p = 0.0;
  double C_duhamel = 0.0;
  CorpusCheck growth;
  CorpusCheck duhamel;
};

/// Largest dyadic c_p ≤ 1 such that every corpus velocity with T̄ = T keeps
/// ‖u(t)‖_p ≤ 2‖u₀‖_p on (0, T], and the dyadic ceiling of the measured Duhamel
/// constant over the same runs.
NavierStokesConstants calibrate_navier_stokes(int d, double p, const Grid& grid,
                                              std::uint64_t seed, int count, double T);

struct CalibrationOptions {
  std::uint64_t seed = 20240601;
  int scalar_count = 12;
  int velocity_count = 6;
  std::vector<int> dims = {1, 2, 3};
  std::vector<double> ps = {2.0, 4.0, 6.0, std::numeric_limits<double>::infinity()};
  bool navier_stokes = true;
};

struct CalibrationResult {
  ConstantsRegistry registry;
  nlohmann::json log;  // evidence per constant
};

/// Full pass: kernel-level constants per d, corpus checks per (d, p), solver-based
/// constants for p > d ≥ 2.  The version string carries a digest of the entries.
CalibrationResult calibrate_registry(const CalibrationOptions& options = {});

/// Deterministic corpus used by calibrate_registry for dimension d.
Grid calibration_grid(int d);

}  // namespace spns
