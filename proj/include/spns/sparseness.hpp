#pragma once

#include <cstddef>
#include <vector>

#include <json.hpp>

#include "spns/field.hpp"

namespace spns {

/// Boolean grid mask (one byte per sample).
struct Mask {
  Grid grid;
  std::vector<unsigned char> bits;

  std::size_t count() const;
  /// count · h^d
  double measure() const;
  Field as_field() const;
};

/// How the tail condition ‖u‖_{L^p(S^c)} vs β‖u‖_{L^p} is compared.
/// `strict` is Def. (ε,β,ℓ)-sparseness; `inclusive` admits equality, which is the
/// L^∞ naive notion |{|f| > ½‖f‖_∞} ∩ B_ℓ| ≤ ε|B_ℓ| at β = ½.
enum class TailRule { strict, inclusive };

struct SparsenessParams {
  double epsilon = 0.1;  // max local volume fraction of S
  double beta = 0.5;     // allowed tail fraction outside S
  double ell = 1.0;      // ball radius (physical)
  double p = 2.0;        // Lebesgue exponent, may be infinity
  TailRule tail_rule = TailRule::strict;

  /// Checks ε, β ∈ (0,1), p ∈ [1,∞] and 0 < ℓ < L/2 for the given box.
  void validate(double box_length) const;
};

struct SparsenessCertificate {
  SparsenessParams params;
  Mask witness;
  double lambda = 0.0;            // threshold used to build S = {|u| > λ}
  double measured_beta = 0.0;     // ‖u‖_{L^p(S^c)} / ‖u‖_{L^p}
  double measured_epsilon = 0.0;  // max_x |S ∩ B_ℓ(x)| / |B_ℓ|
  bool tail_ok = false;
  bool fraction_ok = false;
  bool verdict = false;  // a pass proves sparseness; a fail does not disprove it
};

/// S = {|f| > λ}, Euclidean magnitude for vector fields.
Mask superlevel_mask(const Field& f, double lambda);

/// Lattice offsets y with |y| ≤ ℓ, as a mask centred on index 0.
Mask discrete_ball(const Grid& grid, double ell);

struct LocalFraction {
  double value = 0.0;       // max over centres of |S ∩ B| / |B|, in [0,1]
  std::size_t ball_count = 0;
  std::size_t max_count = 0;
  std::size_t argmax = 0;   // flat index of a maximising centre
};

/// Maximum local volume fraction over all n^d lattice centres, by circular FFT
/// convolution with the discrete ball.  Counts are rounded to integers, so the
/// result is exact and deterministic.
LocalFraction max_local_fraction(const Mask& mask, double ell);

/// Canonical certificate: S is the superlevel set at the largest threshold (40-step
/// bisection, conservative side) whose tail fraction satisfies the tail rule.
SparsenessCertificate certify(const Field& u, const SparsenessParams& params);

/// Tail fraction ‖u‖_{L^p(S^c)}/‖u‖_{L^p} for S = {|u| > λ}.
double tail_fraction(const Field& u, double lambda, double p);

struct ChebyshevScale {
  double p = 0.0;
  double mu_p = 0.0;   // 1/μ_p = d(1/2 − 1/p)
  double ell0 = 0.0;   // (‖u‖_{L²}/‖u‖_{L^p})^{μ_p}
  // L¹/L^∞ variant: ℓ₀ = (‖f‖₁/‖f‖_∞)^{1/d} and |{|f| > ½‖f‖_∞}| ≤ 2ℓ₀^d.
  double naive_ell0 = 0.0;
  double naive_superlevel_measure = 0.0;
  double naive_bound = 0.0;
  bool naive_bound_holds = false;
};

/// Requires p > 2 and a nonzero field.
ChebyshevScale chebyshev_scale(const Field& u, double p);

/// 1/μ_p = d(1/2 − 1/p).
double mu_p(int d, double p);

struct AprioriCertificate {
  ChebyshevScale scale;
  double a = 1.0;  // dyadic amplification, ℓ = a ℓ₀
  double b = 0.0;  // b^{1−2/p} = β
  double threshold = 0.0;          // b ℓ₀^{−d/p} ‖u‖_{L^p}
  double set_measure = 0.0;        // |S_t|
  double set_measure_bound = 0.0;  // ℓ₀^d / b²
  double tail_norm = 0.0;          // ‖u‖_{L^p(S_t^c)}
  double tail_bound = 0.0;         // b^{1−2/p} ‖u‖_{L^p}
  std::vector<double> tried_a;
  std::vector<double> tried_fraction;
  SparsenessCertificate certificate;
};

/// Builds S_t = {|u| > b ℓ₀^{−d/p}‖u‖_p} and returns the smallest dyadic a ≥ 1
/// with local fraction ≤ ε at ℓ = aℓ₀.  Throws domain if aℓ₀ reaches L/2.
AprioriCertificate apriori_certificate(const Field& u, double epsilon, double beta, double p);

struct NonsparseScale {
  double ell = 0.0;         // (1−β)‖∇^k u‖_∞ / ‖∇^{k+1}u‖_∞, +∞ if the latter vanishes
  double sup_k = 0.0;
  double sup_k1 = 0.0;
  std::size_t argmax = 0;
  double min_in_half_ball = 0.0;   // min of |∇^k u| over B_{ℓ/2}(argmax)
  double epsilon_at_half = 0.0;    // canonical certificate's local fraction at ℓ/2
  bool fails_at_half = false;      // min_in_half_ball > β sup_k, so any S covers the ball
};

/// Lower (non-sparseness) scale of ∇^k u.  Throws degenerate on a zero derivative
/// field and resolution if ℓ/2 < 2h.
NonsparseScale nonsparse_scale(const Field& u, int k, double beta);

/// Parameters, λ, measured (ε, β), verdict and grid metadata.
nlohmann::json to_json(const SparsenessCertificate& c);

}  // namespace spns
