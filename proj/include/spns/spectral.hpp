#pragma once

#include <array>
#include <complex>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "spns/field.hpp"

namespace spns {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// In-place unnormalised FFT over one component block laid out on `grid`.
/// sign = -1 is the forward transform.  Plans are cached and shared.
void fft_in_place(const Grid& grid, std::span<std::complex<double>> data, int sign);

SpectralField transform(const Field& f);
/// Real part of the inverse transform; the imaginary residue of a Hermitian
/// spectrum is rounding noise and is discarded.
Field inverse(const SpectralField& F);

/// Riemann-sum L^p norm of the pointwise Euclidean magnitude; p = infinity is a grid max.
double lp_norm(const Field& f, double p);
/// L^p norm restricted to samples where `keep[i]` is true.
double lp_norm_masked(const Field& f, double p, std::span<const unsigned char> keep);
double lp_norm_of_magnitudes(std::span<const double> magnitudes, double cell_volume, double p);
void validate_exponent(double p);

/// Multiply every component by a real radial-or-not symbol m(ξ).
Field apply_multiplier(const Field& f, const std::function<double(const std::array<double, 3>&)>& symbol);

struct DerivativeResult {
  Field field;
  /// Fraction of the differentiated spectrum's L² energy beyond 2/3 of Nyquist.
  double high_band_fraction = 0.0;
  bool nyquist_warning = false;
};

/// ∂^α f by multiplication with (iξ)^α.  Odd-order Nyquist modes are zeroed so the
/// result stays real.  `tolerance` bounds the high-band energy fraction before the
/// warning flag is raised.
DerivativeResult spectral_derivative(const Field& f, const std::array<int, 3>& multi_index,
                                     double tolerance = 1e-6);

/// Pointwise Frobenius magnitude of the k-th derivative tensor of all components,
/// |∇^k u|² = Σ_c Σ_{|α|=k} (k!/α!) |∂^α u_c|².
Field derivative_tensor_magnitude(const Field& f, int k);

/// Spectral divergence of a d-component field.
Field divergence(const Field& u);
/// Scalar curl (d = 2) or vector curl (d = 3).
Field curl(const Field& u);

/// Leray projection û ↦ (I − ξξᵀ/|ξ|²)û; the zero mode is untouched.
Field leray_project(const Field& u);
void leray_project_in_place(const Grid& grid, std::span<std::complex<double>> coefficients);

/// Discrete L² inner product Σ_c Σ_x f_c g_c h^d.
double inner_product(const Field& f, const Field& g);

}  // namespace spns
