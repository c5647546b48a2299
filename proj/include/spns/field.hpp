#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "spns/grid.hpp"

namespace spns {

/// Real samples of an m-component field on a periodic grid.
/// Storage is component-major: component c occupies [c*N, (c+1)*N).
class Field {
 public:
  /// Throws invalid_input if the value count is wrong or any value is non-finite.
  Field(Grid grid, int components, std::vector<double> values);

  static Field zeros(const Grid& grid, int components = 1);
  static Field constant(const Grid& grid, double value);
  /// Scalar field f(x) sampled at every grid point.
  static Field sample(const Grid& grid,
                      const std::function<double(const std::array<double, 3>&)>& f);
  /// Vector field with `components` entries written by f(x, out).
  static Field sample_vector(
      const Grid& grid, int components,
      const std::function<void(const std::array<double, 3>&, std::span<double>)>& f);

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  std::size_t points() const noexcept { return grid_.size(); }

  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> component(int c) const noexcept {
    return std::span<const double>(values_).subspan(c * points(), points());
  }
  /// Euclidean magnitude over components at a flat grid index.
  double magnitude(std::size_t flat) const noexcept;
  /// Pointwise Euclidean magnitude as a scalar field.
  Field magnitude_field() const;

  Field scaled(double factor) const;
  Field plus(const Field& other) const;
  Field minus(const Field& other) const;
  /// Circular shift by an integer lattice vector.
  Field shifted(const std::array<int, 3>& offset) const;

 private:
  Grid grid_;
  int components_;
  std::vector<double> values_;
};

/// Fourier coefficients û(κ) = N^{-1} Σ_x u(x) e^{-iξ·x}, one block per component,
/// indexed like the physical grid (FFT order).  ‖u‖²_{L²} = L^d Σ|û|².
struct SpectralField {
  Grid grid;
  int components = 1;
  std::vector<std::complex<double>> coefficients;

  std::span<std::complex<double>> component(int c) {
    return std::span<std::complex<double>>(coefficients).subspan(c * grid.size(), grid.size());
  }
  std::span<const std::complex<double>> component(int c) const {
    return std::span<const std::complex<double>>(coefficients).subspan(c * grid.size(),
                                                                      grid.size());
  }
};

}  // namespace spns
