#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace spns {

/// Uniform periodic box [-L/2, L/2)^d sampled with n points per axis.
///
/// Sample i along an axis sits at the wrapped coordinate (i < n/2 ? i : i - n) * h,
/// so index 0 is the origin and fields centred at 0 need no shift.
class Grid {
 public:
  static constexpr std::size_t max_points = std::size_t{1} << 27;

  Grid(int d, int n, double L);
  /// Placeholder 1-D grid so result structs can be default-constructed.
  Grid() : Grid(1, 8, 1.0) {}

  int dim() const noexcept { return d_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return L_; }
  double spacing() const noexcept { return L_ / n_; }
  /// h^d, the quadrature weight of one sample.
  double cell_volume() const noexcept { return std::pow(spacing(), d_); }
  std::size_t size() const noexcept { return size_; }

  /// Signed integer offset of index i along an axis, in [-n/2, n/2).
  int wrapped(int i) const noexcept { return i < n_ / 2 ? i : i - n_; }
  double coordinate(int i) const noexcept { return wrapped(i) * spacing(); }
  /// Physical angular frequency 2πκ/L for FFT index i.
  double frequency(int i) const noexcept;

  /// Row-major multi-index of a flat index (unused trailing axes are 0).
  std::array<int, 3> unflatten(std::size_t flat) const noexcept;
  std::size_t flatten(const std::array<int, 3>& idx) const noexcept;
  std::array<double, 3> position(std::size_t flat) const noexcept;
  /// |ξ|² for the spectral index `flat`.
  double frequency_squared(std::size_t flat) const noexcept;
  std::array<double, 3> frequency_vector(std::size_t flat) const noexcept;
  /// Frequency used by first-order operators: the Nyquist index maps to 0 so that
  /// the symbol stays odd and real fields map to real fields.
  std::array<double, 3> derivative_frequency_vector(std::size_t flat) const noexcept;

  /// Same box shape with side length scaled, same n.
  Grid rescaled(double factor) const { return Grid(d_, n_, L_ * factor); }

  bool operator==(const Grid& other) const noexcept {
    return d_ == other.d_ && n_ == other.n_ && L_ == other.L_;
  }

 private:
  int d_;
  int n_;
  double L_;
  std::size_t size_;
};

}  // namespace spns
