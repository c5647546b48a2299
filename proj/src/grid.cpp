#include "spns/grid.hpp"

#include <numbers>
#include <string>

#include "spns/errors.hpp"

namespace spns {

Grid::Grid(int d, int n, double L) : d_(d), n_(n), L_(L), size_(1) {
  require(d >= 1 && d <= 3, ErrorKind::invalid_input,
          "grid dimension must be 1, 2 or 3 (got " + std::to_string(d) + ")");
  require(n >= 8 && (n & (n - 1)) == 0, ErrorKind::invalid_input,
          "samples per axis must be a power of two >= 8 (got " + std::to_string(n) + ")");
  require(std::isfinite(L) && L > 0.0, ErrorKind::invalid_input, "box length must be positive");
  for (int a = 0; a < d; ++a) {
    size_ *= static_cast<std::size_t>(n);
    require(size_ <= max_points, ErrorKind::invalid_input, "grid exceeds the point budget");
  }
}

double Grid::frequency(int i) const noexcept {
  return 2.0 * std::numbers::pi * wrapped(i) / L_;
}

std::array<int, 3> Grid::unflatten(std::size_t flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = d_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t Grid::flatten(const std::array<int, 3>& idx) const noexcept {
  std::size_t flat = 0;
  for (int a = 0; a < d_; ++a) flat = flat * n_ + static_cast<std::size_t>(idx[a]);
  return flat;
}

std::array<double, 3> Grid::position(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (int a = 0; a < d_; ++a) x[a] = coordinate(idx[a]);
  return x;
}

std::array<double, 3> Grid::frequency_vector(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  for (int a = 0; a < d_; ++a) xi[a] = frequency(idx[a]);
  return xi;
}

std::array<double, 3> Grid::derivative_frequency_vector(std::size_t flat) const noexcept {
  auto idx = unflatten(flat);
  std::array<double, 3> xi{0.0, 0.0, 0.0};
  for (int a = 0; a < d_; ++a) xi[a] = idx[a] == n_ / 2 ? 0.0 : frequency(idx[a]);
  return xi;
}

double Grid::frequency_squared(std::size_t flat) const noexcept {
  auto xi = frequency_vector(flat);
  return xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
}

}  // namespace spns
