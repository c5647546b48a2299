#include "spns/field.hpp"

#include <cmath>
#include <string>

#include "spns/errors.hpp"

namespace spns {

Field::Field(Grid grid, int components, std::vector<double> values)
    : grid_(grid), components_(components), values_(std::move(values)) {
  require(components >= 1, ErrorKind::invalid_input, "field needs at least one component");
  require(values_.size() == static_cast<std::size_t>(components) * grid_.size(),
          ErrorKind::invalid_input,
          "field value count " + std::to_string(values_.size()) + " does not match " +
              std::to_string(components) + " x " + std::to_string(grid_.size()));
  for (double v : values_) {
    require(std::isfinite(v), ErrorKind::invalid_input, "field contains non-finite values");
  }
}

Field Field::zeros(const Grid& grid, int components) {
  return Field(grid, components, std::vector<double>(components * grid.size(), 0.0));
}

Field Field::constant(const Grid& grid, double value) {
  return Field(grid, 1, std::vector<double>(grid.size(), value));
}

Field Field::sample(const Grid& grid,
                    const std::function<double(const std::array<double, 3>&)>& f) {
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.position(i));
  return Field(grid, 1, std::move(v));
}

Field Field::sample_vector(
    const Grid& grid, int components,
    const std::function<void(const std::array<double, 3>&, std::span<double>)>& f) {
  const std::size_t N = grid.size();
  std::vector<double> v(components * N);
  std::vector<double> out(components);
  for (std::size_t i = 0; i < N; ++i) {
    f(grid.position(i), out);
    for (int c = 0; c < components; ++c) v[c * N + i] = out[c];
  }
  return Field(grid, components, std::move(v));
}

double Field::magnitude(std::size_t flat) const noexcept {
  if (components_ == 1) return std::abs(values_[flat]);
  double s = 0.0;
  for (int c = 0; c < components_; ++c) {
    double v = values_[c * points() + flat];
    s += v * v;
  }
  return std::sqrt(s);
}

Field Field::magnitude_field() const {
  std::vector<double> v(points());
  for (std::size_t i = 0; i < points(); ++i) v[i] = magnitude(i);
  return Field(grid_, 1, std::move(v));
}

Field Field::scaled(double factor) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= factor;
  return Field(grid_, components_, std::move(v));
}

Field Field::plus(const Field& other) const {
  require(grid_ == other.grid_ && components_ == other.components_, ErrorKind::invalid_input,
          "field shapes differ");
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return Field(grid_, components_, std::move(v));
}

Field Field::minus(const Field& other) const { return plus(other.scaled(-1.0)); }

Field Field::shifted(const std::array<int, 3>& offset) const {
  const int n = grid_.n();
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < points(); ++i) {
    auto idx = grid_.unflatten(i);
    for (int a = 0; a < grid_.dim(); ++a) idx[a] = ((idx[a] + offset[a]) % n + n) % n;
    const std::size_t j = grid_.flatten(idx);
    for (int c = 0; c < components_; ++c) v[c * points() + j] = values_[c * points() + i];
  }
  return Field(grid_, components_, std::move(v));
}

}  // namespace spns
