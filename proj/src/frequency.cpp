#include "spns/frequency.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <string>

#include "spns/errors.hpp"
#include "spns/spectral.hpp"

namespace spns {

namespace {

constexpr double inner_edge = 3.0 / 4.0;
constexpr double outer_edge = 4.0 / 3.0;

double theta(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double radial(const std::array<double, 3>& xi) {
  return std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
}

// Applies several radial symbols to one forward transform.
class SpectralCache {
 public:
  explicit SpectralCache(const Field& u) : F_(transform(u)) {
    const Grid& g = F_.grid;
    radii_.resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) radii_[i] = std::sqrt(g.frequency_squared(i));
  }

  template <class Symbol>
  Field apply(Symbol&& symbol) const {
    SpectralField G = F_;
    const std::size_t N = G.grid.size();
    std::vector<double> m(N);
    for (std::size_t i = 0; i < N; ++i) m[i] = symbol(radii_[i]);
    for (int c = 0; c < G.components; ++c) {
      auto block = G.component(c);
      for (std::size_t i = 0; i < N; ++i) block[i] *= m[i];
    }
    return inverse(G);
  }

 private:
  SpectralField F_;
  std::vector<double> radii_;
};

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = theta(x);
  return a / (a + theta(1.0 - x));
}

double low_pass_profile(double r) {
  return 1.0 - smooth_step((r - inner_edge) / (outer_edge - inner_edge));
}

double block_profile(double r) { return low_pass_profile(r / 2.0) - low_pass_profile(r); }

DyadicDecomposition::DyadicDecomposition(const Grid& grid)
    : grid_(grid),
      j_min_(static_cast<int>(std::ceil(std::log2(2.0 * std::numbers::pi / grid.length()) - 1e-12))),
      j_max_(static_cast<int>(std::floor(std::log2(std::numbers::pi / grid.spacing()) + 1e-12))) {
  require(j_min_ <= j_max_, ErrorKind::resolution, "grid resolves no dyadic level");
}

double DyadicDecomposition::block_symbol(int j, double xi) const {
  return block_profile(xi / std::ldexp(1.0, j));
}

double DyadicDecomposition::low_pass_symbol(double J, double xi) const {
  require(std::isfinite(J), ErrorKind::invalid_input, "low-pass level must be finite");
  return low_pass_profile(xi / std::exp2(J));
}

double DyadicDecomposition::partition_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double xi = std::sqrt(grid_.frequency_squared(i));
    double s = low_pass_symbol(j_min_, xi) + (1.0 - low_pass_symbol(j_max_ + 1, xi));
    for (int j = j_min_; j <= j_max_; ++j) s += block_symbol(j, xi);
    worst = std::max(worst, std::abs(s - 1.0));
  }
  return worst;
}

Field DyadicDecomposition::block(const Field& u, int j) const {
  require(j >= j_min_ && j <= j_max_, ErrorKind::domain,
          "block level " + std::to_string(j) + " outside the resolvable range [" +
              std::to_string(j_min_) + ", " + std::to_string(j_max_) + "]");
  return apply_multiplier(u, [&](const auto& xi) { return block_symbol(j, radial(xi)); });
}

std::vector<Field> DyadicDecomposition::blocks(const Field& u) const {
  SpectralCache cache(u);
  std::vector<Field> out;
  for (int j = j_min_; j <= j_max_; ++j) {
    out.push_back(cache.apply([&](double xi) { return block_symbol(j, xi); }));
  }
  return out;
}

Field DyadicDecomposition::low_pass(const Field& u, double J) const {
  return apply_multiplier(u, [&](const auto& xi) { return low_pass_symbol(J, radial(xi)); });
}

Field DyadicDecomposition::low_pass_inclusive(const Field& u, double J) const {
  return low_pass(u, J + 1.0);
}

Field DyadicDecomposition::high_pass(const Field& u, double J) const {
  return apply_multiplier(u,
                          [&](const auto& xi) { return 1.0 - low_pass_symbol(J, radial(xi)); });
}

Field DyadicDecomposition::coarse_remainder(const Field& u) const { return low_pass(u, j_min_); }

Field DyadicDecomposition::fine_remainder(const Field& u) const {
  return high_pass(u, j_max_ + 1.0);
}

FrequencyCertificate certify_frequency(const Field& u, const FrequencySparsenessParams& params,
                                       double p) {
  require(params.beta > 0.0 && params.beta < 1.0, ErrorKind::invalid_input,
          "beta must lie in (0,1)");
  validate_exponent(p);
  const double norm = lp_norm(u, p);
  require(norm > 0.0, ErrorKind::degenerate, "certify_frequency: zero field");
  DyadicDecomposition dec(u.grid());
  FrequencyCertificate c{params, p};
  c.ratio = lp_norm(dec.low_pass(u, params.J), p) / norm;
  c.verdict = c.ratio <= params.beta;
  return c;
}

double bernstein_ratio(const Field& u, double J, double p) {
  require(p >= 2.0, ErrorKind::invalid_input, "bernstein_ratio needs p >= 2");
  const double n2 = lp_norm(u, 2.0);
  if (n2 == 0.0) return 0.0;
  const int d = u.grid().dim();
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  DyadicDecomposition dec(u.grid());
  const double low = lp_norm(dec.low_pass_inclusive(u, J), p);
  return low / (std::exp2(J * d * (0.5 - inv_p)) * n2);
}

std::vector<BlockEnergy> block_energies(const Field& u) {
  DyadicDecomposition dec(u.grid());
  auto blocks = dec.blocks(u);
  std::vector<BlockEnergy> rows;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    rows.push_back({dec.j_min() + static_cast<int>(k), lp_norm(blocks[k], 2.0),
                    lp_norm(blocks[k], infinity)});
  }
  return rows;
}

BesovNorm besov_norm(const Field& u) {
  DyadicDecomposition dec(u.grid());
  BesovNorm b;
  b.j_min = dec.j_min();
  b.argmax = dec.j_min();
  auto rows = block_energies(u);
  for (const auto& r : rows) {
    const double v = std::ldexp(r.linf, -r.j);
    b.levels.push_back(v);
    if (v > b.value) {
      b.value = v;
      b.argmax = r.j;
    }
  }
  b.truncation_warning = b.value > 0.0 && (b.argmax == dec.j_min() || b.argmax == dec.j_max());
  return b;
}

void write_block_energy_csv(const std::vector<BlockEnergy>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << "j,l2,linf\n" << std::setprecision(17);
  for (const auto& r : rows) out << r.j << ',' << r.l2 << ',' << r.linf << '\n';
}

nlohmann::json to_json(const BesovNorm& b) {
  return {{"besov_norm", b.value},
          {"argmax_level", b.argmax},
          {"j_min", b.j_min},
          {"levels", b.levels},
          {"truncation_warning", b.truncation_warning}};
}

nlohmann::json to_json(const FrequencyCertificate& c) {
  nlohmann::json p = std::isinf(c.p) ? nlohmann::json("inf") : nlohmann::json(c.p);
  return {{"beta", c.params.beta}, {"J", c.params.J}, {"p", p},
          {"ratio", c.ratio},      {"verdict", c.verdict}};
}

}  // namespace spns
