#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spns/field.hpp"

namespace spns {

/// exp(−1/x)-based C^∞ step: 0 for x ≤ 0, 1 for x ≥ 1.
double smooth_step(double x);
/// Low-pass profile χ(r): 1 on [0, 3/4], 0 on [4/3, ∞), smooth in between.
double low_pass_profile(double r);
/// Block profile φ(r) = χ(r/2) − χ(r), supported in [3/4, 8/3].
double block_profile(double r);

/// Littlewood–Paley blocks Δ̇_j with symbol φ(|ξ|/2^j) over the levels a grid resolves:
/// 2^{j_min} ≥ 2π/L and 2^{j_max} ≤ π/h.
///
/// Δ_{<J} has symbol χ(|ξ|/2^J) for any real J, which equals Σ_{j<J} φ(|ξ|/2^j) for
/// integer J and keeps the mean mode.  u is recovered exactly as
///   coarse (Δ_{<j_min}) + Σ_{j_min..j_max} Δ̇_j + fine (1 − χ(|ξ|/2^{j_max+1})).
class DyadicDecomposition {
 public:
  explicit DyadicDecomposition(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  int j_min() const noexcept { return j_min_; }
  int j_max() const noexcept { return j_max_; }

  double block_symbol(int j, double xi) const;
  double low_pass_symbol(double J, double xi) const;
  /// max over grid frequencies of |coarse + Σ blocks + fine − 1|.
  double partition_residual() const;

  /// Throws domain if j is outside [j_min, j_max].
  Field block(const Field& u, int j) const;
  /// All blocks j_min..j_max from one forward transform.
  std::vector<Field> blocks(const Field& u) const;
  /// Δ_{<J}
  Field low_pass(const Field& u, double J) const;
  /// Δ_{≤J} = Δ_{<J+1}
  Field low_pass_inclusive(const Field& u, double J) const;
  /// u − Δ_{<J}
  Field high_pass(const Field& u, double J) const;
  Field coarse_remainder(const Field& u) const;
  Field fine_remainder(const Field& u) const;

 private:
  Grid grid_;
  int j_min_;
  int j_max_;
};

struct FrequencySparsenessParams {
  double beta = 0.5;
  double J = 0.0;  // real levels are allowed
};

struct FrequencyCertificate {
  FrequencySparsenessParams params;
  double p = 2.0;
  double ratio = 0.0;  // ‖Δ_{<J}u‖_p / ‖u‖_p
  bool verdict = false;  // ratio ≤ β
};

/// Throws degenerate on a zero field.
FrequencyCertificate certify_frequency(const Field& u, const FrequencySparsenessParams& params,
                                       double p);

/// ‖Δ_{≤J}u‖_p / (2^{J d(1/2−1/p)} ‖u‖_2), p ≥ 2.  Zero for a zero field.
double bernstein_ratio(const Field& u, double J, double p);

struct BlockEnergy {
  int j = 0;
  double l2 = 0.0;
  double linf = 0.0;
};

std::vector<BlockEnergy> block_energies(const Field& u);

struct BesovNorm {
  double value = 0.0;  // sup_j 2^{−j}‖Δ̇_j u‖_∞
  int argmax = 0;
  std::vector<double> levels;  // 2^{−j}‖Δ̇_j u‖_∞ for j = j_min..j_max
  int j_min = 0;
  /// The sup sits at j_min or j_max, so the box or the grid truncates it.
  bool truncation_warning = false;
};

/// Homogeneous Ḃ⁻¹_{∞,∞} norm over the resolvable levels.
BesovNorm besov_norm(const Field& u);

void write_block_energy_csv(const std::vector<BlockEnergy>& rows, const std::filesystem::path& path);
nlohmann::json to_json(const BesovNorm& b);
nlohmann::json to_json(const FrequencyCertificate& c);

}  // namespace spns
