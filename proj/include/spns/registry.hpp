#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace spns {

/// Constants the estimates leave implicit, calibrated once and then frozen.
/// Keyed by (kernel, d, p); p = infinity is stored as the string "inf".
struct RegistryEntry {
  std::string kernel = "heat";
  int d = 2;
  double p = 2.0;

  double C0 = 0.0;         // heat lemma: Hölder/tail constant
  double C0_ns = 0.0;      // theorem and proposition displays, ‖G‖_∞ absorbed
  std::vector<std::pair<double, double>> f_table;  // (γ, minimal ℓ̄), γ decreasing
  double K_cal = 0.0;      // 2^J = K_cal γ^{-1} t^{-1/2}
  double block_C = 0.0;    // ‖e^{tΔ}Δ̇_j u‖_p ≤ C e^{−c t 4^j}‖u‖_p
  double block_c = 0.0;
  double C_B = 0.0;        // Bernstein
  double C_LP = 0.0;       // ‖Δ_{<J}u‖_p ≤ C_LP‖u‖_p
  double C_drop = 0.0;     // heat drop to ¾ at T = C_drop ℓ²
  double c_p = 0.0;        // local well-posedness smallness
  double C_duhamel = 0.0;  // Duhamel term ≤ C t^{½(1−d/p)}‖u₀‖_p²

  /// Conservative f(γ): the entry for the largest tabulated γ' ≤ γ.  Throws
  /// calibration below the smallest tabulated γ (no extrapolation).
  double f_of_gamma(double gamma) const;
};

class ConstantsRegistry {
 public:
  std::string version = "unset";
  std::vector<RegistryEntry> entries;

  /// Throws calibration if the key is missing.
  const RegistryEntry& get(const std::string& kernel, int d, double p) const;
  bool contains(const std::string& kernel, int d, double p) const;
  /// Inserts or replaces by key.
  void put(const RegistryEntry& e);

  nlohmann::json to_json() const;
  static ConstantsRegistry from_json(const nlohmann::json& j);
  static ConstantsRegistry load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  /// $SPNS_REGISTRY if set, otherwise the path compiled into the library.
  static std::filesystem::path default_path();
  static ConstantsRegistry load_default();
};

/// "inf" for infinity, otherwise the number as JSON.
nlohmann::json exponent_to_json(double p);
double exponent_from_json(const nlohmann::json& j);

}  // namespace spns
