#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spns/field.hpp"
#include "spns/frequency.hpp"
#include "spns/registry.hpp"
#include "spns/sparseness.hpp"

namespace spns {

enum class KernelKind { heat, low_pass, custom };

/// Radial mollifier G with G_t u = t^{−d/2}G(·/√t) ∗ u.
///
/// heat:     G = (4π)^{−d/2}e^{−|x|²/4}, closed-form norms and tail.
/// low_pass: G = F⁻¹χ, the kernel of Δ_{<0}, so G_t = Δ_{<J} when √t = 2^{−J}.
/// custom:   any radial profile, tabulated up to a declared support radius.
class KernelSpec {
 public:
  static KernelSpec heat(int d);
  static KernelSpec low_pass(int d);
  static KernelSpec custom(int d, std::string name, std::function<double(double)> profile,
                           double support_radius);

  KernelKind kind() const noexcept { return kind_; }
  int dim() const noexcept { return d_; }
  const std::string& name() const noexcept { return name_; }

  double value(double r) const;
  double l1_norm() const noexcept { return l1_; }
  double linf_norm() const noexcept { return linf_; }
  /// ∫G, used to normalise sampled kernels.
  double integral() const noexcept { return integral_; }
  /// ‖G‖_{L¹(B_ℓ̄^c)}, nonincreasing in ℓ̄.
  double tail(double ell_bar) const;
  /// ‖G‖_{L^q}, from the radial table (closed form for heat).
  double lq_norm(double q) const;
  /// Smallest tabulated ℓ̄ with tail(ℓ̄) ≤ level.
  double tail_inverse(double level) const;

  const std::vector<double>& tail_radii() const noexcept { return radii_; }
  const std::vector<double>& tail_values() const noexcept { return tails_; }

 private:
  KernelSpec() = default;
  void tabulate(const std::function<double(double)>& g, double support, double dr);

  KernelKind kind_ = KernelKind::heat;
  int d_ = 1;
  std::string name_;
  std::function<double(double)> profile_;
  double support_ = 0.0;
  double l1_ = 0.0, linf_ = 0.0, integral_ = 0.0;
  std::vector<double> radii_, values_, tails_;
};

/// G_t u.  Heat and low-pass use exact multipliers; custom kernels are sampled,
/// renormalised to ∫G and convolved.  Throws domain if √t > L/8, or if a sampled
/// kernel loses more than 1e−8 of its L¹ mass outside the box.
Field evolve(const Field& u, double t, const KernelSpec& kernel);

/// Discrete kernel K with (G_t u)(x) = Σ_y K(x − y) u(y).
Field discrete_kernel(const Grid& grid, double t, const KernelSpec& kernel);

/// Circular convolution (K ⊛ u)(x) = Σ_y K(x − y)u(y), per component of u.
Field convolve(const Field& kernel, const Field& u);

struct InequalityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

struct DecayRequirements {
  double gamma = 0.5;
  double p = 2.0;
  int d = 2;
  double C0 = 0.0;
  double f_of_gamma = 0.0;
  double ell_bar = 0.0;      // minimal admissible ℓ̄
  double g_l1 = 0.0;
  double g_linf = 0.0;
  double beta_max = 0.0;     // tail fraction ≤ γ/(3‖G‖₁)
  double epsilon_max = 0.0;  // volume fraction ε with ε^{1−1/p} ≤ γ/(C₀‖G‖_∞ℓ̄^d)
};

/// Requirements of the heat lemma for kernel G at decay γ.  ℓ̄ = max(f(γ), heat
/// bound √(C₀ ln(C₀/γ))); f(γ) = tail⁻¹(γ/3) for non-heat kernels.
DecayRequirements decay_requirements(const KernelSpec& kernel, double gamma, double p, double C0);

struct DecayReport {
  DecayRequirements req;
  double ell = 0.0;
  double t = 0.0;
  SparsenessCertificate certificate;
  std::vector<InequalityCheck> checks;
  double norm_u = 0.0;
  double norm_evolved = 0.0;
  double ratio = 0.0;
  double far = 0.0;      // ‖I^far‖_p
  double near_s = 0.0;   // ‖II^near_S‖_p
  double near_sc = 0.0;  // ‖II^near_{S^c}‖_p
  double identity_residual = 0.0;  // max|I + II + II − G_t u| / max|G_t u|
  bool terms_ok = false;
  bool verdict = false;
};

/// Lemma experiment at physical scale ℓ: t = (ℓ/ℓ̄)², u must be certified
/// (ε_max, β_max, ℓ)-sparse in L^p.  Throws contract if the certificate fails (the
/// message names the violated inequality) or if p = 1.
DecayReport decay_experiment(const Field& u, double gamma, double p, const KernelSpec& kernel,
                             double ell, double C0);

/// Smallest ℓ on the dyadic ladder h·2^{k/4} (k ≥ 8) below L/2 at which the
/// decay preconditions certify, or 0 if none does.
double smallest_certified_scale(const Field& u, const DecayRequirements& req);

struct BlockDecay {
  int j = 0;
  double measured = 0.0;  // ‖e^{tΔ}Δ̇_j u‖_p / ‖u‖_p
  double bound = 0.0;     // C e^{−c t 4^j}
  bool holds = false;
};

struct FrequencyDecayReport {
  double gamma = 0.5;
  double p = 2.0;
  double t = 0.0;
  double J = 0.0;
  FrequencyCertificate certificate;
  double ratio = 0.0;            // ‖e^{tΔ}u‖_p / ‖u‖_p
  double high_ratio = 0.0;       // ‖e^{tΔ}Δ_{≥J}u‖_p / ‖u‖_p
  double low_ratio = 0.0;        // ‖e^{tΔ}Δ_{<J}u‖_p / ‖u‖_p
  double tail_sum_bound = 0.0;   // Σ_{j ≥ ⌊J⌋} C e^{−c t 4^j}
  double inverse_square = 0.0;   // 1/(t 4^J)
  std::vector<BlockDecay> blocks;
  bool blocks_ok = false;
  bool verdict = false;
};

/// Frequency lemma at time t: 2^J = K_cal γ^{−1} t^{−1/2}, β = γ/2.  Throws domain if
/// J is outside [j_min, j_max + 1] and contract if u is not (β, J)-sparse.
FrequencyDecayReport frequency_decay_experiment(const Field& u, double gamma, double p, double t,
                                                const RegistryEntry& constants);

struct SpatialFrequencyReport {
  double gamma = 0.5;
  double p = 2.0;
  double J = 0.0;
  bool vacuous = false;  // the spatial precondition cannot hold (e.g. constant field)
  bool precondition_met = false;
  DecayRequirements req;
  SparsenessCertificate spatial;
  FrequencyCertificate frequency;
  bool verdict = false;  // ratio ≤ γ
};

/// Spatial ⇒ frequency sparseness with √t = 2^{−J}: certifies u at ℓ = ℓ̄√t against
/// the low-pass kernel's requirements, then checks ‖Δ_{<J}u‖_p ≤ γ‖u‖_p.  A field
/// without the spatial certificate passes only trivially (already frequency-sparse);
/// otherwise it throws contract, since the lemma then says nothing.
SpatialFrequencyReport spatial_implies_frequency_check(const Field& u, double gamma, double J,
                                                       double p, double C0);

/// ‖e^{tΔ}u‖_∞ / ‖u‖_∞ at t = C ℓ².
double heat_drop_ratio(const Field& u, double ell, double C);

nlohmann::json to_json(const DecayReport& r);
nlohmann::json to_json(const FrequencyDecayReport& r);
nlohmann::json to_json(const SpatialFrequencyReport& r);

}  // namespace spns
