#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "spns/field.hpp"
#include "spns/frequency.hpp"
#include "spns/registry.hpp"
#include "spns/semigroup.hpp"
#include "spns/sparseness.hpp"

namespace spns {

struct DiagnosticSample {
  double t = 0.0;
  double energy = 0.0;      // ‖u‖²_{L²}
  double divergence = 0.0;  // ‖div u‖_{L²} / ‖∇u‖_{L²}
  double sup = 0.0;         // ‖u‖_∞
};

/// Velocity of a unit-viscosity periodic Navier–Stokes solution at time t.
struct NSState {
  Field u = Field::zeros(Grid(), 1);
  double t = 0.0;
  std::vector<DiagnosticSample> history;

  /// Leray-projects u0 (d components) and records the first sample.
  static NSState initial(const Field& u0);
};

/// Largest admissible step min(h²/4, h/(2‖u‖_∞)).
double cfl_limit(const Field& u);

struct StepOutcome {
  bool accepted = false;
  double suggested_dt = 0.0;
  NSState state;
};

/// Integrating-factor RK2 step: exact e^{−dt|ξ|²} on the linear part, Heun on
/// −ℙ∇·(u⊗u) with 2/3-rule dealiasing.  A step above the CFL limit is rejected.
StepOutcome try_step(const NSState& state, double dt);
/// As try_step, but a rejected step throws resolution with the suggested dt.
NSState step(const NSState& state, double dt);

struct RunOptions {
  double dt_max = 2e-3;
  int sample_every = 0;  // keep every k-th step as a snapshot; 0 keeps the endpoints only
  bool duhamel = false;  // accumulate the Duhamel integral and the linear part
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Field> snapshots;
  std::vector<Field> duhamel_snapshots;  // Duhamel term at each snapshot time, when tracked
  NSState final;
  Field linear = Field::zeros(Grid(), 1);   // e^{tΔ}u₀
  Field duhamel = Field::zeros(Grid(), 1);  // ∫₀ᵗ e^{(t−s)Δ}(−ℙ∇·(u⊗u)) ds, trapezoid on the step times
  int steps = 0;
  double max_divergence = 0.0;
  double max_energy_increase = 0.0;  // relative, per step
};

/// Integrates to t_end.  Steps are min(dt_max, 0.9·CFL) and shrink when the CFL
/// limit drops; the last step lands on t_end exactly.
Trajectory run(const Field& u0, double t_end, const RunOptions& options = {});

/// T̄ = (c_p/‖u₀‖_p)^{2/(1−d/p)}.  Requires p > d and a positive norm.
double guaranteed_time(double norm_p, double p, int d, double c_p);

struct DuhamelReport {
  double t = 0.0;
  double p = 2.0;
  double norm_u0 = 0.0;
  double duhamel_norm = 0.0;
  double measured_constant = 0.0;  // duhamel_norm / (t^{½(1−d/p)}‖u₀‖²_p)
  double bound = 0.0;
  bool holds = true;
};

/// Duhamel term along the numerical trajectory, normalised by t^{½(1−d/p)}‖u₀‖²_p.
DuhamelReport duhamel_bound_check(const Field& u0, double p, double t, double C,
                                  const RunOptions& options = {});

struct CriterionThresholds {
  double norm_p = 0.0;
  double p = 2.0;
  int d = 2;
  double T0 = 0.0;
  double T_bar = 0.0;
  double c_p = 0.0;
  double C0 = 0.0;        // theorem constant, 2·C0_ns so the theorem implies the proposition
  bool trivial = false;   // T0 ≤ T̄: nothing to prove
  double gamma = 1.0;
  double ell_bar = 0.0;   // ℓ̄² = C₀ ln(C₀/γ)
  double ell = 0.0;       // √T0 ℓ̄
  double beta = 0.0;      // tail fraction γ/C₀
  double epsilon = 0.0;   // volume fraction, ε^{1−1/p} = γ/(C₀ℓ̄^d)
};

CriterionThresholds criterion_thresholds(double norm_p, double p, int d, double T0,
                                         const RegistryEntry& constants);

struct DecreasingReport {
  bool frequency_version = false;
  double gamma = 0.5;
  double p = 2.0;
  double C_eff = 0.0;  // max(C_duhamel, γ/c_p), so that T < T̄
  double T = 0.0;
  double T_bar = 0.0;
  double t = 0.0;      // evaluation time
  double ell_bar = 0.0;
  double ell = 0.0;
  double J = 0.0;
  std::vector<InequalityCheck> checks;
  SparsenessCertificate certificate;
  FrequencyCertificate frequency_certificate;
  double norm_u0 = 0.0;
  double ratio = 0.0;            // ‖u(t)‖_p / ‖u₀‖_p
  double linear_ratio = 0.0;     // ‖e^{tΔ}u₀‖_p / ‖u₀‖_p
  double nonlinear_ratio = 0.0;  // ‖Duhamel‖_p / ‖u₀‖_p
  double mild_residual = 0.0;    // ‖u − e^{tΔ}u₀ − Duhamel‖_p / ‖u₀‖_p
  bool parts_ok = false;
  bool verdict = false;
};

/// Physical-space version: T from ‖u₀‖_p T^{½(1−d/p)} = γ/(2C), ℓ = √T ℓ̄ with
/// ℓ̄² = C0_ns ln(2C0_ns/γ), tail fraction ≤ γ/6, volume fraction^{1−1/p} ≤
/// γ/(2C0_ns ℓ̄^d).  Runs to t = T.  Throws contract naming the failed inequality.
DecreasingReport decreasing_experiment(const Field& u0, double gamma, double p,
                                       const RegistryEntry& constants,
                                       const RunOptions& options = {});

/// Frequency version at t = T/2: (γ/2, J)-sparse with 2^J = K_cal γ^{−1} t^{−1/2}.
DecreasingReport decreasing_frequency_experiment(const Field& u0, double gamma, double p,
                                                 const RegistryEntry& constants,
                                                 const RunOptions& options = {});

struct MonitorRow {
  double t = 0.0;
  std::vector<double> norms;   // ‖u‖_p per monitored p
  std::vector<double> gammas;  // γ_p(t) with T* := T_ref
  double ell0 = 0.0;           // (‖u‖₂/‖u‖_p)^{μ_p} for the first p > 2, else 0
  double apriori_lhs = 0.0;    // ℓ₀^{1/μ_p}
  double apriori_rhs = 0.0;    // c_p^{−1}‖u₀‖₂(T_ref − t)^{½(1−d/p)}
  bool apriori_checked = false;
  bool apriori_holds = true;
  double J = 0.0;              // crossing level of ‖u_{<J}‖_p = ½‖u‖_p
  double besov = 0.0;
  bool escape = false;
};

struct BlowupMonitor {
  double T_ref = 0.0;
  double c_p = 0.0;
  std::vector<double> ps;
  std::vector<MonitorRow> rows;

  std::vector<double> escape_times() const;
};

/// Diagnostics along a stored trajectory.  Zero snapshots are skipped; samples at
/// or after T_ref are dropped.  J uses the first monitored exponent.
BlowupMonitor monitor(const std::vector<double>& times, const std::vector<Field>& snapshots,
                      double T_ref, const std::vector<double>& ps, double c_p);

/// Sup of {J : ‖Δ_{<J}u‖_p < ½‖u‖_p}, located by bisection over the grid's levels.
double half_norm_level(const Field& u, double p);

void write_monitor_csv(const BlowupMonitor& m, const std::filesystem::path& path);

nlohmann::json to_json(const DuhamelReport& r);
nlohmann::json to_json(const CriterionThresholds& c);
nlohmann::json to_json(const DecreasingReport& r);

}  // namespace spns
