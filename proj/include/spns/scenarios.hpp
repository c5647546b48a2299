#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <boost/rational.hpp>
#include <json.hpp>

#include "spns/field.hpp"

namespace spns {

using Rational = boost::rational<std::int64_t>;

/// "p/q", or "p" for integers.
std::string to_string(const Rational& r);
/// Parses "3", "-1/2" or a terminating decimal such as "0.25".  Throws invalid_input.
Rational parse_rational(const std::string& text);

/// α_k = ζ_x/(ζ_t + kζ_x).  Requires ζ_x, ζ_t > 0 and k ≥ 0.
Rational alpha_k(const Rational& zeta_x, const Rational& zeta_t, int k);
double alpha_k(double zeta_x, double zeta_t, int k);
/// ᾱ_k = 1/(k + d/2).
Rational alpha_bar(int d, int k);
/// Homogeneity of Z^{(k)}_α read as W^{k−1/α,∞}: k − 1/α.  A number only; no
/// embedding is implied.
Rational homogeneity_index(const Rational& alpha, int k);

// ---------------------------------------------------------------------------
// Similarity ansatz u(x,t) = (−t)^{−ζ_t} U(x/(−t)^{ζ_x}, −log(−t)), t < 0.

using Profile = std::function<void(const std::array<double, 3>& y, double s, std::span<double> out)>;

struct SimilarityAnsatz {
  double zeta_x = 0.5;
  double zeta_t = 0.5;
  int d = 2;
  int components = 2;
  Profile profile;
  double support_radius = 4.0;  // U is negligible (a few 1e−3 of its peak) beyond this radius
  double period = 0.0;          // in s; 0 for a steady profile

  /// Pointwise u(x,t).
  void evaluate(const std::array<double, 3>& x, double t, std::span<double> out) const;
};

/// Divergence-free Gaussian-envelope profile U = ∇^⊥ψ (d = 2) or ∇ × (ψe₃) (d = 3),
/// ψ = e^{−|y|²/2}(1 + ½cos(2y₁ + s)) when time-periodic (period 2π), else
/// ψ = e^{−|y|²/2}(1 + ½cos 2y₁).
SimilarityAnsatz gaussian_ansatz(int d, double zeta_x, double zeta_t, bool time_periodic = false);

/// Compactly supported profile: U = ∇^⊥ψ with ψ = (1 − |y|²/R²)⁴ inside B_R, d = 2.
SimilarityAnsatz compact_ansatz(double radius, double zeta_x, double zeta_t);

/// Constant vector profile (never sparse); support_radius is nominal.
SimilarityAnsatz constant_ansatz(int d, double zeta_x, double zeta_t);

/// U(·, s) sampled on grid (interpreted in y).
Field sample_profile(const SimilarityAnsatz& a, const Grid& grid, double s);

struct ProfileBounds {
  int k = 0;
  double C_k = 0.0;     // sup over the s samples of ‖∇^k U‖_∞
  double c_k = 0.0;     // inf over s of ‖∇^k U‖_{L^∞(B_{R_k})}
  double R_k = 0.0;
  double edge_ratio = 0.0;  // sup of |∇^k U| on the outer shell / C_k
  bool decays = false;      // edge_ratio ≤ 1e−3
};

/// Bounds over 16 phase samples per period (one sample when steady).  R_k is the
/// radius of the smallest ball around the origin holding the maximum.
ProfileBounds profile_bounds(const SimilarityAnsatz& a, const Grid& y_grid, int k);

/// Samples u(·, t) for each t < 0.  Throws domain when (−t)^{ζ_x}·support_radius > L/4.
std::vector<Field> build_trajectory(const SimilarityAnsatz& a, const Grid& grid,
                                    const std::vector<double>& times);

/// max_k relative gap between ‖∇^k_x u(t)‖_∞ and (−t)^{−(ζ_t+kζ_x)}‖∇^k_y U(s)‖_∞, with
/// the y-side computed on y_grid (a different discretisation).
double derivative_identity_error(const SimilarityAnsatz& a, const Grid& grid, const Grid& y_grid,
                                 double t, int k);

/// max |u(x,t) − λu(λx, λ²t)| / max|u(·,t)| over grid points, λ = e^{−period/2}
/// (one period of a time-periodic profile at ζ_x = ζ_t = ½).
double discrete_self_similarity_error(const SimilarityAnsatz& a, const Grid& grid, double t);

struct SparsenessScales {
  double t = 0.0;
  int k = 0;
  double upper = 0.0;  // smallest passing ladder scale of ∇^k u; +∞ if none
  double lower = 0.0;  // non-sparseness scale; +∞ when ∇^{k+1}u vanishes
  double upper_epsilon = 0.0;  // measured local fraction at the upper scale
  double lower_epsilon = 0.0;  // measured local fraction at the lower scale
  bool passes_upper = false;
  bool fails_lower = false;
  bool lower_resolved = true;  // false when half the non-sparseness scale is below 2h
};

/// L^∞ sparseness of |∇^k u(t)| (S = {|∇^k u| > β‖∇^k u‖_∞}).  The upper scale comes
/// from a dyadic sweep 2h·2^m, then `refine` bisection steps inside the last octave.
/// A lower scale below the grid is reported as unresolved (lower = NaN).
SparsenessScales sparseness_scales(const Field& u, int k, double epsilon, double beta,
                                   int refine = 0);

/// Least-squares slope of log y against log x.
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y);

// ---------------------------------------------------------------------------
// Admissible exponents in the (ζ_x, ζ_t) plane.

/// a ζ_x + b ζ_t + c ≥ 0 (> 0 when strict).
struct HalfPlane {
  std::string label;
  std::string source;  // the condition it encodes
  Rational a, b, c;
  bool strict = false;

  Rational value(const Rational& x, const Rational& y) const { return a * x + b * y + c; }
  bool contains(const Rational& x, const Rational& y) const;
  /// Same set: coefficients scaled to a unit first nonzero entry.
  bool same_set(const HalfPlane& other) const;
};

struct RegionOptions {
  bool finite_energy = true;
  std::vector<int> z_classes;  // k values of Z^{(k)}_{ᾱ_k}
  bool energy_class = true;
  bool sup_criterion = true;   // ζ_t ≥ ½
  bool lp_criterion = true;    // ζ_t ≥ dζ_x/p
  std::optional<std::array<Rational, 4>> window;  // ζ_x ∈ [w0, w1], ζ_t ∈ [w2, w3]
};

struct RegionVertex {
  Rational zeta_x, zeta_t;
  bool attained = false;   // satisfies the strict constraints too
  bool on_window = false;  // produced by clipping, not by a constraint
};

struct RegionEdge {
  std::size_t from = 0, to = 0;
  std::vector<std::string> labels;  // constraints whose boundary carries the edge
  bool closed = true;
};

struct ExponentRegion {
  int d = 3;
  std::optional<Rational> p;  // empty for p = ∞
  std::vector<HalfPlane> constraints;
  std::vector<HalfPlane> window;
  std::vector<RegionVertex> vertices;  // counterclockwise from the lowest, then leftmost
  std::vector<RegionEdge> edges;
  bool empty = true;
  bool bounded = true;

  /// Direct evaluation of every constraint (and the window).
  bool contains(const Rational& zeta_x, const Rational& zeta_t) const;
  /// Membership through the polygon's edges and their open/closed flags.
  bool polygon_contains(const Rational& zeta_x, const Rational& zeta_t) const;
};

/// Half-planes for dimension d and exponent p (nullopt = ∞), positivity included.
std::vector<HalfPlane> region_constraints(int d, std::optional<Rational> p, const RegionOptions& o);

/// Exact half-plane intersection.  An empty region is a valid result.
ExponentRegion intersect(int d, std::optional<Rational> p, std::vector<HalfPlane> constraints,
                         const std::optional<std::array<Rational, 4>>& window = std::nullopt);

/// Requires d ≥ 2 and p ≥ d.
ExponentRegion admissible_region(int d, std::optional<Rational> p, const RegionOptions& o = {});

void write_region_csv(const ExponentRegion& r, const std::filesystem::path& path);
void write_region_gnuplot(const ExponentRegion& r, const std::filesystem::path& path);
nlohmann::json to_json(const ExponentRegion& r);
nlohmann::json to_json(const SparsenessScales& s);

}  // namespace spns
