#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spns/field.hpp"

namespace spns {

/// Divergence-free velocity of a Gaussian vortex centred at c (core radius σ, peak
/// speed ≈ amplitude).  d = 2 uses ∇^⊥ψ, d = 3 the curl of (0, 0, ψ) tilted by `axis`.
Field vortex_blob(const Grid& g, std::array<double, 3> centre, double sigma, double amplitude,
                  int axis = 2);

/// Leray-projected random Fourier series with |κ| ≤ kmax, rescaled to ‖u‖_∞ = amplitude.
Field random_smooth_velocity(const Grid& g, std::uint64_t seed, int kmax, double amplitude);

/// Scalar Gaussian bump e^{−|x−c|²/(2σ²)}.
Field gaussian_bump(const Grid& g, std::array<double, 3> centre, double sigma);

struct CorpusItem {
  std::string name;
  Field field;
};

/// Seeded, reproducible set of divergence-free velocities on g: single vortices of
/// several widths, vortex arrays and random smooth fields, all with ‖u‖_∞ = amplitude.
std::vector<CorpusItem> velocity_corpus(const Grid& g, std::uint64_t seed, int count,
                                        double amplitude);

/// Seeded, nonnegative scalar corpus for the lemma checks: bumps of widths 2h to 11h,
/// separated bump pairs, small balls on a faint background, and peaked noise.
std::vector<CorpusItem> scalar_corpus(const Grid& g, std::uint64_t seed, int count);

}  // namespace spns
