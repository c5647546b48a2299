#include "spns/corpus.hpp"

#include <cmath>
#include <numbers>

#include "spns/errors.hpp"
#include "spns/random.hpp"
#include "spns/spectral.hpp"

namespace spns {

namespace {

using std::numbers::pi;

// Minimum-image displacement on the periodic box.
double wrap(double x, double L) { return x - L * std::round(x / L); }

Field rescale_sup(const Field& u, double amplitude) {
  const double sup = lp_norm(u, infinity);
  require(sup > 0.0, ErrorKind::degenerate, "corpus field vanished");
  return u.scaled(amplitude / sup);
}

std::array<double, 3> random_centre(const Grid& g, Rng& rng) {
  std::array<double, 3> c{0, 0, 0};
  for (int a = 0; a < g.dim(); ++a) c[a] = rng.uniform(-0.25, 0.25) * g.length();
  return c;
}

}  // namespace

Field vortex_blob(const Grid& g, std::array<double, 3> c, double sigma, double amplitude,
                  int axis) {
  const int d = g.dim();
  require(d >= 2, ErrorKind::invalid_input, "vortex blobs need d >= 2");
  require(sigma > 0.0, ErrorKind::invalid_input, "sigma must be positive");
  const double L = g.length();
  // ψ = A σ √e e^{−r²/2σ²} has |∇ψ| peaking at A on r = σ.
  const double scale = amplitude * sigma * std::sqrt(std::exp(1.0));
  return Field::sample_vector(g, d, [&](const auto& x, std::span<double> out) {
    std::array<double, 3> y{0, 0, 0};
    double r2 = 0.0;
    for (int a = 0; a < d; ++a) {
      y[a] = wrap(x[a] - c[a], L);
      r2 += y[a] * y[a];
    }
    const double w = -scale * std::exp(-r2 / (2 * sigma * sigma)) / (sigma * sigma);
    // ∂_a ψ = w y_a.
    if (d == 2) {
      out[0] = -w * y[1];
      out[1] = w * y[0];
      return;
    }
    // u = ∇ × (ψ e_axis)
    const int i = (axis + 1) % 3, j = (axis + 2) % 3;
    out[axis] = 0.0;
    out[i] = w * y[j];
    out[j] = -w * y[i];
  });
}

namespace {

// Σ a_κ cos(ξ·x + φ_κ) over 0 < |κ| ≤ kmax with 1/|κ|² amplitudes.
Field random_series(const Grid& g, std::uint64_t seed, int kmax, int components) {
  const int d = g.dim();
  Rng rng(seed);
  struct Mode {
    std::array<int, 3> k;
    std::array<double, 3> a;
    double phase;
  };
  std::vector<Mode> modes;
  for (int kx = -kmax; kx <= kmax; ++kx) {
    for (int ky = (d >= 2 ? -kmax : 0); ky <= (d >= 2 ? kmax : 0); ++ky) {
      for (int kz = (d >= 3 ? -kmax : 0); kz <= (d >= 3 ? kmax : 0); ++kz) {
        const int n2 = kx * kx + ky * ky + kz * kz;
        if (n2 == 0 || n2 > kmax * kmax) continue;
        Mode m{{kx, ky, kz}, {0, 0, 0}, rng.uniform(0, 2 * pi)};
        for (int c = 0; c < components; ++c) m.a[c] = rng.uniform(-1, 1) / n2;
        modes.push_back(m);
      }
    }
  }
  const double w = 2 * pi / g.length();
  return Field::sample_vector(g, components, [&](const auto& x, std::span<double> out) {
    for (int c = 0; c < components; ++c) out[c] = 0.0;
    for (const auto& m : modes) {
      const double arg = w * (m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]) + m.phase;
      const double cs = std::cos(arg);
      for (int c = 0; c < components; ++c) out[c] += m.a[c] * cs;
    }
  });
}

}  // namespace

Field random_smooth_velocity(const Grid& g, std::uint64_t seed, int kmax, double amplitude) {
  return rescale_sup(leray_project(random_series(g, seed, kmax, g.dim())), amplitude);
}

Field gaussian_bump(const Grid& g, std::array<double, 3> c, double sigma) {
  const double L = g.length();
  return Field::sample(g, [&](const auto& x) {
    double r2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double y = wrap(x[a] - c[a], L);
      r2 += y * y;
    }
    return std::exp(-r2 / (2 * sigma * sigma));
  });
}

std::vector<CorpusItem> velocity_corpus(const Grid& g, std::uint64_t seed, int count,
                                        double amplitude) {
  Rng rng(seed);
  const double L = g.length();
  const double h = g.spacing();
  std::vector<CorpusItem> out;
  for (int i = 0; i < count; ++i) {
    const int kind = i % 3;
    if (kind == 0) {
      const double sigma = std::max(2 * h, L / std::exp2(rng.integer(3, 5)));
      const int axis = rng.integer(0, 2);
      out.push_back({"vortex", rescale_sup(leray_project(vortex_blob(g, random_centre(g, rng),
                                                                     sigma, 1.0, axis)),
                                           amplitude)});
    } else if (kind == 1) {
      const int blobs = rng.integer(2, 4);
      const double sigma = std::max(2 * h, L / 24);
      Field u = Field::zeros(g, g.dim());
      for (int b = 0; b < blobs; ++b) {
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        u = u.plus(vortex_blob(g, random_centre(g, rng), sigma, sign, rng.integer(0, 2)));
      }
      out.push_back({"vortex_array", rescale_sup(leray_project(u), amplitude)});
    } else {
      out.push_back({"random_smooth",
                     random_smooth_velocity(g, rng.bits(), rng.integer(2, 4), amplitude)});
    }
  }
  return out;
}

std::vector<CorpusItem> scalar_corpus(const Grid& g, std::uint64_t seed, int count) {
  Rng rng(seed);
  const double L = g.length();
  const double h = g.spacing();
  std::vector<CorpusItem> out;
  for (int i = 0; i < count; ++i) {
    const int kind = i % 4;
    if (kind == 0) {
      const double sigma = h * std::exp2(rng.uniform(1.0, 3.5));
      out.push_back({"bump", gaussian_bump(g, random_centre(g, rng), sigma)});
    } else if (kind == 1) {
      // Two bumps half a box apart, so each sits alone in balls of radius < L/4.
      const double sigma = h * std::exp2(rng.uniform(1.0, 2.0));
      auto c = random_centre(g, rng);
      Field f = gaussian_bump(g, c, sigma);
      c[0] += L / 2;
      out.push_back({"bump_pair", f.plus(gaussian_bump(g, c, sigma).scaled(rng.uniform(0.5, 1.0)))});
    } else if (kind == 2) {
      const double radius = h * rng.uniform(2.0, 6.0);
      const double background = rng.uniform(0.0, 0.1);
      const auto c = random_centre(g, rng);
      out.push_back({"ball_indicator", Field::sample(g, [&](const auto& x) {
                       double r2 = 0.0;
                       for (int a = 0; a < g.dim(); ++a) {
                         const double y = wrap(x[a] - c[a], L);
                         r2 += y * y;
                       }
                       return background + (r2 <= radius * radius ? 1.0 : 0.0);
                     })});
    } else {
      // A random smooth field raised to a high power keeps only its largest peaks.
      Field base = rescale_sup(random_series(g, rng.bits(), 4, 1), 1.0);
      std::vector<double> v(base.values().begin(), base.values().end());
      for (double& x : v) x = std::pow(x, 32);
      out.push_back({"peaked_noise", Field(g, 1, std::move(v))});
    }
  }
  return out;
}

}  // namespace spns
