#include "spns/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

#include "spns/errors.hpp"

namespace spns {
namespace {

// FFTW's planner is not thread-safe; execution of an existing plan on new arrays is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int d, int n, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(d, n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int dims[3] = {n, n, n};
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) total *= n;
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    // UNALIGNED: one plan serves every buffer, so results never depend on where
    // the allocator happened to place the data.
    fftw_plan plan = fftw_plan_dft(d, dims, buf, buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_in_place(const Grid& grid, std::span<std::complex<double>> data, int sign) {
  require(data.size() == grid.size(), ErrorKind::invalid_input, "FFT buffer size mismatch");
  fftw_plan plan = plan_cache().get(grid.dim(), grid.n(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

SpectralField transform(const Field& f) {
  const Grid& g = f.grid();
  const std::size_t N = g.size();
  SpectralField F{g, f.components(), std::vector<std::complex<double>>(f.components() * N)};
  const double scale = 1.0 / static_cast<double>(N);
  for (int c = 0; c < f.components(); ++c) {
    auto src = f.component(c);
    auto dst = F.component(c);
    for (std::size_t i = 0; i < N; ++i) dst[i] = src[i];
    fft_in_place(g, dst, -1);
    for (auto& z : dst) z *= scale;
  }
  return F;
}

Field inverse(const SpectralField& F) {
  const Grid& g = F.grid;
  const std::size_t N = g.size();
  std::vector<double> values(F.components * N);
  std::vector<std::complex<double>> work(N);
  for (int c = 0; c < F.components; ++c) {
    auto src = F.component(c);
    std::copy(src.begin(), src.end(), work.begin());
    fft_in_place(g, work, +1);
    for (std::size_t i = 0; i < N; ++i) values[c * N + i] = work[i].real();
  }
  return Field(g, F.components, std::move(values));
}

void validate_exponent(double p) {
  require(p >= 1.0 && !std::isnan(p), ErrorKind::invalid_input, "Lebesgue exponent must lie in [1, inf]");
}

double lp_norm_of_magnitudes(std::span<const double> magnitudes, double cell_volume, double p) {
  validate_exponent(p);
  double peak = 0.0;
  for (double m : magnitudes) peak = std::max(peak, m);
  if (std::isinf(p) || peak == 0.0) return peak;
  // Scale by the peak so large p cannot overflow.
  double sum = 0.0;
  for (double m : magnitudes) {
    if (m > 0.0) sum += std::pow(m / peak, p);
  }
  return peak * std::pow(sum * cell_volume, 1.0 / p);
}

double lp_norm(const Field& f, double p) {
  std::vector<double> mag(f.points());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = f.magnitude(i);
  return lp_norm_of_magnitudes(mag, f.grid().cell_volume(), p);
}

double lp_norm_masked(const Field& f, double p, std::span<const unsigned char> keep) {
  require(keep.size() == f.points(), ErrorKind::invalid_input, "mask size mismatch");
  std::vector<double> mag(f.points(), 0.0);
  for (std::size_t i = 0; i < mag.size(); ++i) {
    if (keep[i]) mag[i] = f.magnitude(i);
  }
  return lp_norm_of_magnitudes(mag, f.grid().cell_volume(), p);
}

Field apply_multiplier(const Field& f,
                       const std::function<double(const std::array<double, 3>&)>& symbol) {
  SpectralField F = transform(f);
  const Grid& g = f.grid();
  std::vector<double> m(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) m[i] = symbol(g.frequency_vector(i));
  for (int c = 0; c < F.components; ++c) {
    auto block = F.component(c);
    for (std::size_t i = 0; i < g.size(); ++i) block[i] *= m[i];
  }
  return inverse(F);
}

DerivativeResult spectral_derivative(const Field& f, const std::array<int, 3>& multi_index,
                                     double tolerance) {
  const Grid& g = f.grid();
  for (int a = 0; a < 3; ++a) {
    require(multi_index[a] >= 0, ErrorKind::invalid_input, "derivative order must be nonnegative");
    require(a < g.dim() || multi_index[a] == 0, ErrorKind::invalid_input,
            "derivative along an axis the grid does not have");
  }
  SpectralField F = transform(f);
  const int n = g.n();
  const int cutoff = n / 3;
  double total = 0.0;
  double high = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto idx = g.unflatten(i);
    std::complex<double> factor{1.0, 0.0};
    bool high_band = false;
    for (int a = 0; a < g.dim(); ++a) {
      const int order = multi_index[a];
      const int kappa = g.wrapped(idx[a]);
      if (std::abs(kappa) > cutoff) high_band = true;
      if (order == 0) continue;
      if (kappa == -n / 2 && order % 2 == 1) {
        factor = 0.0;
        continue;
      }
      factor *= std::pow(std::complex<double>(0.0, g.frequency(idx[a])), order);
    }
    for (int c = 0; c < F.components; ++c) {
      auto& z = F.coefficients[c * g.size() + i];
      z *= factor;
      const double e = std::norm(z);
      total += e;
      if (high_band) high += e;
    }
  }
  DerivativeResult result{inverse(F), 0.0, false};
  result.high_band_fraction = total > 0.0 ? high / total : 0.0;
  result.nyquist_warning = result.high_band_fraction > tolerance;
  return result;
}

namespace {

void enumerate_multi_indices(int d, int k, int axis, std::array<int, 3>& current,
                             std::vector<std::array<int, 3>>& out) {
  if (axis == d - 1) {
    current[axis] = k;
    out.push_back(current);
    current[axis] = 0;
    return;
  }
  for (int a = 0; a <= k; ++a) {
    current[axis] = a;
    enumerate_multi_indices(d, k - a, axis + 1, current, out);
  }
  current[axis] = 0;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

Field derivative_tensor_magnitude(const Field& f, int k) {
  require(k >= 0, ErrorKind::invalid_input, "derivative order must be nonnegative");
  if (k == 0) return f.magnitude_field();
  const Grid& g = f.grid();
  std::vector<std::array<int, 3>> indices;
  std::array<int, 3> cur{0, 0, 0};
  enumerate_multi_indices(g.dim(), k, 0, cur, indices);
  std::vector<double> sq(g.size(), 0.0);
  for (const auto& alpha : indices) {
    double weight = factorial(k);
    for (int a = 0; a < g.dim(); ++a) weight /= factorial(alpha[a]);
    Field deriv = spectral_derivative(f, alpha).field;
    for (int c = 0; c < deriv.components(); ++c) {
      auto comp = deriv.component(c);
      for (std::size_t i = 0; i < g.size(); ++i) sq[i] += weight * comp[i] * comp[i];
    }
  }
  for (double& v : sq) v = std::sqrt(v);
  return Field(g, 1, std::move(sq));
}

Field divergence(const Field& u) {
  const Grid& g = u.grid();
  require(u.components() == g.dim(), ErrorKind::invalid_input,
          "divergence needs a d-component field");
  SpectralField U = transform(u);
  SpectralField D{g, 1, std::vector<std::complex<double>>(g.size())};
  const std::complex<double> I{0.0, 1.0};
  for (std::size_t i = 0; i < g.size(); ++i) {
    auto xi = g.derivative_frequency_vector(i);
    std::complex<double> s = 0.0;
    for (int c = 0; c < g.dim(); ++c) s += I * xi[c] * U.coefficients[c * g.size() + i];
    D.coefficients[i] = s;
  }
  return inverse(D);
}

Field curl(const Field& u) {
  const Grid& g = u.grid();
  require(u.components() == g.dim() && g.dim() >= 2, ErrorKind::invalid_input,
          "curl needs a d-component field with d >= 2");
  SpectralField U = transform(u);
  const std::size_t N = g.size();
  const std::complex<double> I{0.0, 1.0};
  const int out_components = g.dim() == 2 ? 1 : 3;
  SpectralField W{g, out_components, std::vector<std::complex<double>>(out_components * N)};
  for (std::size_t i = 0; i < N; ++i) {
    auto xi = g.derivative_frequency_vector(i);
    auto u_hat = [&](int c) { return U.coefficients[c * N + i]; };
    if (g.dim() == 2) {
      W.coefficients[i] = I * xi[0] * u_hat(1) - I * xi[1] * u_hat(0);
    } else {
      W.coefficients[i] = I * xi[1] * u_hat(2) - I * xi[2] * u_hat(1);
      W.coefficients[N + i] = I * xi[2] * u_hat(0) - I * xi[0] * u_hat(2);
      W.coefficients[2 * N + i] = I * xi[0] * u_hat(1) - I * xi[1] * u_hat(0);
    }
  }
  return inverse(W);
}

void leray_project_in_place(const Grid& g, std::span<std::complex<double>> coefficients) {
  const std::size_t N = g.size();
  const int d = g.dim();
  require(coefficients.size() == d * N, ErrorKind::invalid_input,
          "Leray projection needs a d-component spectrum");
  for (std::size_t i = 0; i < N; ++i) {
    auto xi = g.derivative_frequency_vector(i);
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (k2 == 0.0) continue;
    std::complex<double> dot = 0.0;
    for (int c = 0; c < d; ++c) dot += xi[c] * coefficients[c * N + i];
    for (int c = 0; c < d; ++c) coefficients[c * N + i] -= xi[c] * dot / k2;
  }
}

Field leray_project(const Field& u) {
  require(u.components() == u.grid().dim(), ErrorKind::invalid_input,
          "Leray projection needs a d-component field");
  SpectralField U = transform(u);
  leray_project_in_place(u.grid(), U.coefficients);
  return inverse(U);
}

double inner_product(const Field& f, const Field& g) {
  require(f.grid() == g.grid() && f.components() == g.components(), ErrorKind::invalid_input,
          "inner product of fields with different shapes");
  double s = 0.0;
  auto a = f.values();
  auto b = g.values();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s * f.grid().cell_volume();
}

}  // namespace spns
