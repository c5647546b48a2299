#include "spns/sparseness.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spns/errors.hpp"
#include "spns/spectral.hpp"

namespace spns {

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), 1));
}

double Mask::measure() const { return static_cast<double>(count()) * grid.cell_volume(); }

Field Mask::as_field() const {
  std::vector<double> v(bits.begin(), bits.end());
  return Field(grid, 1, std::move(v));
}

void SparsenessParams::validate(double box_length) const {
  require(epsilon > 0.0 && epsilon < 1.0, ErrorKind::invalid_input,
          "epsilon must lie in (0,1), got " + std::to_string(epsilon));
  require(beta > 0.0 && beta < 1.0, ErrorKind::invalid_input,
          "beta must lie in (0,1), got " + std::to_string(beta));
  validate_exponent(p);
  require(ell > 0.0, ErrorKind::invalid_input, "ell must be positive");
  require(ell < box_length / 2, ErrorKind::domain,
          "ell = " + std::to_string(ell) + " must be below half the box length " +
              std::to_string(box_length / 2));
}

Mask superlevel_mask(const Field& f, double lambda) {
  require(lambda >= 0.0, ErrorKind::invalid_input, "threshold must be nonnegative");
  Mask m{f.grid(), std::vector<unsigned char>(f.points(), 0)};
  for (std::size_t i = 0; i < f.points(); ++i) m.bits[i] = f.magnitude(i) > lambda ? 1 : 0;
  return m;
}

Mask discrete_ball(const Grid& grid, double ell) {
  Mask m{grid, std::vector<unsigned char>(grid.size(), 0)};
  const double r2 = ell * ell;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto x = grid.position(i);
    m.bits[i] = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2] <= r2) ? 1 : 0;
  }
  return m;
}

LocalFraction max_local_fraction(const Mask& mask, double ell) {
  const Grid& g = mask.grid;
  require(ell > 0.0 && ell < g.length() / 2, ErrorKind::domain,
          "ball radius must lie in (0, L/2)");
  require(ell >= 2 * g.spacing(), ErrorKind::resolution,
          "ball radius " + std::to_string(ell) + " is below two grid spacings");
  LocalFraction out;
  Mask ball = discrete_ball(g, ell);
  out.ball_count = ball.count();
  const std::size_t N = g.size();
  if (mask.count() == 0) return out;

  std::vector<std::complex<double>> a(N), b(N);
  for (std::size_t i = 0; i < N; ++i) {
    a[i] = mask.bits[i];
    b[i] = ball.bits[i];
  }
  fft_in_place(g, a, -1);
  fft_in_place(g, b, -1);
  // The ball is symmetric, so correlation equals convolution.
  for (std::size_t i = 0; i < N; ++i) a[i] *= b[i];
  fft_in_place(g, a, +1);
  const double inv = 1.0 / static_cast<double>(N);
  for (std::size_t i = 0; i < N; ++i) {
    const auto c = static_cast<std::size_t>(std::llround(a[i].real() * inv));
    if (c > out.max_count) {
      out.max_count = c;
      out.argmax = i;
    }
  }
  out.value = static_cast<double>(out.max_count) / static_cast<double>(out.ball_count);
  return out;
}

namespace {

// Tail fraction evaluator with |u|^p precomputed once.
class TailEvaluator {
 public:
  TailEvaluator(const Field& u, double p) : p_(p), magnitudes_(u.points()) {
    for (std::size_t i = 0; i < u.points(); ++i) magnitudes_[i] = u.magnitude(i);
    peak_ = *std::max_element(magnitudes_.begin(), magnitudes_.end());
    if (!std::isinf(p) && peak_ > 0.0) {
      powers_.resize(magnitudes_.size());
      for (std::size_t i = 0; i < magnitudes_.size(); ++i) {
        powers_[i] = magnitudes_[i] > 0.0 ? std::pow(magnitudes_[i] / peak_, p) : 0.0;
        total_ += powers_[i];
      }
    }
  }

  double peak() const { return peak_; }

  double operator()(double lambda) const {
    if (peak_ == 0.0) return 0.0;
    if (std::isinf(p_)) {
      double m = 0.0;
      for (double v : magnitudes_) {
        if (v <= lambda) m = std::max(m, v);
      }
      return m / peak_;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < magnitudes_.size(); ++i) {
      if (magnitudes_[i] <= lambda) s += powers_[i];
    }
    return std::pow(s / total_, 1.0 / p_);
  }

 private:
  double p_;
  std::vector<double> magnitudes_;
  std::vector<double> powers_;
  double peak_ = 0.0;
  double total_ = 0.0;
};

bool tail_passes(double tail, double beta, TailRule rule) {
  return rule == TailRule::strict ? tail < beta : tail <= beta;
}

}  // namespace

double tail_fraction(const Field& u, double lambda, double p) {
  validate_exponent(p);
  return TailEvaluator(u, p)(lambda);
}

SparsenessCertificate certify(const Field& u, const SparsenessParams& params) {
  params.validate(u.grid().length());
  TailEvaluator tail(u, params.p);
  require(tail.peak() > 0.0, ErrorKind::degenerate,
          "certify: the field is identically zero, no threshold brackets the tail condition");

  // tail(0) = 0 always passes; tail(peak) = 1 never does.  Keep lo passing.
  double lo = 0.0;
  double hi = tail.peak();
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (tail_passes(tail(mid), params.beta, params.tail_rule)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  SparsenessCertificate cert{params, superlevel_mask(u, lo), lo};
  cert.measured_beta = tail(lo);
  cert.measured_epsilon = max_local_fraction(cert.witness, params.ell).value;
  cert.tail_ok = tail_passes(cert.measured_beta, params.beta, params.tail_rule);
  cert.fraction_ok = cert.measured_epsilon <= params.epsilon;
  cert.verdict = cert.tail_ok && cert.fraction_ok;
  return cert;
}

double mu_p(int d, double p) {
  require(p > 2.0, ErrorKind::invalid_input, "mu_p needs p > 2");
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return 1.0 / (d * (0.5 - inv_p));
}

ChebyshevScale chebyshev_scale(const Field& u, double p) {
  require(p > 2.0, ErrorKind::invalid_input,
          "chebyshev_scale needs p > 2 so that mu_p is positive");
  const int d = u.grid().dim();
  const double n2 = lp_norm(u, 2.0);
  const double np = lp_norm(u, p);
  require(n2 > 0.0 && np > 0.0, ErrorKind::degenerate, "chebyshev_scale: zero field");
  ChebyshevScale s;
  s.p = p;
  s.mu_p = mu_p(d, p);
  s.ell0 = std::pow(n2 / np, s.mu_p);
  const double n1 = lp_norm(u, 1.0);
  const double ninf = lp_norm(u, infinity);
  s.naive_ell0 = std::pow(n1 / ninf, 1.0 / d);
  s.naive_superlevel_measure = superlevel_mask(u, 0.5 * ninf).measure();
  s.naive_bound = 2.0 * n1 / ninf;
  s.naive_bound_holds = s.naive_superlevel_measure <= s.naive_bound;
  return s;
}

AprioriCertificate apriori_certificate(const Field& u, double epsilon, double beta, double p) {
  require(p > 2.0, ErrorKind::invalid_input, "apriori_certificate needs p in (2, inf]");
  require(epsilon > 0.0 && epsilon < 1.0 && beta > 0.0 && beta < 1.0, ErrorKind::invalid_input,
          "epsilon and beta must lie in (0,1)");
  const Grid& g = u.grid();
  const int d = g.dim();
  AprioriCertificate out;
  out.scale = chebyshev_scale(u, p);
  const double ell0 = out.scale.ell0;
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  out.b = std::pow(beta, 1.0 / (1.0 - 2.0 * inv_p));
  const double np = lp_norm(u, p);
  out.threshold = out.b * std::pow(ell0, -d * inv_p) * np;
  Mask S = superlevel_mask(u, out.threshold);
  out.set_measure = S.measure();
  out.set_measure_bound = std::pow(ell0, d) / (out.b * out.b);
  std::vector<unsigned char> complement(S.bits.size());
  for (std::size_t i = 0; i < complement.size(); ++i) complement[i] = S.bits[i] ? 0 : 1;
  out.tail_norm = lp_norm_masked(u, p, complement);
  out.tail_bound = std::pow(out.b, 1.0 - 2.0 * inv_p) * np;

  for (double a = 1.0;; a *= 2.0) {
    const double ell = a * ell0;
    require(ell < g.length() / 2, ErrorKind::domain,
            "apriori_certificate: a*ell0 = " + std::to_string(ell) +
                " reached half the box length before the local fraction fell below epsilon");
    if (ell < 2 * g.spacing()) continue;
    const double frac = max_local_fraction(S, ell).value;
    out.tried_a.push_back(a);
    out.tried_fraction.push_back(frac);
    if (frac <= epsilon) {
      out.a = a;
      SparsenessCertificate& c = out.certificate;
      c.params = SparsenessParams{epsilon, beta, ell, p, TailRule::strict};
      c.witness = S;
      c.lambda = out.threshold;
      c.measured_beta = out.tail_norm / np;
      c.measured_epsilon = frac;
      c.tail_ok = c.measured_beta < beta;
      c.fraction_ok = true;
      c.verdict = c.tail_ok;
      return out;
    }
  }
}

NonsparseScale nonsparse_scale(const Field& u, int k, double beta) {
  require(beta > 0.0 && beta < 1.0, ErrorKind::invalid_input, "beta must lie in (0,1)");
  const Grid& g = u.grid();
  Field mk = derivative_tensor_magnitude(u, k);
  Field mk1 = derivative_tensor_magnitude(u, k + 1);
  NonsparseScale out;
  auto vk = mk.values();
  auto it = std::max_element(vk.begin(), vk.end());
  out.sup_k = *it;
  out.argmax = static_cast<std::size_t>(it - vk.begin());
  out.sup_k1 = lp_norm(mk1, infinity);
  require(out.sup_k > 0.0, ErrorKind::degenerate,
          "nonsparse_scale: the derivative field of order " + std::to_string(k) + " vanishes");
  // One more derivative gains at most π/h; below rounding level relative to that, it is zero.
  if (out.sup_k1 <= 1e-12 * out.sup_k * std::numbers::pi / g.spacing()) {
    out.ell = infinity;
    return out;
  }
  out.ell = (1.0 - beta) * out.sup_k / out.sup_k1;
  const double half = 0.5 * out.ell;
  require(half >= 2 * g.spacing(), ErrorKind::resolution,
          "nonsparse_scale: ell/2 = " + std::to_string(half) + " is below two grid spacings");
  require(half < g.length() / 2, ErrorKind::domain, "nonsparse_scale: ell/2 exceeds half the box");

  Mask ball = discrete_ball(g, half);
  const auto centre = g.unflatten(out.argmax);
  const int n = g.n();
  double lowest = infinity;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!ball.bits[i]) continue;
    auto off = g.unflatten(i);
    for (int a = 0; a < g.dim(); ++a) off[a] = (off[a] + centre[a]) % n;
    lowest = std::min(lowest, vk[g.flatten(off)]);
  }
  out.min_in_half_ball = lowest;
  out.fails_at_half = lowest > beta * out.sup_k;
  SparsenessParams params{0.5, beta, half, infinity, TailRule::strict};
  out.epsilon_at_half = certify(mk, params).measured_epsilon;
  return out;
}

nlohmann::json to_json(const SparsenessCertificate& c) {
  const Grid& g = c.witness.grid;
  const double p = c.params.p;
  return {{"epsilon", c.params.epsilon},
          {"beta", c.params.beta},
          {"ell", c.params.ell},
          {"p", std::isinf(p) ? nlohmann::json("inf") : nlohmann::json(p)},
          {"tail_rule", c.params.tail_rule == TailRule::strict ? "strict" : "inclusive"},
          {"lambda", c.lambda},
          {"measured_beta", c.measured_beta},
          {"measured_epsilon", c.measured_epsilon},
          {"witness_measure", c.witness.measure()},
          {"tail_ok", c.tail_ok},
          {"fraction_ok", c.fraction_ok},
          {"verdict", c.verdict},
          {"grid", {{"d", g.dim()}, {"n", g.n()}, {"L", g.length()}}}};
}

}  // namespace spns
