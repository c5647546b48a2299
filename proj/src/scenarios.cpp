#include "spns/scenarios.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include "spns/errors.hpp"
#include "spns/sparseness.hpp"
#include "spns/spectral.hpp"

namespace spns {

using std::numbers::pi;

namespace {
// Mixed int/rational comparisons recurse under C++20's rewritten operators; compare
// against rationals only.
const Rational zero(0);
}  // namespace

std::string to_string(const Rational& r) {
  std::string s = std::to_string(r.numerator());
  if (r.denominator() != 1) s += "/" + std::to_string(r.denominator());
  return s;
}

Rational parse_rational(const std::string& text) {
  auto parse_int = [&](std::string_view v) {
    std::int64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    require(ec == std::errc() && ptr == v.data() + v.size() && !v.empty(), ErrorKind::invalid_input,
            "not a rational number: '" + text + "'");
    return x;
  };
  const std::string_view s(text);
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    const std::int64_t q = parse_int(s.substr(slash + 1));
    require(q != 0, ErrorKind::invalid_input, "zero denominator in '" + text + "'");
    return Rational(parse_int(s.substr(0, slash)), q);
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    const std::string_view frac = s.substr(dot + 1);
    require(frac.size() <= 12, ErrorKind::invalid_input, "too many decimals in '" + text + "'");
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const bool negative = !s.empty() && s[0] == '-';
    const std::string_view whole = s.substr(0, dot);
    const std::int64_t w = whole.empty() || whole == "-" ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return Rational(w) + Rational(negative ? -f : f, scale);
  }
  return Rational(parse_int(s));
}

Rational alpha_k(const Rational& zeta_x, const Rational& zeta_t, int k) {
  require(zeta_x > zero && zeta_t > zero, ErrorKind::invalid_input, "exponents must be positive");
  require(k >= 0, ErrorKind::invalid_input, "k must be nonnegative");
  return zeta_x / (zeta_t + Rational(k) * zeta_x);
}

double alpha_k(double zeta_x, double zeta_t, int k) {
  require(zeta_x > 0 && zeta_t > 0, ErrorKind::invalid_input, "exponents must be positive");
  require(k >= 0, ErrorKind::invalid_input, "k must be nonnegative");
  return zeta_x / (zeta_t + k * zeta_x);
}

Rational alpha_bar(int d, int k) {
  require(d >= 1 && k >= 0, ErrorKind::invalid_input, "need d >= 1 and k >= 0");
  return Rational(1) / (Rational(k) + Rational(d, 2));
}

Rational homogeneity_index(const Rational& alpha, int k) {
  require(alpha > zero, ErrorKind::invalid_input, "alpha must be positive");
  return Rational(k) - Rational(1) / alpha;
}

// ---------------------------------------------------------------------------

void SimilarityAnsatz::evaluate(const std::array<double, 3>& x, double t, std::span<double> out) const {
  require(t < 0.0, ErrorKind::invalid_input, "the ansatz lives at t < 0");
  const double lambda = std::pow(-t, zeta_x);
  const std::array<double, 3> y{x[0] / lambda, x[1] / lambda, x[2] / lambda};
  profile(y, -std::log(-t), out);
  const double amp = std::pow(-t, -zeta_t);
  for (double& v : out) v *= amp;
}

namespace {

// U from a stream function: ∇^⊥ψ in 2-D, ∇ × (ψe₃) in 3-D.  grad(y, s) = ∇ψ.
Profile stream_profile(int d, std::function<std::array<double, 2>(const std::array<double, 3>&, double)> grad) {
  return [d, grad](const std::array<double, 3>& y, double s, std::span<double> out) {
    const auto g = grad(y, s);
    out[0] = -g[1];
    out[1] = g[0];
    if (d == 3) out[2] = 0.0;
  };
}

}  // namespace

SimilarityAnsatz gaussian_ansatz(int d, double zeta_x, double zeta_t, bool time_periodic) {
  require(d == 2 || d == 3, ErrorKind::invalid_input, "profiles are defined for d = 2, 3");
  require(zeta_x > 0 && zeta_t > 0, ErrorKind::invalid_input, "exponents must be positive");
  SimilarityAnsatz a;
  a.zeta_x = zeta_x;
  a.zeta_t = zeta_t;
  a.d = d;
  a.components = d;
  a.period = time_periodic ? 2 * pi : 0.0;
  a.support_radius = 4.0;
  const double phase_rate = time_periodic ? 1.0 : 0.0;
  a.profile = stream_profile(d, [d, phase_rate](const std::array<double, 3>& y, double s) {
    double r2 = y[0] * y[0] + y[1] * y[1];
    if (d == 3) r2 += y[2] * y[2];
    const double e = std::exp(-0.5 * r2);
    const double arg = 2 * y[0] + phase_rate * s;
    const double m = 1.0 + 0.5 * std::cos(arg);
    // ψ = e·m, ∂ψ = −y e m + e ∂m
    return std::array<double, 2>{-y[0] * e * m - e * std::sin(arg), -y[1] * e * m};
  });
  return a;
}

SimilarityAnsatz compact_ansatz(double radius, double zeta_x, double zeta_t) {
  require(radius > 0, ErrorKind::invalid_input, "radius must be positive");
  SimilarityAnsatz a;
  a.zeta_x = zeta_x;
  a.zeta_t = zeta_t;
  a.d = 2;
  a.components = 2;
  a.support_radius = radius;
  a.profile = stream_profile(2, [radius](const std::array<double, 3>& y, double) {
    const double q = 1.0 - (y[0] * y[0] + y[1] * y[1]) / (radius * radius);
    if (q <= 0.0) return std::array<double, 2>{0.0, 0.0};
    // ψ = q⁴, ∇ψ = 4q³ · (−2y/R²)
    const double w = -8.0 * q * q * q / (radius * radius);
    return std::array<double, 2>{w * y[0], w * y[1]};
  });
  return a;
}

SimilarityAnsatz constant_ansatz(int d, double zeta_x, double zeta_t) {
  SimilarityAnsatz a;
  a.zeta_x = zeta_x;
  a.zeta_t = zeta_t;
  a.d = d;
  a.components = d;
  a.support_radius = 1e-3;
  a.profile = [](const std::array<double, 3>&, double, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    out[0] = 1.0;
  };
  return a;
}

Field sample_profile(const SimilarityAnsatz& a, const Grid& grid, double s) {
  require(grid.dim() == a.d, ErrorKind::invalid_input, "grid dimension differs from the profile's");
  return Field::sample_vector(grid, a.components,
                              [&](const auto& y, std::span<double> out) { a.profile(y, s, out); });
}

ProfileBounds profile_bounds(const SimilarityAnsatz& a, const Grid& y_grid, int k) {
  ProfileBounds b;
  b.k = k;
  const int phases = a.period > 0.0 ? 16 : 1;
  b.c_k = infinity;
  const double L = y_grid.length();
  for (int i = 0; i < phases; ++i) {
    const double s = a.period * i / phases;
    const Field m = derivative_tensor_magnitude(sample_profile(a, y_grid, s), k);
    double sup = 0.0, radius = 0.0, edge = 0.0;
    for (std::size_t j = 0; j < y_grid.size(); ++j) {
      const auto x = y_grid.position(j);
      double r2 = 0.0;
      double box = 0.0;
      for (int c = 0; c < y_grid.dim(); ++c) {
        r2 += x[c] * x[c];
        box = std::max(box, std::abs(x[c]));
      }
      const double v = m.values()[j];
      if (v > sup) {
        sup = v;
        radius = std::sqrt(r2);
      }
      if (box >= 0.45 * L) edge = std::max(edge, v);
    }
    b.C_k = std::max(b.C_k, sup);
    b.c_k = std::min(b.c_k, sup);
    b.R_k = std::max(b.R_k, radius + y_grid.spacing());
    b.edge_ratio = std::max(b.edge_ratio, edge);
  }
  b.edge_ratio = b.C_k > 0.0 ? b.edge_ratio / b.C_k : 0.0;
  b.decays = b.edge_ratio <= 1e-3;
  return b;
}

std::vector<Field> build_trajectory(const SimilarityAnsatz& a, const Grid& grid,
                                    const std::vector<double>& times) {
  require(grid.dim() == a.d, ErrorKind::invalid_input, "grid dimension differs from the profile's");
  std::vector<Field> out;
  out.reserve(times.size());
  for (double t : times) {
    require(t < 0.0, ErrorKind::invalid_input, "trajectory times must be negative");
    const double extent = std::pow(-t, a.zeta_x) * a.support_radius;
    require(extent <= grid.length() / 4, ErrorKind::domain,
            "profile support overflows the box at t = " + std::to_string(t) + ": (-t)^zeta_x R = " +
                std::to_string(extent) + " > L/4");
    out.push_back(Field::sample_vector(grid, a.components, [&](const auto& x, std::span<double> v) {
      a.evaluate(x, t, v);
    }));
  }
  return out;
}

double derivative_identity_error(const SimilarityAnsatz& a, const Grid& grid, const Grid& y_grid,
                                 double t, int k) {
  const Field u = build_trajectory(a, grid, {t}).front();
  double worst = 0.0;
  for (int j = 0; j <= k; ++j) {
    const double x_side = lp_norm(derivative_tensor_magnitude(u, j), infinity);
    const double y_side = lp_norm(derivative_tensor_magnitude(sample_profile(a, y_grid, -std::log(-t)), j),
                                  infinity) *
                          std::pow(-t, -(a.zeta_t + j * a.zeta_x));
    worst = std::max(worst, std::abs(x_side - y_side) / y_side);
  }
  return worst;
}

double discrete_self_similarity_error(const SimilarityAnsatz& a, const Grid& grid, double t) {
  require(a.period > 0.0, ErrorKind::invalid_input, "discrete self-similarity needs a periodic profile");
  const double lambda = std::exp(-a.period / 2);
  std::vector<double> u(a.components), v(a.components);
  double worst = 0.0, peak = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto x = grid.position(i);
    a.evaluate(x, t, u);
    a.evaluate({lambda * x[0], lambda * x[1], lambda * x[2]}, lambda * lambda * t, v);
    for (int c = 0; c < a.components; ++c) {
      worst = std::max(worst, std::abs(u[c] - lambda * v[c]));
      peak = std::max(peak, std::abs(u[c]));
    }
  }
  return worst / peak;
}

SparsenessScales sparseness_scales(const Field& u, int k, double epsilon, double beta, int refine) {
  const Grid& g = u.grid();
  SparsenessScales s;
  s.k = k;
  const Field m = derivative_tensor_magnitude(u, k);
  auto try_scale = [&](double ell) {
    return certify(m, SparsenessParams{epsilon, beta, ell, infinity, TailRule::inclusive});
  };
  s.upper = infinity;
  double below = 0.0;
  for (double ell = 2 * g.spacing(); ell < g.length() / 2; ell *= 2) {
    const auto c = try_scale(ell);
    if (c.verdict) {
      s.upper = ell;
      s.upper_epsilon = c.measured_epsilon;
      break;
    }
    below = ell;
  }
  if (std::isfinite(s.upper) && below > 0.0) {
    double lo = below, hi = s.upper;
    for (int i = 0; i < refine; ++i) {
      const double mid = std::sqrt(lo * hi);
      const auto c = try_scale(mid);
      if (c.verdict) {
        hi = mid;
        s.upper_epsilon = c.measured_epsilon;
      } else {
        lo = mid;
      }
    }
    s.upper = hi;
  }
  s.passes_upper = std::isfinite(s.upper);

  NonsparseScale ns;
  try {
    ns = nonsparse_scale(u, k, beta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::resolution) throw;
    s.lower_resolved = false;
    s.lower = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  if (std::isinf(ns.ell)) {
    s.lower = infinity;
    s.fails_lower = true;
    return s;
  }
  s.lower = 0.5 * ns.ell;
  s.lower_epsilon = ns.epsilon_at_half;
  s.fails_lower = ns.fails_at_half && ns.epsilon_at_half > epsilon;
  return s;
}

double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, ErrorKind::invalid_input,
          "fit needs at least two matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    require(x[i] > 0 && y[i] > 0, ErrorKind::invalid_input, "log-log fit needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, ErrorKind::degenerate, "fit needs distinct abscissae");
  return (n * sxy - sx * sy) / den;
}

// ---------------------------------------------------------------------------

bool HalfPlane::contains(const Rational& x, const Rational& y) const {
  const Rational v = value(x, y);
  return strict ? v > zero : v >= zero;
}

namespace {

std::array<Rational, 3> normalised(const HalfPlane& h) {
  Rational lead = h.a != zero ? h.a : h.b != zero ? h.b : h.c;
  if (lead < zero) lead = -lead;
  if (lead == zero) return {zero, zero, zero};
  return {h.a / lead, h.b / lead, h.c / lead};
}

}  // namespace

bool HalfPlane::same_set(const HalfPlane& o) const {
  return strict == o.strict && normalised(*this) == normalised(o);
}

std::vector<HalfPlane> region_constraints(int d, std::optional<Rational> p, const RegionOptions& o) {
  require(d >= 2, ErrorKind::invalid_input, "the exponent region needs d >= 2");
  require(!p || *p >= Rational(d), ErrorKind::invalid_input, "the exponent region needs p >= d");
  const Rational half(1, 2), dh(d, 2);
  std::vector<HalfPlane> hs;
  hs.push_back({"zeta_x > 0", "positive exponents", 1, 0, 0, true});
  hs.push_back({"zeta_t > 0", "positive exponents", 0, 1, 0, true});
  if (o.finite_energy) {
    hs.push_back({"finite kinetic energy", "zeta_t <= (d/2) zeta_x (L2 norm on the shrinking ball bounded)",
                  dh, -1, 0, false});
  }
  for (int k : o.z_classes) {
    // α_k ≥ ᾱ_k ⇔ ζ_x/(ζ_t + kζ_x) ≥ ᾱ_k ⇔ (1/ᾱ_k − k)ζ_x − ζ_t ≥ 0.
    const Rational a = Rational(1) / alpha_bar(d, k) - Rational(k);
    hs.push_back({"Z^(" + std::to_string(k) + ") class", "alpha_k >= alpha_bar_k with alpha_bar_k = 1/(k + d/2)",
                  a, -1, 0, false});
  }
  if (o.energy_class) {
    hs.push_back({"energy class", "zeta_t < (d/2 - 1) zeta_x + 1/2 (gradient in L2 L2)", dh - 1, -1, half,
                  true});
  }
  if (o.sup_criterion) {
    hs.push_back({"sup criterion", "zeta_t >= 1/2 (|u|_inf > c (-t)^(-1/2) at a singularity)", 0, 1, -half,
                  false});
  }
  if (o.lp_criterion && p) {
    hs.push_back({"L^p criterion", "zeta_t >= d zeta_x / p (critical norm bounded below)", -Rational(d) / *p, 1,
                  0, false});
  }
  return hs;
}

namespace {

struct Point {
  Rational x, y;
  bool operator==(const Point& o) const { return x == o.x && y == o.y; }
};

std::optional<Point> meet(const HalfPlane& h1, const HalfPlane& h2) {
  const Rational det = h1.a * h2.b - h2.a * h1.b;
  if (det == zero) return std::nullopt;
  return Point{(h1.b * h2.c - h2.b * h1.c) / det, (h1.c * h2.a - h2.c * h1.a) / det};
}

bool on_line(const HalfPlane& h, const Point& p) { return h.value(p.x, p.y) == zero; }

// Upper half first (by angle from the centroid), exact.
bool angle_less(const Point& c, const Point& p, const Point& q) {
  const Rational px = p.x - c.x, py = p.y - c.y, qx = q.x - c.x, qy = q.y - c.y;
  auto half = [](const Rational& x, const Rational& y) { return y < zero || (y == zero && x < zero) ? 1 : 0; };
  const int hp = half(px, py), hq = half(qx, qy);
  if (hp != hq) return hp < hq;
  return px * qy - py * qx > zero;
}

}  // namespace

ExponentRegion intersect(int d, std::optional<Rational> p, std::vector<HalfPlane> constraints,
                         const std::optional<std::array<Rational, 4>>& window) {
  ExponentRegion r;
  r.d = d;
  r.p = p;
  r.constraints = std::move(constraints);
  // Without a window, a far sentinel box detects unbounded regions.
  const Rational big(1 << 20);
  const std::array<Rational, 4> w = window ? *window : std::array<Rational, 4>{-big, big, -big, big};
  r.window = {{"window", "zeta_x >= min", 1, 0, -w[0], false},
              {"window", "zeta_x <= max", -1, 0, w[1], false},
              {"window", "zeta_t >= min", 0, 1, -w[2], false},
              {"window", "zeta_t <= max", 0, -1, w[3], false}};
  std::vector<HalfPlane> all = r.constraints;
  all.insert(all.end(), r.window.begin(), r.window.end());
  const std::size_t nc = r.constraints.size();

  std::vector<Point> pts;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const auto q = meet(all[i], all[j]);
      if (!q) continue;
      bool inside = true;
      for (const auto& h : all) inside = inside && h.value(q->x, q->y) >= zero;
      if (inside && std::find(pts.begin(), pts.end(), *q) == pts.end()) pts.push_back(*q);
    }
  }
  r.empty = pts.empty();
  if (r.empty) return r;

  Point c{0, 0};
  for (const auto& q : pts) {
    c.x += q.x;
    c.y += q.y;
  }
  c.x /= Rational(static_cast<std::int64_t>(pts.size()));
  c.y /= Rational(static_cast<std::int64_t>(pts.size()));
  std::sort(pts.begin(), pts.end(), [&](const Point& a, const Point& b) { return angle_less(c, a, b); });
  const auto first = std::min_element(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
    return a.y < b.y || (a.y == b.y && a.x < b.x);
  });
  std::rotate(pts.begin(), first, pts.end());

  for (const auto& q : pts) {
    RegionVertex v{q.x, q.y, true, false};
    int hits = 0;
    for (std::size_t i = 0; i < nc; ++i) {
      if (on_line(all[i], q)) {
        ++hits;
        v.attained = v.attained && !all[i].strict;
      }
    }
    // A corner made by two constraints is genuine even if the window passes through it.
    v.on_window = hits < 2 && std::any_of(r.window.begin(), r.window.end(),
                                          [&](const HalfPlane& h) { return on_line(h, q); });
    if (v.on_window && !window) r.bounded = false;
    r.vertices.push_back(v);
  }
  if (pts.size() >= 2) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::size_t j = (i + 1) % pts.size();
      if (pts.size() == 2 && i == 1) break;
      RegionEdge e{i, j, {}, true};
      for (const auto& h : all) {
        if (on_line(h, pts[i]) && on_line(h, pts[j])) {
          e.labels.push_back(h.label);
          e.closed = e.closed && !h.strict;
        }
      }
      r.edges.push_back(e);
    }
  }
  return r;
}

ExponentRegion admissible_region(int d, std::optional<Rational> p, const RegionOptions& o) {
  return intersect(d, p, region_constraints(d, p, o), o.window);
}

bool ExponentRegion::contains(const Rational& x, const Rational& y) const {
  for (const auto& h : constraints) {
    if (!h.contains(x, y)) return false;
  }
  for (const auto& h : window) {
    if (!h.contains(x, y)) return false;
  }
  return true;
}

bool ExponentRegion::polygon_contains(const Rational& x, const Rational& y) const {
  if (empty) return false;
  const Point q{x, y};
  const std::size_t n = vertices.size();
  if (n == 1) return vertices[0].attained && vertices[0].zeta_x == x && vertices[0].zeta_t == y;
  bool on_boundary = false, boundary_ok = true;
  for (const auto& e : edges) {
    const Point a{vertices[e.from].zeta_x, vertices[e.from].zeta_t};
    const Point b{vertices[e.to].zeta_x, vertices[e.to].zeta_t};
    const Rational cross = (b.x - a.x) * (q.y - a.y) - (b.y - a.y) * (q.x - a.x);
    if (n >= 3 && cross < zero) return false;  // counterclockwise: interior on the left
    if (cross == zero) {
      const bool within = std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
                          std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
      if (within) {
        on_boundary = true;
        boundary_ok = boundary_ok && e.closed;
      } else if (n == 2) {
        return false;
      }
    } else if (n == 2) {
      return false;
    }
  }
  // Vertices shared by a closed and an open edge are excluded by the open one.
  for (const auto& v : vertices) {
    if (v.zeta_x == x && v.zeta_t == y) return v.attained;
  }
  return !on_boundary || boundary_ok;
}

void write_region_csv(const ExponentRegion& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << "zeta_x,zeta_t,zeta_x_float,zeta_t_float,attained,on_window\n";
  out.precision(17);
  for (const auto& v : r.vertices) {
    out << to_string(v.zeta_x) << ',' << to_string(v.zeta_t) << ',' << boost::rational_cast<double>(v.zeta_x)
        << ',' << boost::rational_cast<double>(v.zeta_t) << ',' << (v.attained ? 1 : 0) << ','
        << (v.on_window ? 1 : 0) << '\n';
  }
}

void write_region_gnuplot(const ExponentRegion& r, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::io, "cannot write " + path.string());
  out << "# zeta_x zeta_t  (closed polyline of the admissible region, d = " << r.d
      << ", p = " << (r.p ? to_string(*r.p) : "inf") << ")\n";
  out.precision(17);
  for (std::size_t i = 0; i <= r.vertices.size() && !r.vertices.empty(); ++i) {
    const auto& v = r.vertices[i % r.vertices.size()];
    out << boost::rational_cast<double>(v.zeta_x) << ' ' << boost::rational_cast<double>(v.zeta_t) << '\n';
  }
}

nlohmann::json to_json(const ExponentRegion& r) {
  auto plane = [](const HalfPlane& h) {
    return nlohmann::json{{"label", h.label},        {"source", h.source},
                          {"a", to_string(h.a)},     {"b", to_string(h.b)},
                          {"c", to_string(h.c)},     {"strict", h.strict}};
  };
  nlohmann::json cs = nlohmann::json::array(), vs = nlohmann::json::array(), es = nlohmann::json::array();
  for (const auto& h : r.constraints) cs.push_back(plane(h));
  for (const auto& v : r.vertices) {
    vs.push_back({{"zeta_x", to_string(v.zeta_x)},
                  {"zeta_t", to_string(v.zeta_t)},
                  {"zeta_x_float", boost::rational_cast<double>(v.zeta_x)},
                  {"zeta_t_float", boost::rational_cast<double>(v.zeta_t)},
                  {"attained", v.attained},
                  {"on_window", v.on_window}});
  }
  for (const auto& e : r.edges) {
    es.push_back({{"from", e.from}, {"to", e.to}, {"constraints", e.labels}, {"closed", e.closed}});
  }
  return {{"d", r.d},
          {"p", r.p ? nlohmann::json(to_string(*r.p)) : nlohmann::json("inf")},
          {"constraints", cs},
          {"vertices", vs},
          {"edges", es},
          {"empty", r.empty},
          {"bounded", r.bounded}};
}

nlohmann::json to_json(const SparsenessScales& s) {
  auto num = [](double v) {
    if (std::isnan(v)) return nlohmann::json(nullptr);
    return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v);
  };
  return {{"t", s.t},
          {"k", s.k},
          {"upper", num(s.upper)},
          {"lower", num(s.lower)},
          {"upper_epsilon", s.upper_epsilon},
          {"lower_epsilon", s.lower_epsilon},
          {"passes_upper", s.passes_upper},
          {"fails_lower", s.fails_lower},
          {"lower_resolved", s.lower_resolved}};
}

}  // namespace spns
