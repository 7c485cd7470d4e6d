#ifndef FLOWERLAB_TESTS_SUPPORT_HPP
#define FLOWERLAB_TESTS_SUPPORT_HPP

// Shared fixtures: random bodies and independent brute-force oracles.

#include <cmath>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "flowerlab/bodies.hpp"
#include "flowerlab/geometry2d.hpp"
#include "flowerlab/inversion.hpp"

namespace flowerlab::testing {

/// Star body r = exp(sum of low Fourier modes) on a uniform grid.
inline StarBody random_star(const GridRef& grid, Rng& rng, double amplitude = 0.4, int modes = 6) {
  std::normal_distribution<double> nd;
  std::vector<double> a(static_cast<std::size_t>(modes)), b(static_cast<std::size_t>(modes));
  for (int k = 0; k < modes; ++k) {
    a[static_cast<std::size_t>(k)] = nd(rng) * amplitude / (k + 1);
    b[static_cast<std::size_t>(k)] = nd(rng) * amplitude / (k + 1);
  }
  const double scale = std::exp(0.3 * nd(rng));
  std::vector<double> r(grid->size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double t = grid->angle(i);
    double s = 0.0;
    for (int k = 0; k < modes; ++k)
      s += a[static_cast<std::size_t>(k)] * std::cos((k + 1) * t) + b[static_cast<std::size_t>(k)] * std::sin((k + 1) * t);
    r[i] = scale * std::exp(s);
  }
  return StarBody(grid, std::move(r));
}

/// Certified convex body: hull of a random star body.
inline ConvexBody random_body(const GridRef& grid, Rng& rng, double amplitude = 0.4) {
  return convexify_support(random_star(grid, rng, amplitude));
}

/// Ellipse with semi-axes a, b rotated by phi, containing 0 in its interior
/// when |shift| is small.
inline ConvexBody ellipse(const GridRef& grid, double a, double b, double phi = 0.0, double shift = 0.0) {
  std::vector<double> h(grid->size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto d = grid->direction(i);
    const double u = std::cos(phi) * d[0] + std::sin(phi) * d[1];
    const double v = -std::sin(phi) * d[0] + std::cos(phi) * d[1];
    h[i] = std::hypot(a * u, b * v) + shift * d[0];
  }
  return ConvexBody::from_support(grid, std::move(h));
}

inline ConvexBody random_ellipse(const GridRef& grid, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = 0.5 + 1.5 * u(rng);
  const double b = 0.5 + 1.5 * u(rng);
  return ellipse(grid, a, b, 3.1 * u(rng), 0.3 * std::min(a, b) * (u(rng) - 0.5));
}

/// max_i r_i <theta_i, theta_j>_+ by a direct double loop.
inline std::vector<double> brute_cloud_support(const DirectionGrid& grid, const std::vector<double>& r) {
  std::vector<double> h(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j)
    for (std::size_t i = 0; i < grid.size(); ++i)
      h[j] = std::max(h[j], r[i] * grid.direction(i).dot(grid.direction(j)));
  return h;
}

/// Radial of the convex polygon `ccw` (containing 0) at direction theta, by
/// intersecting the ray with every edge.
inline double polygon_radial(const std::vector<geo2::Point>& ccw, const geo2::Point& theta) {
  double best = 0.0;
  for (std::size_t k = 0; k < ccw.size(); ++k) {
    const geo2::Point& a = ccw[k];
    const geo2::Point& b = ccw[(k + 1) % ccw.size()];
    const geo2::Point e = b - a;
    const double den = geo2::cross(theta, e);
    if (std::abs(den) < 1e-300) continue;
    const double t = geo2::cross(a, e) / den;
    const double s = geo2::cross(a, theta) / den;
    if (t > 0 && s >= -1e-12 && s <= 1 + 1e-12) best = std::max(best, t);
  }
  return best;
}

/// Sutherland-Hodgman clip of a polygon by <x, n> <= c.
inline std::vector<geo2::Point> clip(const std::vector<geo2::Point>& poly, const geo2::Point& n, double c) {
  std::vector<geo2::Point> out;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const geo2::Point& p = poly[k];
    const geo2::Point& q = poly[(k + 1) % poly.size()];
    const double fp = n.dot(p) - c, fq = n.dot(q) - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) out.push_back(p + (q - p) * (fp / (fp - fq)));
  }
  return out;
}

/// Polygon ∩_i {<x, theta_i> <= g_i}, clipped out of a large square.
inline std::vector<geo2::Point> halfspace_polygon_oracle(const DirectionGrid& grid, const std::vector<double>& g) {
  double big = 0.0;
  for (double v : g) big = std::max(big, v);
  big *= 100.0;
  std::vector<geo2::Point> poly = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (std::size_t i = 0; i < grid.size(); ++i) poly = clip(poly, grid.direction(i), g[i]);
  return poly;
}

inline double polygon_support(const std::vector<geo2::Point>& poly, const geo2::Point& theta) {
  double h = -1e300;
  for (const auto& p : poly) h = std::max(h, p.dot(theta));
  return h;
}

/// Regular `sides`-gon inscribed in the circle B(c, rho).
inline std::vector<Vector> circle_polygon(const Vector& c, double rho, int sides) {
  std::vector<Vector> v;
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * std::numbers::pi * i / sides;
    Vector x = c;
    x[0] += rho * std::cos(a);
    x[1] += rho * std::sin(a);
    v.push_back(std::move(x));
  }
  return v;
}

/// [-1, 1] x [1 - half, 1 + half]: the thin slab around the segment on y = 1.
inline std::vector<Vector> slab(double half) {
  std::vector<Vector> v;
  for (auto [x, y] : {std::pair{-1.0, 1 - half}, {1.0, 1 - half}, {1.0, 1 + half}, {-1.0, 1 + half}}) {
    Vector p(2);
    p << x, y;
    v.push_back(std::move(p));
  }
  return v;
}

/// Random points in the unit ball around c = (2 + 2u) e_1, so 0 is outside.
inline std::vector<Vector> random_off_origin_points(int dim, int count, Rng& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector c = Vector::Zero(dim);
  c[0] = 2.0 + 2.0 * u(rng);
  std::vector<Vector> v;
  for (int j = 0; j < count; ++j) {
    Vector p(dim);
    for (int i = 0; i < dim; ++i) p[i] = nd(rng);
    v.push_back(c + p.normalized() * u(rng));
  }
  return v;
}

/// Least-squares sphere through points: |p|^2 = 2<c, p> + (rho^2 - |c|^2).
/// Returns (center, radius, max residual | |p - c| - rho |).
inline std::tuple<Vector, double, double> fit_sphere(const std::vector<Vector>& pts) {
  const int d = static_cast<int>(pts.front().size());
  Matrix a(static_cast<Eigen::Index>(pts.size()), d + 1);
  Vector b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    a.row(r).head(d) = 2.0 * pts[i].transpose();
    a(r, d) = 1.0;
    b[r] = pts[i].squaredNorm();
  }
  const Vector x = a.colPivHouseholderQr().solve(b);
  const Vector c = x.head(d);
  const double rho = std::sqrt(x[d] + c.squaredNorm());
  double res = 0.0;
  for (const auto& p : pts) res = std::max(res, std::abs((p - c).norm() - rho));
  return {c, rho, res};
}

/// Symmetric 2D petal list: `pairs` pairs ±x with |x| = 1 + spread * N(0, 1)
/// at uniform random angles; pairs shorter than 0.1 are dropped.
inline std::vector<Vector> random_symmetric_petals(int pairs, double spread, Rng& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vector> p;
  for (int j = 0; j < pairs; ++j) {
    const double a = 2.0 * std::numbers::pi * u(rng);
    Vector x(2);
    x << std::cos(a), std::sin(a);
    x *= 1.0 + spread * nd(rng);
    if (x.norm() < 0.1) continue;
    p.push_back(x);
    p.push_back(-x);
  }
  return p;
}

}  // namespace flowerlab::testing

#endif  // FLOWERLAB_TESTS_SUPPORT_HPP
