#ifndef FLOWERLAB_BODIES_HPP
#define FLOWERLAB_BODIES_HPP

// Star bodies, convex bodies and flowers sampled on a DirectionGrid, and the
// correspondences between them:
//
//   flower_of  K -> F    r_F = h_K
//   core_of    F -> K    h_K = r_F
//   cof        A -> A'   r_{A'} = 1 / r_A
//   polar      K -> K°   K° = conv{theta_i / h_i}
//
// A ConvexBody is identified by its support samples. It also carries radial
// samples of the same polytope, which is either the half-space intersection
// of its support constraints (bodies built from support values) or the hull
// of node points (bodies built by convexification).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flowerlab/error.hpp"
#include "flowerlab/hull.hpp"
#include "flowerlab/spherecore.hpp"

namespace flowerlab {

/// Stand-in for zero support/radial values (e.g. the segment [0, e1]) so
/// that reciprocals stay finite.
inline constexpr double kPositivityFloor = 1e-9;

inline double default_tolerance(const DirectionGrid& grid) { return grid.is_uniform_angle() ? 1e-9 : 1e-6; }

namespace detail {

inline void check_positive(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!(v[i] > 0.0) || !std::isfinite(v[i]))
      throw Error(ErrorKind::InvalidParameter,
                  std::string(what) + " must be finite and strictly positive (index " + std::to_string(i) + ")");
}

inline void check_same_grid(const DirectionGrid& a, const DirectionGrid& b) {
  if (!a.same_as(b)) throw Error(ErrorKind::GridMismatch, "bodies live on different grids");
}

inline std::vector<double> reciprocal(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / v[i];
  return out;
}

}  // namespace detail

class StarBody {
 public:
  StarBody(GridRef grid, std::vector<double> radial) : grid_(std::move(grid)), radial_(std::move(radial)) {
    if (!grid_) throw Error(ErrorKind::InvalidGrid, "null grid");
    if (radial_.size() != grid_->size())
      throw Error(ErrorKind::GridMismatch, "radial length " + std::to_string(radial_.size()) + " != grid size " +
                                               std::to_string(grid_->size()));
    detail::check_positive(radial_, "radial values");
  }

  const GridRef& grid_ref() const noexcept { return grid_; }
  const DirectionGrid& grid() const noexcept { return *grid_; }
  const std::vector<double>& radial() const noexcept { return radial_; }
  int dim() const noexcept { return grid_->dim(); }
  std::size_t size() const noexcept { return radial_.size(); }

  friend bool operator==(const StarBody& a, const StarBody& b) {
    return a.grid_->same_as(*b.grid_) && a.radial_ == b.radial_;
  }

 private:
  GridRef grid_;
  std::vector<double> radial_;
};

struct Certificate {
  bool ok = false;
  /// Largest relative excess of the polar hull over the polar samples.
  double max_violation = 0.0;
  std::size_t worst_index = 0;
};

/// Discrete convexity certificate for samples `values` read as a support
/// function: every polar node point theta_i / values_i must lie on the
/// boundary of the hull of all of them, i.e. every half-space constraint
/// <x, theta_i> <= values_i is active. Equivalently, the 1-homogeneous
/// extension is convex on the sampled cone.
inline Certificate support_consistency(const DirectionGrid& grid, std::span<const double> values, double tol) {
  const auto inv = detail::reciprocal(values);
  const auto hull_r = cloud_radial(grid, inv);
  Certificate c;
  c.ok = true;
  for (std::size_t j = 0; j < values.size(); ++j) {
    const double v = hull_r[j] * values[j] - 1.0;
    if (v > c.max_violation) {
      c.max_violation = v;
      c.worst_index = j;
    }
  }
  c.ok = c.max_violation <= tol;
  return c;
}

class ConvexBody {
 public:
  /// Body with the given support samples; "certified" records whether the
  /// samples pass the discrete support-consistency check. The companion
  /// radial is that of the half-space intersection, which has exactly
  /// these supports on the nodes when certified.
  static ConvexBody from_support(GridRef grid, std::vector<double> support, std::optional<double> tol = {}) {
    detail::check_positive(support, "support values");
    if (support.size() != grid->size()) throw Error(ErrorKind::GridMismatch, "support length does not match grid");
    const double t = tol.value_or(default_tolerance(*grid));
    auto cert = support_consistency(*grid, support, t);
    auto radial = detail::reciprocal(cloud_support(*grid, detail::reciprocal(support)));
    return ConvexBody(std::move(grid), std::move(support), std::move(radial), cert.ok, cert.max_violation);
  }

  /// Body given jointly by support and radial samples of one polytope;
  /// used by operations that compute both exactly.
  static ConvexBody from_samples(GridRef grid, std::vector<double> support, std::vector<double> radial,
                                 std::optional<double> tol = {}) {
    detail::check_positive(support, "support values");
    detail::check_positive(radial, "radial values");
    const double t = tol.value_or(default_tolerance(*grid));
    auto cert = support_consistency(*grid, support, t);
    return ConvexBody(std::move(grid), std::move(support), std::move(radial), cert.ok, cert.max_violation);
  }

  const GridRef& grid_ref() const noexcept { return grid_; }
  const DirectionGrid& grid() const noexcept { return *grid_; }
  const std::vector<double>& support() const noexcept { return support_; }
  const std::vector<double>& radial() const noexcept { return radial_; }
  bool certified() const noexcept { return certified_; }
  double certificate_violation() const noexcept { return violation_; }
  int dim() const noexcept { return grid_->dim(); }
  std::size_t size() const noexcept { return support_.size(); }

  StarBody as_star() const { return StarBody(grid_, radial_); }

  void require_certified(const char* op) const {
    if (!certified_)
      throw Error(ErrorKind::CertificationRequired,
                  std::string(op) + " needs a certified body (violation " + std::to_string(violation_) + ")");
  }

 private:
  ConvexBody(GridRef g, std::vector<double> h, std::vector<double> r, bool ok, double viol)
      : grid_(std::move(g)), support_(std::move(h)), radial_(std::move(r)), certified_(ok), violation_(viol) {}

  GridRef grid_;
  std::vector<double> support_;
  std::vector<double> radial_;
  bool certified_ = false;
  double violation_ = 0.0;
};

inline Certificate is_flower(const StarBody& s, std::optional<double> tol = {}) {
  return support_consistency(s.grid(), s.radial(), tol.value_or(default_tolerance(s.grid())));
}

class Flower {
 public:
  /// Certifies the radial samples; throws not-a-flower on failure.
  static Flower from_radial(StarBody body, std::optional<double> tol = {}) {
    const auto cert = is_flower(body, tol);
    if (!cert.ok)
      throw Error(ErrorKind::NotAFlower, "radial samples fail the flower certificate (violation " +
                                             std::to_string(cert.max_violation) + " at node " +
                                             std::to_string(cert.worst_index) + ")");
    return Flower(std::move(body), std::nullopt);
  }

  /// For operations whose output is a flower by construction (petal unions,
  /// projections); skips the certificate scan.
  static Flower trusted(StarBody body, std::optional<std::vector<Vector>> petals = std::nullopt) {
    return Flower(std::move(body), std::move(petals));
  }

  const StarBody& body() const noexcept { return body_; }
  const std::vector<double>& radial() const noexcept { return body_.radial(); }
  const DirectionGrid& grid() const noexcept { return body_.grid(); }
  const GridRef& grid_ref() const noexcept { return body_.grid_ref(); }
  int dim() const noexcept { return body_.dim(); }
  bool has_petals() const noexcept { return petals_.has_value(); }
  const std::vector<Vector>& petals() const {
    if (!petals_) throw Error(ErrorKind::RepresentationRequired, "flower has no petal list");
    return *petals_;
  }

 private:
  Flower(StarBody b, std::optional<std::vector<Vector>> p) : body_(std::move(b)), petals_(std::move(p)) {}

  StarBody body_;
  std::optional<std::vector<Vector>> petals_;
};

// --- petals ---------------------------------------------------------------

/// Radial function of the petal B_x = B(x/2, |x|/2): the ray t*theta leaves
/// the ball at t = <x, theta> when that is positive.
inline double petal_radial(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& theta) {
  if (x.norm() == 0.0) throw Error(ErrorKind::DegeneratePetal, "petal at the origin");
  return std::max(0.0, x.dot(theta));
}

/// Radial function of a ball B(c, rho) that contains the origin.
inline double ball_radial(const Eigen::Ref<const Vector>& c, double rho, const Eigen::Ref<const Vector>& theta) {
  // Positive root of t^2 - 2 ct t - q = 0. q = (rho - |c|)(rho + |c|) is
  // exactly 0 for petals, where |c| = rho.
  const double ct = c.dot(theta);
  const double cn = c.norm();
  const double q = std::max(0.0, (rho - cn) * (rho + cn));
  const double root = std::sqrt(ct * ct + q);
  if (ct >= 0.0) return ct + root;
  return root - ct > 0.0 ? q / (root - ct) : 0.0;
}

/// max_x <x, theta_j>_+ over the points, floored at kPositivityFloor. This
/// is the support function of conv(points ∪ {0}).
inline std::vector<double> support_of_points(const DirectionGrid& grid, std::span<const Vector> points) {
  std::vector<double> h(grid.size(), 0.0);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    double m = 0.0;
    for (const auto& x : points) m = std::max(m, x.dot(grid.direction(j)));
    h[j] = std::max(m, kPositivityFloor);
  }
  return h;
}

inline Flower flower_from_petals(std::vector<Vector> points, const GridRef& grid) {
  std::vector<Vector> kept;
  for (auto& p : points) {
    if (p.size() != grid->dim()) throw Error(ErrorKind::InvalidParameter, "petal dimension does not match grid");
    if (p.norm() > 0.0) kept.push_back(std::move(p));
  }
  if (kept.empty()) throw Error(ErrorKind::DegenerateFlower, "no nonzero petal points");
  auto r = support_of_points(*grid, kept);
  return Flower::trusted(StarBody(grid, std::move(r)), std::move(kept));
}

// --- correspondences ---------------------------------------------------------

inline Flower flower_of(const ConvexBody& k) {
  k.require_certified("flower_of");
  return Flower::trusted(StarBody(k.grid_ref(), k.support()));
}

inline ConvexBody core_of(const Flower& f, std::optional<double> tol = {}) {
  auto body = ConvexBody::from_support(f.grid_ref(), f.radial(), tol);
  if (!body.certified())
    throw Error(ErrorKind::NotAFlower,
                "flower certificate failed (violation " + std::to_string(body.certificate_violation()) + ")");
  return body;
}

inline StarBody cof(const StarBody& a) { return StarBody(a.grid_ref(), detail::reciprocal(a.radial())); }

/// Support and radial of conv(S ∪ {0}) on the nodes of S's grid, from the
/// node points of S. Inner approximation of the true hull.
inline ConvexBody convexify_support(const StarBody& s) {
  auto h = cloud_support(s.grid(), s.radial());
  auto r = cloud_radial(s.grid(), s.radial());
  return ConvexBody::from_samples(s.grid_ref(), std::move(h), std::move(r));
}

/// The polar of the polytope sampled by (h, r): h_{K°} = 1/r_K and
/// r_{K°} = 1/h_K hold exactly for any convex body containing 0.
inline ConvexBody polar(const ConvexBody& k) {
  k.require_certified("polar");
  auto out = ConvexBody::from_samples(k.grid_ref(), detail::reciprocal(k.radial()), detail::reciprocal(k.support()));
  if (!out.certified())
    throw Error(ErrorKind::CertificationFailed,
                "polar output fails certificate (violation " + std::to_string(out.certificate_violation()) + ")");
  return out;
}

/// Radial samples of the intersection of half-spaces <x, theta_i> <= g_i:
/// min over i with <theta_i, theta_j> > 0 of g_i / <theta_i, theta_j>.
/// Outer approximation of A[g].
inline StarBody radial_of_halfspace_body(std::span<const double> g, const GridRef& grid) {
  if (g.size() != grid->size()) throw Error(ErrorKind::GridMismatch, "constraint length does not match grid");
  detail::check_positive(g, "half-space offsets");
  const auto h = cloud_support(*grid, detail::reciprocal(g));
  std::vector<double> r(h.size());
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (!(h[j] > 0.0))
      throw Error(ErrorKind::UnboundedBody, "no constraint bounds direction " + std::to_string(j));
    r[j] = 1.0 / h[j];
  }
  return StarBody(grid, std::move(r));
}

/// The Alexandrov body A[g] = ∩ H(theta_i, g_i), through the polar:
/// A[g] = (conv{theta_i / g_i})°, so h_{A[g]} = 1 / r_{conv{theta_i/g_i}}.
inline ConvexBody alexandrov(std::span<const double> g, const GridRef& grid) {
  auto r = radial_of_halfspace_body(g, grid).radial();
  const auto dual_r = cloud_radial(*grid, detail::reciprocal(g));
  std::vector<double> h(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) h[j] = std::min(g[j], 1.0 / dual_r[j]);
  return ConvexBody::from_samples(grid, std::move(h), std::move(r));
}

inline double volume(const StarBody& a) {
  const int n = a.dim();
  std::vector<double> p(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) p[i] = std::pow(a.radial()[i], n);
  return unit_ball_volume(n) * quadrature_mean(a.grid(), p);
}

inline double volume(const ConvexBody& k) { return volume(k.as_star()); }
inline double volume(const Flower& f) { return volume(f.body()); }

inline Flower radial_sum(const Flower& a, const Flower& b) {
  detail::check_same_grid(a.grid(), b.grid());
  std::vector<double> r(a.radial().size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.radial()[i] + b.radial()[i];
  std::optional<std::vector<Vector>> petals;
  if (a.has_petals() && b.has_petals()) {
    // core(a) + core(b) = conv((A ∪ 0) + (B ∪ 0)).
    std::vector<Vector> p = a.petals();
    p.insert(p.end(), b.petals().begin(), b.petals().end());
    for (const auto& x : a.petals())
      for (const auto& y : b.petals()) p.push_back(x + y);
    petals = std::move(p);
  }
  return Flower::trusted(StarBody(a.grid_ref(), std::move(r)), std::move(petals));
}

/// Minkowski sum of two petal unions: B_x + B_y = B((x+y)/2, (|x|+|y|)/2),
/// a ball containing the origin, so the sum is the union of these balls.
inline Flower minkowski_sum_2d(const Flower& a, const Flower& b) {
  detail::check_same_grid(a.grid(), b.grid());
  if (a.dim() != 2) throw Error(ErrorKind::UnsupportedDimension, "minkowski_sum_2d needs dim 2");
  if (!a.has_petals() || !b.has_petals())
    throw Error(ErrorKind::RepresentationRequired, "minkowski_sum_2d needs petal lists");
  const auto& grid = a.grid();
  std::vector<double> r(grid.size(), 0.0);
  for (const auto& x : a.petals())
    for (const auto& y : b.petals()) {
      const Vector c = (x + y) / 2.0;
      const double rho = (x.norm() + y.norm()) / 2.0;
      for (std::size_t j = 0; j < grid.size(); ++j) r[j] = std::max(r[j], ball_radial(c, rho, grid.direction(j)));
    }
  for (auto& v : r) v = std::max(v, kPositivityFloor);
  auto f = Flower::from_radial(StarBody(a.grid_ref(), std::move(r)));
  return f;
}

// --- rigid motions -------------------------------------------------------------

/// Radial samples of M·A by resampling r_A at M^T theta_j.
inline StarBody rotate(const StarBody& a, const Rotation& m) {
  const auto& g = a.grid();
  std::vector<double> r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = g.interpolate(a.radial(), m.matrix.transpose() * g.direction(j));
  return StarBody(a.grid_ref(), std::move(r));
}

inline StarBody dilate(const StarBody& a, double t) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidParameter, "dilation factor must be positive");
  std::vector<double> r = a.radial();
  for (auto& v : r) v *= t;
  return StarBody(a.grid_ref(), std::move(r));
}

inline ConvexBody dilate(const ConvexBody& k, double t) {
  if (!(t > 0)) throw Error(ErrorKind::InvalidParameter, "dilation factor must be positive");
  auto h = k.support();
  auto r = k.radial();
  for (auto& v : h) v *= t;
  for (auto& v : r) v *= t;
  return ConvexBody::from_samples(k.grid_ref(), std::move(h), std::move(r));
}

/// Petal points for a flower without a stored list: the vertices of its
/// core polygon (2D), or core boundary points at the nodes.
inline std::vector<Vector> petals_or_synthesize(const Flower& f) {
  if (f.has_petals()) return f.petals();
  std::vector<Vector> pts;
  if (f.grid().is_uniform_angle()) {
    for (const auto& v : halfplane_polygon_2d(f.grid(), f.radial())) pts.emplace_back(Vector(v));
    return pts;
  }
  const auto r = radial_of_halfspace_body(f.radial(), f.grid_ref());
  for (std::size_t j = 0; j < f.grid().size(); ++j) pts.emplace_back(r.radial()[j] * f.grid().direction(j));
  return pts;
}

/// sup_j |log r_a - log r_b|, the working metric between bodies.
inline double log_radial_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "sample lengths differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(std::log(a[i]) - std::log(b[i])));
  return d;
}

inline double max_abs_difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "sample lengths differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// --- common shapes ---------------------------------------------------------------

inline ConvexBody ball(const GridRef& grid, double radius = 1.0) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorKind::InvalidParameter, "ball radius must be positive");
  return ConvexBody::from_samples(grid, std::vector<double>(grid->size(), radius), std::vector<double>(grid->size(), radius));
}

/// Convex body conv(points ∪ {0}) from its exact support samples.
inline ConvexBody body_of_points(const GridRef& grid, std::span<const Vector> points) {
  return ConvexBody::from_support(grid, support_of_points(*grid, points));
}

inline std::vector<Vector> cube_vertices(int dim, double half) {
  std::vector<Vector> v;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vector x(dim);
    for (int i = 0; i < dim; ++i) x[i] = (mask >> i & 1) ? half : -half;
    v.push_back(std::move(x));
  }
  return v;
}

inline std::vector<Vector> cross_polytope_vertices(int dim, double radius = 1.0) {
  std::vector<Vector> v;
  for (int i = 0; i < dim; ++i) {
    v.push_back(Vector::Unit(dim, i) * radius);
    v.push_back(-Vector::Unit(dim, i) * radius);
  }
  return v;
}

inline std::vector<Vector> regular_polygon_vertices(int count, double circumradius, double phase = 0.0) {
  std::vector<Vector> v;
  for (int i = 0; i < count; ++i) {
    const double a = phase + 2.0 * std::numbers::pi * i / count;
    Vector x(2);
    x << circumradius * std::cos(a), circumradius * std::sin(a);
    v.push_back(std::move(x));
  }
  return v;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_BODIES_HPP
