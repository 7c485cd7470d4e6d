#ifndef FLOWERLAB_INVERSION_HPP
#define FLOWERLAB_INVERSION_HPP

// Spherical inversion phi(x) = x / |x|^2 of convex sets that avoid the
// origin, the arcs (x, y) = phi([phi(x), phi(y)]), and the test of whether
// phi(K) is convex.
//
// Two independent tests are run:
//   * arc criterion: for x, y in the in-cone of K the arc (x, y) must stay
//     in the in-cone (for an out-cone, in the cone itself);
//   * direct: a set is convex iff every 2-plane section through 0 is, so
//     invert a dense boundary sample of sections and test convex position.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flowerlab/error.hpp"
#include "flowerlab/geometry2d.hpp"
#include "flowerlab/spherecore.hpp"

namespace flowerlab {

inline Vector invert_point(const Eigen::Ref<const Vector>& x) {
  const double n2 = x.squaredNorm();
  if (!(n2 > 0.0)) throw Error(ErrorKind::Singularity, "inversion of the origin");
  return x / n2;
}

struct Ball {
  Vector center;
  double radius = 0.0;
};

inline Ball invert_ball(const Eigen::Ref<const Vector>& c, double rho) {
  if (!(rho > 0.0)) throw Error(ErrorKind::InvalidParameter, "ball radius must be positive");
  const double p = c.squaredNorm() - rho * rho;
  if (!(p > 0.0)) throw Error(ErrorKind::OriginInside, "ball contains the origin");
  return {c / p, rho / p};
}

/// Points phi((1 - t) phi(x) + t phi(y)) of the arc (x, y).
inline std::vector<Vector> arc_points(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y,
                                      const std::vector<double>& ts) {
  if (x.size() != y.size()) throw Error(ErrorKind::InvalidParameter, "arc endpoints differ in dimension");
  if (x == y) return {Vector(x)};
  const Vector a = invert_point(x);
  const Vector b = invert_point(y);
  // 0 on the chord [a, b] iff a and b point in opposite directions.
  const double cosang = a.dot(b) / (a.norm() * b.norm());
  if (cosang <= -1.0 + 1e-12) throw Error(ErrorKind::ArcThroughInfinity, "arc endpoints lie on opposite rays");
  std::vector<Vector> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) throw Error(ErrorKind::InvalidParameter, "arc parameter outside [0, 1]");
    out.push_back(invert_point((1.0 - t) * a + t * b));
  }
  return out;
}

enum class ConeKind { In, Out };

/// Convex polytope conv(V) with 0 outside, or (kind OutCone) its out-cone
/// outc conv(V) = {s x : s >= 1, x in conv V}. Facets are enumerated for
/// dimensions 2 and 3.
class OffOriginPolytope {
 public:
  enum class Kind { Bounded, OutCone };

  explicit OffOriginPolytope(std::vector<Vector> vertices, Kind kind = Kind::Bounded)
      : vertices_(std::move(vertices)), kind_(kind) {
    if (vertices_.empty()) throw Error(ErrorKind::InvalidParameter, "polytope needs vertices");
    dim_ = static_cast<int>(vertices_.front().size());
    for (const auto& v : vertices_)
      if (v.size() != dim_) throw Error(ErrorKind::InvalidParameter, "vertices differ in dimension");
    if (dim_ == 2) build_facets_2d();
    else if (dim_ == 3) build_facets_3d();
    else throw Error(ErrorKind::UnsupportedDimension, "facet enumeration is implemented for dim 2 and 3");
    // 0 lies outside iff it violates some facet; that facet's inward normal
    // separates.
    double best = 0.0;
    for (std::size_t k = 0; k < normals_.size(); ++k) {
      if (offsets_[k] < best) {
        best = offsets_[k];
        separator_ = -normals_[k];
      }
    }
    if (!(best < -1e-12 * scale_)) throw Error(ErrorKind::OriginInside, "the origin is not strictly outside conv(V)");
  }

  int dim() const noexcept { return dim_; }
  Kind kind() const noexcept { return kind_; }
  const std::vector<Vector>& vertices() const noexcept { return vertices_; }
  const std::vector<Vector>& normals() const noexcept { return normals_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  /// u with min_j <v_j, u> > 0.
  const Vector& separator() const noexcept { return separator_; }
  double scale() const noexcept { return scale_; }

  /// [r_min, r_max] of {t > 0 : t theta in conv V}, with every facet
  /// loosened by `slack`; empty when the ray misses.
  std::optional<std::pair<double, double>> ray_interval(const Eigen::Ref<const Vector>& theta, double slack = 0.0) const {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < normals_.size(); ++k) {
      const double a = normals_[k].dot(theta);
      const double b = offsets_[k] + slack;
      if (a > 0.0) hi = std::min(hi, b / a);
      else if (a < 0.0) lo = std::max(lo, b / a);
      else if (b < 0.0) return std::nullopt;
    }
    if (lo > hi) return std::nullopt;
    return std::make_pair(lo, hi);
  }

  /// Membership in the set itself (conv V, or the out-cone).
  bool contains(const Eigen::Ref<const Vector>& z, double rel_tol = 0.0) const {
    const double nz = z.norm();
    if (nz == 0.0) return false;
    auto iv = ray_interval(z / nz, rel_tol * scale_);
    if (!iv) return false;
    const double up = kind_ == Kind::OutCone ? std::numeric_limits<double>::infinity() : iv->second;
    return nz >= iv->first * (1.0 - rel_tol) && nz <= up * (1.0 + rel_tol);
  }

 private:
  void build_facets_2d() {
    std::vector<geo2::Point> pts;
    for (const auto& v : vertices_) pts.emplace_back(v[0], v[1]);
    const auto h = geo2::convex_hull(pts);
    if (h.size() < 3) throw Error(ErrorKind::InvalidParameter, "polygon is not full-dimensional");
    std::vector<geo2::Point> ccw;
    for (auto i : h) ccw.push_back(pts[i]);
    const auto hp = geo2::half_planes(ccw);
    for (std::size_t k = 0; k < hp.normals.size(); ++k) {
      normals_.push_back(Vector(hp.normals[k]));
      offsets_.push_back(hp.offsets[k]);
    }
    scale_ = 0.0;
    for (const auto& p : ccw) scale_ = std::max(scale_, p.norm());
  }

  void build_facets_3d() {
    const std::size_t n = vertices_.size();
    scale_ = 0.0;
    for (const auto& v : vertices_) scale_ = std::max(scale_, v.norm());
    const double eps = 1e-10 * scale_;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
          Eigen::Vector3d a = vertices_[i], b = vertices_[j], c = vertices_[k];
          Eigen::Vector3d nrm = (b - a).cross(c - a);
          if (nrm.norm() <= 1e-12 * scale_ * scale_) continue;
          nrm.normalize();
          double off = nrm.dot(a);
          bool pos = false, neg = false;
          for (const auto& v : vertices_) {
            const double s = nrm.dot(Eigen::Vector3d(v)) - off;
            pos = pos || s > eps;
            neg = neg || s < -eps;
          }
          if (pos && neg) continue;
          if (pos) {
            nrm = -nrm;
            off = -off;
          }
          bool dup = false;
          for (std::size_t f = 0; f < normals_.size() && !dup; ++f)
            dup = (normals_[f] - Vector(nrm)).norm() < 1e-9 && std::abs(offsets_[f] - off) < eps;
          if (!dup) {
            normals_.push_back(Vector(nrm));
            offsets_.push_back(off);
          }
        }
    if (normals_.size() < 4) throw Error(ErrorKind::InvalidParameter, "polytope is not full-dimensional");
  }

  std::vector<Vector> vertices_;
  Kind kind_;
  int dim_ = 0;
  std::vector<Vector> normals_;
  std::vector<double> offsets_;
  Vector separator_;
  double scale_ = 1.0;
};

/// z in the in-cone ∪_{s<=1} sK or out-cone ∪_{s>=1} sK of the polytope.
inline bool cone_membership(const OffOriginPolytope& k, const Eigen::Ref<const Vector>& z, ConeKind which,
                            double rel_tol = 0.0) {
  const double nz = z.norm();
  if (nz == 0.0) throw Error(ErrorKind::Singularity, "cone membership of the origin");
  auto iv = k.ray_interval(z / nz, rel_tol * k.scale());
  if (!iv) return false;
  const bool unbounded = k.kind() == OffOriginPolytope::Kind::OutCone;
  if (which == ConeKind::In) return unbounded || nz <= iv->second * (1.0 + rel_tol);
  return nz >= iv->first * (1.0 - rel_tol);
}

struct ArcWitness {
  Vector x;
  Vector y;
  double t = 0.0;
  Vector z;  // the arc point outside the cone
};

struct InversionVerdict {
  bool convex = false;
  bool criterion_convex = false;
  bool direct_convex = false;
  double max_depth = 0.0;  // largest relative hull depth in the direct method
  std::optional<ArcWitness> witness;
  int pairs_tested = 0;
  int sections_tested = 0;
};

inline constexpr double kConvexPositionTol = 1e-7;

namespace detail {

// Random point of conv V (Dirichlet weights mixed with vertices and edges,
// so the sample reaches the boundary of the cone).
inline Vector random_point_of(const std::vector<Vector>& v, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
  const double mode = u(rng);
  if (mode < 0.2) return v[pick(rng)];
  if (mode < 0.5) {
    const double s = u(rng);
    return (1.0 - s) * v[pick(rng)] + s * v[pick(rng)];
  }
  std::exponential_distribution<double> e(1.0);
  Vector p = Vector::Zero(v.front().size());
  double tot = 0.0;
  for (const auto& x : v) {
    const double w = e(rng);
    p += w * x;
    tot += w;
  }
  return p / tot;
}

// Largest hull depth of the points not on the hull boundary, relative to the
// cloud's extent.
inline double max_hull_depth(const std::vector<geo2::Point>& pts) {
  if (pts.size() < 4) return 0.0;
  const auto h = geo2::convex_hull(pts);
  if (h.size() < 3) return 0.0;
  std::vector<geo2::Point> ccw;
  for (auto i : h) ccw.push_back(pts[i]);
  const auto hp = geo2::half_planes(ccw);
  double ext = 0.0;
  for (const auto& p : ccw) ext = std::max(ext, (p - ccw.front()).norm());
  double worst = 0.0;
  for (const auto& p : pts) {
    double depth = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < hp.normals.size(); ++k) depth = std::min(depth, hp.offsets[k] - hp.normals[k].dot(p));
    worst = std::max(worst, depth);
  }
  return ext > 0.0 ? worst / ext : 0.0;
}

// Polygon {p : n_k . p <= b_k} by brute-force vertex enumeration.
inline std::vector<geo2::Point> halfplane_intersection(const std::vector<geo2::Point>& n, const std::vector<double>& b,
                                                      double slack) {
  std::vector<geo2::Point> cand;
  for (std::size_t i = 0; i < n.size(); ++i)
    for (std::size_t j = i + 1; j < n.size(); ++j) {
      const double det = geo2::cross(n[i], n[j]);
      if (std::abs(det) < 1e-14) continue;
      const geo2::Point p((b[i] * n[j].y() - b[j] * n[i].y()) / det, (n[i].x() * b[j] - n[j].x() * b[i]) / det);
      bool ok = true;
      for (std::size_t k = 0; k < n.size() && ok; ++k) ok = n[k].dot(p) <= b[k] + slack;
      if (ok) cand.push_back(p);
    }
  if (cand.size() < 3) return {};
  const auto h = geo2::convex_hull(cand);
  std::vector<geo2::Point> out;
  for (auto i : h) out.push_back(cand[i]);
  return out;
}

// Inverted boundary sample of a 2D section polygon `ccw` (0 outside). For
// out-cones only the edges facing the origin contribute, together with the
// two bounding rays (truncated at `far`) and the origin.
inline std::vector<geo2::Point> inverted_section(const std::vector<geo2::Point>& ccw, bool out_cone, int budget,
                                                 double far) {
  const auto hp = geo2::half_planes(ccw);
  const std::size_t m = ccw.size();
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k)
    if (!out_cone || hp.offsets[k] < 0.0) total += (ccw[(k + 1) % m] - ccw[k]).norm();
  std::vector<geo2::Point> img;
  auto push = [&](const geo2::Point& p) { img.push_back(p / p.squaredNorm()); };
  for (std::size_t k = 0; k < m; ++k) {
    if (out_cone && !(hp.offsets[k] < 0.0)) continue;
    const geo2::Point& a = ccw[k];
    const geo2::Point& b = ccw[(k + 1) % m];
    const int cnt = std::max(1, static_cast<int>(std::ceil(budget * (b - a).norm() / total)));
    for (int s = 0; s < cnt; ++s) push(a + (b - a) * (static_cast<double>(s) / cnt));
    push(b);
  }
  if (out_cone) {
    // The cone is bounded by the rays through the angularly extreme
    // vertices.
    geo2::Point c(0.0, 0.0);
    for (const auto& v : ccw) c += v;
    std::size_t lo = 0, hi = 0;
    auto ang = [&](const geo2::Point& v) { return std::atan2(geo2::cross(c, v), c.dot(v)); };
    for (std::size_t k = 1; k < m; ++k) {
      if (ang(ccw[k]) < ang(ccw[lo])) lo = k;
      if (ang(ccw[k]) > ang(ccw[hi])) hi = k;
    }
    for (const auto& e : {ccw[lo], ccw[hi]}) {
      const int cnt = 16;
      for (int s = 1; s <= cnt; ++s) push(e * std::pow(far / e.norm(), static_cast<double>(s) / cnt));
    }
    img.emplace_back(0.0, 0.0);
  }
  return img;
}

}  // namespace detail

struct InversionOptions {
  int samples = 400;          // arc-criterion pairs
  std::uint64_t seed = 0;
  double tol = 1e-6;          // relative membership tolerance for arc points
  int sections = 48;          // 2-plane sections for dim 3
  int boundary_budget = 2048; // boundary points per section
  bool check_agreement = true;
};

inline InversionVerdict is_inversion_convex(const OffOriginPolytope& k, const InversionOptions& opt = {}) {
  if (opt.samples < 100) throw Error(ErrorKind::InvalidParameter, "is_inversion_convex needs samples >= 100");
  Rng rng(derive_seed(opt.seed, 0));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool out_cone = k.kind() == OffOriginPolytope::Kind::OutCone;
  const double far = 1e3 * k.scale();
  InversionVerdict verdict;

  // Arc criterion.
  auto sample_point = [&]() -> Vector {
    for (;;) {
      const Vector p = detail::random_point_of(k.vertices(), rng);
      const double np = p.norm();
      const Vector theta = p / np;
      auto iv = k.ray_interval(theta);
      if (!iv) continue;
      if (out_cone) {
        // points of the cone itself: r_min theta scaled by s >= 1
        const double s = u(rng) < 0.5 ? 1.0 : std::exp(u(rng) * std::log(far / iv->first));
        return iv->first * s * theta;
      }
      const double s = u(rng) < 0.5 ? 1.0 : u(rng);
      return std::max(s, 1e-3) * iv->second * theta;
    }
  };
  std::vector<double> ts;
  for (int i = 1; i < 16; ++i) ts.push_back(i / 16.0);
  verdict.criterion_convex = true;
  for (int pair = 0; pair < opt.samples && verdict.criterion_convex; ++pair) {
    const Vector x = sample_point();
    const Vector y = sample_point();
    ++verdict.pairs_tested;
    if ((x - y).norm() == 0.0) continue;
    const auto arc = arc_points(x, y, ts);
    for (std::size_t i = 0; i < arc.size(); ++i) {
      const bool inside = out_cone ? k.contains(arc[i], opt.tol) : cone_membership(k, arc[i], ConeKind::In, opt.tol);
      if (!inside) {
        verdict.criterion_convex = false;
        verdict.witness = ArcWitness{x, y, ts[i], arc[i]};
        break;
      }
    }
  }

  // Direct method on 2-plane sections through 0.
  std::vector<geo2::Point> n2;
  std::vector<double> b2;
  auto section_polygon = [&](const Matrix& frame) {
    n2.clear();
    b2.clear();
    for (std::size_t f = 0; f < k.normals().size(); ++f) {
      const Eigen::Vector2d nn = frame * k.normals()[f];
      if (nn.norm() < 1e-14) {
        if (k.offsets()[f] < 0.0) return std::vector<geo2::Point>{};
        continue;
      }
      n2.push_back(nn);
      b2.push_back(k.offsets()[f]);
    }
    return detail::halfplane_intersection(n2, b2, 1e-12 * k.scale());
  };
  double worst = 0.0;
  if (k.dim() == 2) {
    std::vector<geo2::Point> ccw;
    for (const auto& v : k.vertices()) ccw.emplace_back(v[0], v[1]);
    const auto h = geo2::convex_hull(ccw);
    std::vector<geo2::Point> poly;
    for (auto i : h) poly.push_back(ccw[i]);
    worst = detail::max_hull_depth(detail::inverted_section(poly, out_cone, opt.boundary_budget, far));
    verdict.sections_tested = 1;
  } else {
    Rng srng(derive_seed(opt.seed, 1));
    std::normal_distribution<double> nd;
    for (int s = 0; s < opt.sections; ++s) {
      const Vector p = detail::random_point_of(k.vertices(), srng);
      Vector e1 = p.normalized();
      Vector g(k.dim());
      for (int i = 0; i < k.dim(); ++i) g[i] = nd(srng);
      Vector e2 = g - g.dot(e1) * e1;
      if (e2.norm() < 1e-12) continue;
      e2.normalize();
      Matrix frame(2, k.dim());
      frame.row(0) = e1.transpose();
      frame.row(1) = e2.transpose();
      const auto poly = section_polygon(frame);
      if (poly.size() < 3) continue;
      ++verdict.sections_tested;
      worst = std::max(worst, detail::max_hull_depth(detail::inverted_section(poly, out_cone, opt.boundary_budget, far)));
    }
  }
  verdict.max_depth = worst;
  verdict.direct_convex = worst <= kConvexPositionTol;
  verdict.convex = verdict.criterion_convex && verdict.direct_convex;
  if (opt.check_agreement && verdict.criterion_convex != verdict.direct_convex)
    throw Error(ErrorKind::Inconsistency, std::string("arc criterion says ") +
                                              (verdict.criterion_convex ? "convex" : "non-convex") +
                                              " but direct test says " + (verdict.direct_convex ? "convex" : "non-convex") +
                                              " (max hull depth " + std::to_string(worst) + ")");
  return verdict;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_INVERSION_HPP
