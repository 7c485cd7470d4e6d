#ifndef FLOWERLAB_GEOMETRY2D_HPP
#define FLOWERLAB_GEOMETRY2D_HPP

#include <algorithm>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace flowerlab::geo2 {

using Point = Eigen::Vector2d;

inline double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }
inline double cross(const Point& o, const Point& a, const Point& b) { return cross(a - o, b - o); }

/// Andrew's monotone chain. Returns indices of the strict hull vertices in
/// counter-clockwise order; collinear boundary points are dropped.
inline std::vector<std::size_t> convex_hull(const std::vector<Point>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  if (n < 3) return order;
  std::vector<std::size_t> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(pts[h[k - 2]], pts[h[k - 1]], pts[order[i]]) <= 0) --k;
    h[k++] = order[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(pts[h[k - 2]], pts[h[k - 1]], pts[order[i]]) <= 0) --k;
    h[k++] = order[i];
  }
  h.resize(k - 1);
  return h;
}

/// Distance along the ray t*theta (t > 0) to the line through a, b; the
/// caller guarantees the ray crosses the segment.
inline double ray_segment(const Point& theta, const Point& a, const Point& b) {
  const Point e = b - a;
  return cross(a, e) / cross(theta, e);
}

/// Convex polygon in half-plane form: rows n_k with n_k . x <= b_k.
struct HalfPlanes {
  std::vector<Point> normals;
  std::vector<double> offsets;
};

inline HalfPlanes half_planes(const std::vector<Point>& ccw) {
  HalfPlanes hp;
  const std::size_t n = ccw.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = ccw[i];
    const Point& b = ccw[(i + 1) % n];
    Point nrm(b.y() - a.y(), a.x() - b.x());
    nrm.normalize();
    hp.normals.push_back(nrm);
    hp.offsets.push_back(nrm.dot(a));
  }
  return hp;
}

}  // namespace flowerlab::geo2

#endif  // FLOWERLAB_GEOMETRY2D_HPP
