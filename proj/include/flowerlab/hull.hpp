#ifndef FLOWERLAB_HULL_HPP
#define FLOWERLAB_HULL_HPP

// The two closed-form scans every body operation reduces to. Given radial
// samples r_i of a star body on a grid, the node points r_i * theta_i and
// the origin span a polytope Q:
//
//   cloud_support(r)_j = h_Q(theta_j) = max_i r_i <theta_i, theta_j>_+
//   cloud_radial(r)_j  = r_Q(theta_j)
//
// On uniform circle grids both are computed from the 2D hull in
// O(N log N); otherwise the support is a direct scan and the radial comes
// from a ray/hull linear program per node.

#include <algorithm>
#include <span>
#include <vector>

#include "flowerlab/detail/simplex.hpp"
#include "flowerlab/geometry2d.hpp"
#include "flowerlab/spherecore.hpp"

namespace flowerlab {

namespace detail {

inline std::vector<geo2::Point> node_points_2d(const DirectionGrid& grid, std::span<const double> r) {
  std::vector<geo2::Point> pts(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = r[i] * grid.direction(i);
  return pts;
}

/// Hull vertex node indices sorted by index (= by angle on a uniform grid).
inline std::vector<std::size_t> hull_nodes_2d(const std::vector<geo2::Point>& pts) {
  auto h = geo2::convex_hull(pts);
  std::sort(h.begin(), h.end());
  return h;
}

inline std::vector<double> cloud_support_2d(const DirectionGrid& grid, std::span<const double> r) {
  const auto pts = node_points_2d(grid, r);
  const auto hull = hull_nodes_2d(pts);
  const std::size_t nh = hull.size();
  std::vector<double> h(grid.size());
  auto dot = [&](std::size_t k, std::size_t j) { return pts[hull[k % nh]].dot(grid.direction(j)); };
  std::size_t k = 0;
  for (std::size_t c = 1; c < nh; ++c)
    if (dot(c, 0) > dot(k, 0)) k = c;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    for (std::size_t steps = 0; steps < nh && dot(k + 1, j) > dot(k, j); ++steps) k = (k + 1) % nh;
    h[j] = std::max(0.0, dot(k, j));
  }
  return h;
}

inline std::vector<double> cloud_radial_2d(const DirectionGrid& grid, std::span<const double> r) {
  const auto pts = node_points_2d(grid, r);
  const auto hull = hull_nodes_2d(pts);
  const std::size_t nh = hull.size();
  std::vector<double> out(grid.size());
  // Walk the nodes once; `k` is the last hull vertex at or before node j.
  std::size_t k = nh - 1;  // vertex preceding node 0 cyclically
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (k + 1 < nh && hull[k + 1] == j) k = k + 1;
    else if (k == nh - 1 && hull[0] == j) k = 0;
    if (hull[k] == j) {
      out[j] = r[j];
      continue;
    }
    const geo2::Point& a = pts[hull[k]];
    const geo2::Point& b = pts[hull[(k + 1) % nh]];
    out[j] = geo2::ray_segment(grid.direction(j), a, b);
  }
  return out;
}

}  // namespace detail

inline std::vector<double> cloud_support(const DirectionGrid& grid, std::span<const double> r) {
  if (r.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "radial samples do not match grid");
  if (grid.is_uniform_angle()) return detail::cloud_support_2d(grid, r);
  const auto& d = grid.directions();
  Matrix pts = d;
  for (std::size_t i = 0; i < grid.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) *= r[i];
  std::vector<double> h(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double m = (pts.transpose() * d.col(static_cast<Eigen::Index>(j))).maxCoeff();
    h[j] = std::max(0.0, m);
  }
  return h;
}

inline std::vector<double> cloud_radial(const DirectionGrid& grid, std::span<const double> r) {
  if (r.size() != grid.size()) throw Error(ErrorKind::GridMismatch, "radial samples do not match grid");
  if (grid.is_uniform_angle()) return detail::cloud_radial_2d(grid, r);
  Matrix pts = grid.directions();
  for (std::size_t i = 0; i < grid.size(); ++i) pts.col(static_cast<Eigen::Index>(i)) *= r[i];
  std::vector<double> out(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double t = detail::ray_exit_distance(pts, grid.direction(j));
    out[j] = std::max(t, r[j]);
  }
  return out;
}

/// Vertices (as points) of the polygon cut out by the half-planes
/// <x, theta_i> <= g_i on a uniform circle grid; counter-clockwise.
inline std::vector<geo2::Point> halfplane_polygon_2d(const DirectionGrid& grid, std::span<const double> g) {
  // The dual polygon conv{theta_i / g_i}: each of its edges (q_a, q_b) gives
  // the primal vertex x with <x, q_a> = <x, q_b> = 1.
  std::vector<double> inv(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) inv[i] = 1.0 / g[i];
  const auto pts = detail::node_points_2d(grid, inv);
  const auto hull = detail::hull_nodes_2d(pts);
  std::vector<geo2::Point> verts;
  const std::size_t nh = hull.size();
  for (std::size_t k = 0; k < nh; ++k) {
    const geo2::Point& a = pts[hull[k]];
    const geo2::Point& b = pts[hull[(k + 1) % nh]];
    const double det = geo2::cross(a, b);
    verts.emplace_back((b.y() - a.y()) / det, (a.x() - b.x()) / det);
  }
  // Nearly collinear dual points (flat pieces of the dual boundary) give
  // clusters of coincident primal vertices; keep one per cluster.
  double scale = 0.0;
  for (const auto& v : verts) scale = std::max(scale, v.norm());
  std::vector<geo2::Point> merged;
  for (const auto& v : verts)
    if (merged.empty() || (v - merged.back()).norm() > 1e-9 * scale) merged.push_back(v);
  while (merged.size() > 1 && (merged.front() - merged.back()).norm() <= 1e-9 * scale) merged.pop_back();
  return merged;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_HULL_HPP
