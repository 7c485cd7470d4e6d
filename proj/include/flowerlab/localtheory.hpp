#ifndef FLOWERLAB_LOCALTHEORY_HPP
#define FLOWERLAB_LOCALTHEORY_HPP

// Geometric distance between origin-symmetric star bodies, projections and
// sections of flowers, and the Dvoretzky-type experiments built on them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "flowerlab/bodies.hpp"
#include "flowerlab/hull.hpp"

namespace flowerlab {

struct DistanceReport {
  double value = 1.0;
  Vector argmax_direction;
  Vector argmin_direction;
};

/// Largest relative gap |r(theta) - r(-theta)| / r(theta) over nodes that
/// have an antipode on the grid.
inline double symmetry_defect(const StarBody& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto j = a.grid().antipode(i);
    if (!j) continue;
    worst = std::max(worst, std::abs(a.radial()[i] - a.radial()[*j]) / a.radial()[i]);
  }
  return worst;
}

/// d(A, B) = max r_A / min r_A; the ball is scaled optimally.
inline DistanceReport distance_to_ball(const StarBody& a, double symmetry_tol = 1e-6) {
  const auto& r = a.radial();
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (*lo <= kPositivityFloor) throw Error(ErrorKind::UnboundedDistance, "radial function vanishes somewhere");
  const double defect = symmetry_defect(a);
  if (defect > symmetry_tol)
    throw Error(ErrorKind::Symmetry, "body is not origin-symmetric (relative defect " + std::to_string(defect) + ")");
  DistanceReport d;
  d.value = *hi / *lo;
  d.argmax_direction = a.grid().direction(static_cast<std::size_t>(hi - r.begin()));
  d.argmin_direction = a.grid().direction(static_cast<std::size_t>(lo - r.begin()));
  return d;
}

/// d(A, B) = (max r_A / r_B)(max r_B / r_A) on the common grid.
inline DistanceReport distance(const StarBody& a, const StarBody& b) {
  detail::check_same_grid(a.grid(), b.grid());
  double up = 0.0, down = 0.0;
  std::size_t iu = 0, id = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double q = a.radial()[i] / b.radial()[i];
    if (q > up) up = q, iu = i;
    if (1.0 / q > down) down = 1.0 / q, id = i;
  }
  return {up * down, a.grid().direction(iu), a.grid().direction(id)};
}

/// P_E F as a flower in E: the union of the balls P_E B_x = B(P_E x / 2, |x| / 2).
inline Flower project_flower(const Flower& f, const SubspaceBasis& e, const GridRef& grid_e) {
  if (!f.has_petals()) throw Error(ErrorKind::RepresentationRequired, "projection needs a petal list");
  if (e.ambient_dim != f.dim() || grid_e->dim() != e.k())
    throw Error(ErrorKind::InvalidParameter, "subspace and grid dimensions do not match the flower");
  std::vector<Vector> centers;
  std::vector<double> radii;
  for (const auto& x : f.petals()) {
    centers.push_back(e.coordinates(x) / 2.0);
    radii.push_back(x.norm() / 2.0);
  }
  std::vector<double> r(grid_e->size(), 0.0);
  for (std::size_t j = 0; j < grid_e->size(); ++j) {
    const auto u = grid_e->direction(j);
    for (std::size_t p = 0; p < centers.size(); ++p) r[j] = std::max(r[j], ball_radial(centers[p], radii[p], u));
    r[j] = std::max(r[j], kPositivityFloor);
  }
  return Flower::trusted(StarBody(grid_e, std::move(r)));
}

/// F ∩ E: petal formula when petals are known, grid interpolation otherwise.
inline Flower section_flower(const Flower& f, const SubspaceBasis& e, const GridRef& grid_e) {
  if (e.ambient_dim != f.dim() || grid_e->dim() != e.k())
    throw Error(ErrorKind::InvalidParameter, "subspace and grid dimensions do not match the flower");
  std::vector<double> r(grid_e->size());
  for (std::size_t j = 0; j < grid_e->size(); ++j) {
    const Vector theta = e.embed(grid_e->direction(j));
    double v = 0.0;
    if (f.has_petals()) {
      for (const auto& x : f.petals()) v = std::max(v, x.dot(theta));
    } else {
      v = f.grid().interpolate(f.radial(), theta);
    }
    r[j] = std::max(v, kPositivityFloor);
  }
  return Flower::trusted(StarBody(grid_e, std::move(r)));
}

struct StabilityReport {
  double epsilon = 0.0;        // d(conv F, B) - 1
  double flower_distance = 1.0;  // d(F, B)
  double hull_distance = 1.0;    // d(conv F, B)
  double bound = 1.0;            // 1 + 3 sqrt(epsilon)
  bool asserted = false;         // epsilon < 1/10
  bool holds = true;
};

inline StabilityReport stability_check(const Flower& f) {
  StabilityReport s;
  const StarBody hull(f.grid_ref(), cloud_radial(f.grid(), f.radial()));
  s.hull_distance = distance_to_ball(hull).value;
  s.flower_distance = distance_to_ball(f.body()).value;
  s.epsilon = s.hull_distance - 1.0;
  s.bound = 1.0 + 3.0 * std::sqrt(s.epsilon);
  s.asserted = s.epsilon < 0.1;
  s.holds = !s.asserted || s.flower_distance <= s.bound;
  return s;
}

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw Error(ErrorKind::InvalidParameter, "quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const auto j = std::min(i + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(i);
  // Infinite entries (uncovered directions) sort last; avoid inf - inf.
  if (!std::isfinite(v[j])) return frac > 0.0 ? v[j] : v[i];
  return v[i] + frac * (v[j] - v[i]);
}

struct DvoretzkyTrial {
  int trial = 0;
  std::uint64_t seed = 0;
  double projection_distance = 1.0;
  double section_distance = 1.0;
};

struct DvoretzkyResult {
  SubspaceBasis best;
  double best_distance = std::numeric_limits<double>::infinity();
  std::vector<DvoretzkyTrial> trials;

  std::vector<double> projection_distances() const {
    std::vector<double> v;
    for (const auto& t : trials) v.push_back(t.projection_distance);
    return v;
  }
  std::vector<double> section_distances() const {
    std::vector<double> v;
    for (const auto& t : trials) v.push_back(t.section_distance);
    return v;
  }
};

/// Random k-subspaces E; for each, d(P_E F, B_E) and d(F ∩ E, B_E) on a
/// common grid of `grid_size` directions in E coordinates.
inline DvoretzkyResult dvoretzky_search(const Flower& f, int k, int trials, std::uint64_t seed, int grid_size = 4096) {
  if (k < 1 || k > f.dim()) throw Error(ErrorKind::InvalidParameter, "k must satisfy 1 <= k <= dim");
  if (trials < 1) throw Error(ErrorKind::InvalidParameter, "trials must be >= 1");
  const Flower full = f.has_petals() ? f : Flower::trusted(f.body(), petals_or_synthesize(f));
  const GridRef grid_e = grid_for_dimension(k, grid_size, derive_seed(seed, 0));
  DvoretzkyResult out;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t s = derive_seed(seed, static_cast<std::uint64_t>(t) + 1);
    const SubspaceBasis e = random_subspace(f.dim(), k, s);
    DvoretzkyTrial row;
    row.trial = t;
    row.seed = s;
    row.projection_distance = distance_to_ball(project_flower(full, e, grid_e).body()).value;
    row.section_distance = distance_to_ball(section_flower(full, e, grid_e).body()).value;
    if (row.projection_distance < out.best_distance) {
      out.best_distance = row.projection_distance;
      out.best = e;
    }
    out.trials.push_back(row);
  }
  return out;
}

namespace detail {

// max/min over the grid of (1/N) sum_i max_j <u_i x_j, theta>_+.
inline double averaged_ratio(const std::vector<Vector>& petals, const std::vector<Rotation>& rots,
                             const DirectionGrid& grid) {
  std::vector<double> avg(grid.size(), 0.0);
  Matrix pts(grid.dim(), static_cast<Eigen::Index>(petals.size()));
  for (const auto& u : rots) {
    for (std::size_t j = 0; j < petals.size(); ++j) pts.col(static_cast<Eigen::Index>(j)) = u.matrix * petals[j];
    const Matrix dots = grid.directions().transpose() * pts;  // nodes x petals
    for (std::size_t i = 0; i < grid.size(); ++i)
      avg[i] += std::max(0.0, dots.row(static_cast<Eigen::Index>(i)).maxCoeff());
  }
  const auto [lo, hi] = std::minmax_element(avg.begin(), avg.end());
  if (*lo <= 0.0) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

}  // namespace detail

/// Oscillation max/min of the average of N Haar-rotated copies of F. The
/// rotations are derive_seed(seed, i), so smaller N use a prefix of the
/// same stream.
inline double global_average(const Flower& f, int n_rotations, std::uint64_t seed) {
  if (n_rotations < 1) throw Error(ErrorKind::InvalidParameter, "N must be >= 1");
  const auto petals = petals_or_synthesize(f);
  std::vector<Rotation> rots;
  for (int i = 0; i < n_rotations; ++i) rots.push_back(random_rotation(f.dim(), derive_seed(seed, static_cast<std::uint64_t>(i))));
  return detail::averaged_ratio(petals, rots, f.grid());
}

/// Oscillation of the average of `count` (default 2n) randomly rotated unit
/// petals B_{u_i e_1} in R^n; infinite when some grid direction is missed
/// by every petal.
inline double kashin_petals(int n, std::uint64_t seed, int count = 0, int grid_size = 4096) {
  if (n < 2) throw Error(ErrorKind::InvalidParameter, "kashin_petals needs n >= 2");
  if (count == 0) count = 2 * n;
  if (count < 1) throw Error(ErrorKind::InvalidParameter, "petal count must be >= 1");
  const GridRef grid = grid_for_dimension(n, grid_size, derive_seed(seed, 0));
  std::vector<Rotation> rots;
  for (int i = 0; i < count; ++i) rots.push_back(random_rotation(n, derive_seed(seed, static_cast<std::uint64_t>(i) + 1)));
  return detail::averaged_ratio({Vector::Unit(n, 0)}, rots, *grid);
}

}  // namespace flowerlab

#endif  // FLOWERLAB_LOCALTHEORY_HPP
