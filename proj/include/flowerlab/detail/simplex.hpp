#ifndef FLOWERLAB_DETAIL_SIMPLEX_HPP
#define FLOWERLAB_DETAIL_SIMPLEX_HPP

// Small dense simplex for the one LP the n-D engine needs: how far a ray
// from the origin travels inside conv({q_i} ∪ {0}).

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace flowerlab::detail {

/// max t  s.t.  sum_i lambda_i q_i = t * theta,  sum_i lambda_i <= 1,  lambda >= 0.
/// `points` holds the q_i as columns. Bland's rule; returns +inf if the ray
/// never leaves the hull (cannot happen when 0 is interior and the q_i span).
inline double ray_exit_distance(const Eigen::MatrixXd& points, const Eigen::Ref<const Eigen::VectorXd>& theta) {
  const int n = static_cast<int>(points.rows());
  const int m = static_cast<int>(points.cols());
  const int col_t = m;
  const int col_s = m + 1;
  const int col_art = m + 2;
  const int cols = m + 2 + n;  // + rhs column at index `cols`
  const int rows = n + 1;
  constexpr double eps = 1e-11;

  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(rows + 1, cols + 1);
  for (int i = 0; i < n; ++i) {
    tab.row(i).head(m) = points.row(i);
    tab(i, col_t) = -theta[i];
    tab(i, col_art + i) = 1.0;
  }
  tab.row(n).head(m).setOnes();
  tab(n, col_s) = 1.0;
  tab(n, cols) = 1.0;
  std::vector<int> basis(static_cast<std::size_t>(rows));
  for (int i = 0; i < n; ++i) basis[static_cast<std::size_t>(i)] = col_art + i;
  basis[static_cast<std::size_t>(n)] = col_s;

  auto pivot = [&](int r, int c) {
    tab.row(r) /= tab(r, c);
    for (int i = 0; i <= rows; ++i) {
      if (i == r) continue;
      const double f = tab(i, c);
      if (f != 0.0) tab.row(i) -= f * tab.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  };

  // All artificials sit at zero, so phase one only has to swap them out.
  std::vector<bool> blocked(static_cast<std::size_t>(cols), false);
  for (int i = 0; i < n; ++i) blocked[static_cast<std::size_t>(col_art + i)] = true;
  for (int r = 0; r < n; ++r) {
    if (basis[static_cast<std::size_t>(r)] < col_art) continue;
    int best = -1;
    double best_abs = 1e-9;
    for (int c = 0; c < col_art; ++c) {
      if (std::abs(tab(r, c)) > best_abs) {
        best_abs = std::abs(tab(r, c));
        best = c;
      }
    }
    if (best >= 0) pivot(r, best);
  }

  // Objective row: maximize t, stored as reduced costs c_j - z_j.
  tab.row(rows).setZero();
  tab(rows, col_t) = 1.0;
  for (int r = 0; r < rows; ++r)
    if (basis[static_cast<std::size_t>(r)] == col_t) tab.row(rows) -= tab.row(r);

  for (int iter = 0; iter < 50 * (m + n + 2); ++iter) {
    int enter = -1;
    for (int c = 0; c < cols; ++c) {
      if (blocked[static_cast<std::size_t>(c)]) continue;
      if (tab(rows, c) > eps) {
        enter = c;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int r = 0; r < rows; ++r) {
      const double a = tab(r, enter);
      if (a > eps) {
        const double ratio = tab(r, cols) / a;
        if (ratio < best_ratio - 1e-15 ||
            (std::abs(ratio - best_ratio) <= 1e-15 && leave >= 0 &&
             basis[static_cast<std::size_t>(r)] < basis[static_cast<std::size_t>(leave)])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave < 0) return std::numeric_limits<double>::infinity();
    pivot(leave, enter);
  }
  for (int r = 0; r < rows; ++r)
    if (basis[static_cast<std::size_t>(r)] == col_t) return tab(r, cols);
  return 0.0;
}

}  // namespace flowerlab::detail

#endif  // FLOWERLAB_DETAIL_SIMPLEX_HPP
