#ifndef FLOWERLAB_CALCULUS_HPP
#define FLOWERLAB_CALCULUS_HPP

// Functions of bodies. Everything here reduces to
//
//   f(K) = conv S,   r_S(theta) = f(theta, r_K(theta))
//
// evaluated on the grid nodes, followed by the hull scans.

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "flowerlab/bodies.hpp"

namespace flowerlab {

class Partition {
 public:
  explicit Partition(std::vector<double> endpoints) : t_(std::move(endpoints)) {
    if (t_.size() < 2) throw Error(ErrorKind::InvalidParameter, "partition needs at least two endpoints");
    for (std::size_t i = 0; i < t_.size(); ++i) {
      if (!(t_[i] > 0.0)) throw Error(ErrorKind::InvalidParameter, "partition endpoints must be positive");
      if (i > 0 && !(t_[i] > t_[i - 1])) throw Error(ErrorKind::InvalidParameter, "partition must be increasing");
    }
  }

  /// m equal log-steps between a and b.
  static Partition geometric(double a, double b, int m) {
    if (m < 1) throw Error(ErrorKind::InvalidParameter, "partition needs m >= 1");
    std::vector<double> t(static_cast<std::size_t>(m) + 1);
    for (int i = 0; i <= m; ++i) t[static_cast<std::size_t>(i)] = a * std::pow(b / a, static_cast<double>(i) / m);
    t.front() = a;
    t.back() = b;
    return Partition(std::move(t));
  }

  const std::vector<double>& endpoints() const noexcept { return t_; }
  int steps() const noexcept { return static_cast<int>(t_.size()) - 1; }
  double mesh() const {
    double m = 0.0;
    for (std::size_t i = 1; i < t_.size(); ++i) m = std::max(m, t_[i] - t_[i - 1]);
    return m;
  }

 private:
  std::vector<double> t_;
};

class RadialMap {
 public:
  using Fn = std::function<double(const Eigen::Ref<const Vector>&, double)>;

  explicit RadialMap(Fn f) : f_(std::move(f)) {
    if (!f_) throw Error(ErrorKind::InvalidParameter, "empty radial map");
  }

  static RadialMap power(double lambda) {
    return RadialMap([lambda](const Eigen::Ref<const Vector>&, double r) { return r == 0.0 ? 0.0 : std::pow(r, lambda); });
  }

  double operator()(const Eigen::Ref<const Vector>& theta, double r) const { return f_(theta, r); }

  /// f(theta, 0) = 0 on every node.
  void check(const DirectionGrid& grid) const {
    for (std::size_t i = 0; i < grid.size(); ++i)
      if (f_(grid.direction(i), 0.0) != 0.0)
        throw Error(ErrorKind::InvalidParameter, "radial map must vanish at r = 0 (node " + std::to_string(i) + ")");
  }

 private:
  Fn f_;
};

inline ConvexBody apply_radial_map(const ConvexBody& k, const RadialMap& f) {
  k.require_certified("apply_radial_map");
  f.check(k.grid());
  const auto& grid = k.grid();
  std::vector<double> r(k.size());
  bool any = false;
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double v = f(grid.direction(i), k.radial()[i]);
    if (!std::isfinite(v) || v < 0.0)
      throw Error(ErrorKind::DegenerateOutput, "radial map produced an invalid value at node " + std::to_string(i));
    any = any || v > 0.0;
    r[i] = std::max(v, kPositivityFloor);
  }
  if (!any) throw Error(ErrorKind::DegenerateOutput, "radial map vanished on every node");
  return convexify_support(StarBody(k.grid_ref(), std::move(r)));
}

inline ConvexBody power_naive(const ConvexBody& k, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidParameter, "power_naive needs lambda > 0");
  return apply_radial_map(k, RadialMap::power(lambda));
}

namespace detail {

// One naive power step on raw radial samples: radial of conv{r_i^s theta_i}.
inline std::vector<double> power_step(const DirectionGrid& grid, const std::vector<double>& r, double s) {
  std::vector<double> p(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) p[i] = std::pow(r[i], s);
  return cloud_radial(grid, p);
}

}  // namespace detail

/// P_Pi(K) = (P_{s_1} ∘ ... ∘ P_{s_m})(K). For a partition of [lambda, 1]
/// the ratios are t_{i-1}/t_i; for [1, lambda] they are t_i/t_{i-1} with the
/// composition order reversed.
inline ConvexBody power_partition(const ConvexBody& k, const Partition& pi) {
  k.require_certified("power_partition");
  const auto& t = pi.endpoints();
  const bool below = t.back() <= 1.0;
  if (!(below ? t.back() == 1.0 : t.front() == 1.0))
    throw Error(ErrorKind::InvalidParameter, "partition must end at 1 or start at 1");
  std::vector<double> ratios;
  for (std::size_t i = 1; i < t.size(); ++i) ratios.push_back(below ? t[i - 1] / t[i] : t[i] / t[i - 1]);
  // P_{s_m} acts first when below 1; P_{s_1} acts first above 1.
  if (below) std::reverse(ratios.begin(), ratios.end());
  std::vector<double> r = k.radial();
  std::vector<double> last_in = r;
  for (double s : ratios) {
    last_in.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) last_in[i] = std::pow(r[i], s);
    r = cloud_radial(k.grid(), last_in);
  }
  auto h = cloud_support(k.grid(), last_in);
  return ConvexBody::from_samples(k.grid_ref(), std::move(h), std::move(r));
}

struct PowerResult {
  ConvexBody body;
  int m_final = 0;
  double last_increment = 0.0;
};

inline constexpr int kPowerMaxSteps = 1 << 14;

/// K^lambda as the limit of P_Pi over equal log-step partitions with m
/// doubling from 2 until successive radials agree to `tol` in sup-log.
inline PowerResult power(const ConvexBody& k, double lambda, double tol = 1e-6) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw Error(ErrorKind::InvalidParameter, "power needs lambda >= 0");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidParameter, "power needs tol > 0");
  k.require_certified("power");
  if (lambda == 1.0) return {k, 0, 0.0};
  if (lambda == 0.0) return {ball(k.grid_ref()), 0, 0.0};
  const auto& grid = k.grid();

  // With equal steps the composition order is immaterial, so both regimes
  // iterate the same operator P_s, s = lambda^(1/m).
  auto run = [&](int m, std::vector<double>* last_in) {
    const double s = std::pow(lambda, 1.0 / m);
    std::vector<double> r = k.radial();
    std::vector<double> p(r.size());
    for (int step = 0; step < m; ++step) {
      for (std::size_t i = 0; i < r.size(); ++i) p[i] = std::pow(r[i], s);
      r = cloud_radial(grid, p);
    }
    if (last_in) *last_in = std::move(p);
    return r;
  };

  std::vector<double> powered;
  auto prev = run(2, nullptr);
  double inc = 0.0;
  for (int m = 4; m <= kPowerMaxSteps; m *= 2) {
    auto cur = run(m, &powered);
    inc = log_radial_distance(cur, prev);
    if (inc < tol) {
      auto h = cloud_support(grid, powered);
      return {ConvexBody::from_samples(k.grid_ref(), std::move(h), std::move(cur)), m, inc};
    }
    prev = std::move(cur);
  }
  throw Error(ErrorKind::ConvergenceFailure,
              "power map did not converge by m = " + std::to_string(kPowerMaxSteps) +
                  " (last increment " + std::to_string(inc) + ")");
}

inline StarBody radial_product(const StarBody& a, const StarBody& b) {
  detail::check_same_grid(a.grid(), b.grid());
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.radial()[i] * b.radial()[i];
  return StarBody(a.grid_ref(), std::move(r));
}

/// T∘K = conv(T♣ · K).
inline ConvexBody compose(const ConvexBody& t, const ConvexBody& k) {
  detail::check_same_grid(t.grid(), k.grid());
  t.require_certified("compose");
  k.require_certified("compose");
  return convexify_support(radial_product(StarBody(t.grid_ref(), t.support()), k.as_star()));
}

/// T⊙K = conv(T · K).
inline ConvexBody radial_compose(const ConvexBody& t, const ConvexBody& k) {
  detail::check_same_grid(t.grid(), k.grid());
  return convexify_support(radial_product(t.as_star(), k.as_star()));
}

/// (1 - lambda)·K +_0 lambda·T = A[h_K^(1-lambda) h_T^lambda].
inline ConvexBody log_mean_0(const ConvexBody& k, const ConvexBody& t, double lambda) {
  detail::check_same_grid(t.grid(), k.grid());
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorKind::InvalidParameter, "log_mean_0 needs 0 <= lambda <= 1");
  if (lambda == 0.0) return k;
  if (lambda == 1.0) return t;
  std::vector<double> g(k.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    g[i] = std::pow(k.support()[i], 1.0 - lambda) * std::pow(t.support()[i], lambda);
  return alexandrov(g, k.grid_ref());
}

inline ConvexBody minkowski_sum(const ConvexBody& a, const ConvexBody& b) {
  detail::check_same_grid(a.grid(), b.grid());
  std::vector<double> h(a.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = a.support()[i] + b.support()[i];
  return ConvexBody::from_support(a.grid_ref(), std::move(h));
}

enum class CompositionMode { Flower, Radial };

struct BmReport {
  double margin = 0.0;
  double lhs = 0.0;  // |T∘(K1+K2)|^(1/n)
  double rhs = 0.0;  // |T∘K1|^(1/n) + |T∘K2|^(1/n)
  bool holds(double tol = 1e-6) const { return margin >= -tol; }
};

/// Brunn-Minkowski probe for a composition: the margin
/// |T∘(K1+K2)|^(1/n) - |T∘K1|^(1/n) - |T∘K2|^(1/n). No claim is made about
/// its sign.
inline BmReport check_composition_bm(const ConvexBody& t, const ConvexBody& k1, const ConvexBody& k2,
                                     CompositionMode mode) {
  auto op = [&](const ConvexBody& k) { return mode == CompositionMode::Flower ? compose(t, k) : radial_compose(t, k); };
  const double n = t.dim();
  BmReport r;
  r.lhs = std::pow(volume(op(minkowski_sum(k1, k2))), 1.0 / n);
  r.rhs = std::pow(volume(op(k1)), 1.0 / n) + std::pow(volume(op(k2)), 1.0 / n);
  r.margin = r.lhs - r.rhs;
  return r;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_CALCULUS_HPP
