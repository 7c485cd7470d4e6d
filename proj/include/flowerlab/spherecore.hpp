#ifndef FLOWERLAB_SPHERECORE_HPP
#define FLOWERLAB_SPHERECORE_HPP

// Direction grids on S^{n-1}, probability quadrature, and seeded random
// rotations/subspaces. Everything random here is a pure function of its
// parameters and seed.

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "flowerlab/error.hpp"

namespace flowerlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr int kDefaultGridSize = 720;

/// splitmix64 finalizer; used to derive independent child seeds from a
/// master seed and a trial index.
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix_seed(mix_seed(master) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

using Rng = std::mt19937_64;

inline Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Column-major fill order is part of the determinism contract.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

class DirectionGrid {
 public:
  enum class Kind { UniformAngle, Sampled, Explicit };

  /// Explicit grid: directions are columns of `directions`. Directions are
  /// checked for unit norm and weights for summing to one.
  static std::shared_ptr<const DirectionGrid> from_directions(Matrix directions, Vector weights) {
    const auto dim = directions.rows();
    const auto n = directions.cols();
    if (dim < 1) throw Error(ErrorKind::InvalidGrid, "grid dimension must be >= 1");
    if (n < 1 || weights.size() != n)
      throw Error(ErrorKind::InvalidGrid, "weights length must equal number of directions");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (std::abs(directions.col(i).norm() - 1.0) > 1e-12)
        throw Error(ErrorKind::InvalidGrid, "direction " + std::to_string(i) + " is not a unit vector");
      if (!(weights[i] >= 0.0)) throw Error(ErrorKind::InvalidGrid, "negative weight at " + std::to_string(i));
    }
    if (std::abs(weights.sum() - 1.0) > 1e-12) throw Error(ErrorKind::InvalidGrid, "weights must sum to 1");
    auto g = std::shared_ptr<DirectionGrid>(new DirectionGrid());
    g->kind_ = Kind::Explicit;
    g->dirs_ = std::move(directions);
    g->weights_ = std::move(weights);
    g->build_antipodes();
    return g;
  }

  Kind kind() const noexcept { return kind_; }
  int dim() const noexcept { return static_cast<int>(dirs_.rows()); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(dirs_.cols()); }
  const Matrix& directions() const noexcept { return dirs_; }
  auto direction(std::size_t i) const { return dirs_.col(static_cast<Eigen::Index>(i)); }
  const Vector& weights() const noexcept { return weights_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool antipodal() const noexcept { return antipodal_; }

  bool is_uniform_angle() const noexcept { return kind_ == Kind::UniformAngle; }

  /// Angle of node i; only meaningful on uniform-angle grids.
  double angle(std::size_t i) const { return 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(size()); }

  std::optional<std::size_t> antipode(std::size_t i) const {
    if (antipode_.empty() || antipode_[i] == kNone) return std::nullopt;
    return antipode_[i];
  }

  std::size_t nearest(const Eigen::Ref<const Vector>& theta) const {
    if (kind_ == Kind::UniformAngle) {
      const double n = static_cast<double>(size());
      double a = std::atan2(theta[1], theta[0]);
      if (a < 0) a += 2.0 * std::numbers::pi;
      auto k = static_cast<std::size_t>(std::llround(a / (2.0 * std::numbers::pi) * n));
      return k % size();
    }
    Eigen::Index best = 0;
    (dirs_.transpose() * theta).maxCoeff(&best);
    return static_cast<std::size_t>(best);
  }

  /// Sample a function given on the nodes at an arbitrary unit direction:
  /// linear in angle on 2D uniform grids, nearest node otherwise.
  double interpolate(std::span<const double> values, const Eigen::Ref<const Vector>& theta) const {
    if (kind_ == Kind::UniformAngle) {
      const double n = static_cast<double>(size());
      double a = std::atan2(theta[1], theta[0]);
      if (a < 0) a += 2.0 * std::numbers::pi;
      const double pos = a / (2.0 * std::numbers::pi) * n;
      const double fl = std::floor(pos);
      const double frac = pos - fl;
      const auto i0 = static_cast<std::size_t>(fl) % size();
      const auto i1 = (i0 + 1) % size();
      return (1.0 - frac) * values[i0] + frac * values[i1];
    }
    return values[nearest(theta)];
  }

  bool same_as(const DirectionGrid& other) const {
    if (this == &other) return true;
    if (dim() != other.dim() || size() != other.size() || kind_ != other.kind_) return false;
    if (kind_ == Kind::UniformAngle) return true;
    if (kind_ == Kind::Sampled && seed_ == other.seed_ && antipodal_ == other.antipodal_) return true;
    return dirs_ == other.dirs_ && weights_ == other.weights_;
  }

 private:
  friend std::shared_ptr<const DirectionGrid> uniform_angle_grid(int n);
  friend std::shared_ptr<const DirectionGrid> sampled_sphere_grid(int dim, int n, std::uint64_t seed, bool antipodal);

  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

  DirectionGrid() = default;

  void build_antipodes() {
    antipode_.assign(size(), kNone);
    if (kind_ == Kind::UniformAngle) {
      if (size() % 2 == 0)
        for (std::size_t i = 0; i < size(); ++i) antipode_[i] = (i + size() / 2) % size();
      return;
    }
    if (kind_ == Kind::Sampled) {
      if (antipodal_) {
        const std::size_t half = size() / 2;
        for (std::size_t i = 0; i < half; ++i) {
          antipode_[i] = i + half;
          antipode_[i + half] = i;
        }
      }
      return;
    }
    if (size() > 4096) return;
    for (std::size_t i = 0; i < size(); ++i) {
      const std::size_t j = nearest(-dirs_.col(static_cast<Eigen::Index>(i)));
      if ((dirs_.col(static_cast<Eigen::Index>(i)) + dirs_.col(static_cast<Eigen::Index>(j))).norm() < 1e-12)
        antipode_[i] = j;
    }
  }

  Kind kind_ = Kind::Explicit;
  Matrix dirs_;
  Vector weights_;
  std::uint64_t seed_ = 0;
  bool antipodal_ = false;
  std::vector<std::size_t> antipode_;
};

using GridRef = std::shared_ptr<const DirectionGrid>;

/// N equally spaced directions on the circle with equal weights. Values that
/// are zero up to rounding (e.g. cos 90°) are snapped so that axis and
/// diagonal nodes are exact.
inline GridRef uniform_angle_grid(int n = kDefaultGridSize) {
  if (n < 8) throw Error(ErrorKind::InvalidGrid, "uniform angle grid needs N >= 8, got " + std::to_string(n));
  auto g = std::shared_ptr<DirectionGrid>(new DirectionGrid());
  g->kind_ = DirectionGrid::Kind::UniformAngle;
  g->dirs_.resize(2, n);
  for (int i = 0; i < n; ++i) {
    double c, s;
    // Reduce to the first octant so symmetric nodes get bitwise-symmetric values.
    const long long num = 8LL * i;
    if (num % n == 0) {
      static constexpr double h = std::numbers::sqrt2 / 2.0;
      static constexpr double table[8][2] = {{1, 0}, {h, h}, {0, 1}, {-h, h}, {-1, 0}, {-h, -h}, {0, -1}, {h, -h}};
      const auto oct = static_cast<int>(num / n);
      c = table[oct][0];
      s = table[oct][1];
    } else {
      const double a = 2.0 * std::numbers::pi * i / n;
      c = std::cos(a);
      s = std::sin(a);
    }
    g->dirs_(0, i) = c;
    g->dirs_(1, i) = s;
  }
  g->weights_ = Vector::Constant(n, 1.0 / n);
  g->build_antipodes();
  return g;
}

/// Monte Carlo grid: normalized standard Gaussian vectors. With `antipodal`
/// the second half of the grid mirrors the first, which makes symmetry
/// checks exact.
inline GridRef sampled_sphere_grid(int dim, int n, std::uint64_t seed, bool antipodal = false) {
  if (dim < 3) throw Error(ErrorKind::InvalidGrid, "sampled grids need dim >= 3");
  if (n < 32) throw Error(ErrorKind::InvalidGrid, "sampled grids need N >= 32");
  if (antipodal && n % 2 != 0) throw Error(ErrorKind::InvalidGrid, "antipodal grids need even N");
  auto g = std::shared_ptr<DirectionGrid>(new DirectionGrid());
  g->kind_ = DirectionGrid::Kind::Sampled;
  g->seed_ = seed;
  g->antipodal_ = antipodal;
  Rng rng(seed);
  const int drawn = antipodal ? n / 2 : n;
  Matrix m = gaussian_matrix(dim, drawn, rng);
  m.colwise().normalize();
  g->dirs_.resize(dim, n);
  g->dirs_.leftCols(drawn) = m;
  if (antipodal) g->dirs_.rightCols(drawn) = -m;
  g->weights_ = Vector::Constant(n, 1.0 / n);
  g->build_antipodes();
  return g;
}

/// Grid for a subspace of dimension k: {+1, -1} for k = 1, the circle grid
/// for k = 2, a sampled (antipodal) grid for k >= 3.
inline GridRef grid_for_dimension(int k, int n, std::uint64_t seed) {
  if (k == 1) return DirectionGrid::from_directions(Matrix{{1.0, -1.0}}, Vector::Constant(2, 0.5));
  if (k == 2) return uniform_angle_grid(n);
  return sampled_sphere_grid(k, n + (n % 2), seed, true);
}

/// Integral against the grid's probability measure.
inline double quadrature_mean(const DirectionGrid& grid, std::span<const double> values) {
  if (values.size() != grid.size())
    throw Error(ErrorKind::GridMismatch, "values length " + std::to_string(values.size()) + " != grid size " +
                                             std::to_string(grid.size()));
  const auto& w = grid.weights();
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) sum += w[static_cast<Eigen::Index>(i)] * values[i];
  return sum;
}

struct Rotation {
  Matrix matrix;

  int dim() const noexcept { return static_cast<int>(matrix.rows()); }
  Rotation inverse() const { return Rotation{matrix.transpose()}; }
};

/// Haar-distributed element of SO(dim): Householder QR of a Gaussian matrix,
/// signs fixed by diag(R), determinant forced to +1.
inline Rotation random_rotation(int dim, std::uint64_t seed) {
  if (dim < 2) throw Error(ErrorKind::InvalidParameter, "rotation dimension must be >= 2");
  Rng rng(seed);
  const Matrix a = gaussian_matrix(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  if (q.determinant() < 0) q.col(0) = -q.col(0);
  return Rotation{std::move(q)};
}

struct SubspaceBasis {
  int ambient_dim = 0;
  /// k x ambient_dim; rows are an orthonormal frame.
  Matrix frame;

  int k() const noexcept { return static_cast<int>(frame.rows()); }
  Matrix projector() const { return frame.transpose() * frame; }
  /// Coordinates of P_E x in the frame.
  Vector coordinates(const Eigen::Ref<const Vector>& x) const { return frame * x; }
  Vector embed(const Eigen::Ref<const Vector>& u) const { return frame.transpose() * u; }
};

inline SubspaceBasis random_subspace(int dim, int k, std::uint64_t seed) {
  if (k < 1 || k > dim)
    throw Error(ErrorKind::InvalidParameter, "subspace dimension k=" + std::to_string(k) + " out of range");
  Rng rng(seed);
  const Matrix a = gaussian_matrix(dim, k, rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim, k);
  return SubspaceBasis{dim, q.transpose()};
}

inline SubspaceBasis coordinate_subspace(int dim, std::span<const int> axes) {
  Matrix f = Matrix::Zero(static_cast<Eigen::Index>(axes.size()), dim);
  for (std::size_t i = 0; i < axes.size(); ++i) f(static_cast<Eigen::Index>(i), axes[i]) = 1.0;
  return SubspaceBasis{dim, std::move(f)};
}

/// Unit-sphere volume constant kappa_n = pi^{n/2} / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

}  // namespace flowerlab

#endif  // FLOWERLAB_SPHERECORE_HPP
