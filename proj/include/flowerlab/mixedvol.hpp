#ifndef FLOWERLAB_MIXEDVOL_HPP
#define FLOWERLAB_MIXEDVOL_HPP

// Flower mixed volumes
//
//   V(K_1, ..., K_n) = |B| * mean_sigma( prod_i h_{K_i} )
//
// and the degree-n polynomial |sum_i lambda_i F_i| they generate.

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flowerlab/bodies.hpp"

namespace flowerlab {

struct FlowerCombination {
  std::vector<ConvexBody> bodies;
  std::vector<double> coefficients;

  void validate() const {
    if (bodies.empty()) throw Error(ErrorKind::InvalidParameter, "empty combination");
    if (bodies.size() != coefficients.size())
      throw Error(ErrorKind::InvalidParameter, "bodies and coefficients differ in length");
    for (const auto& b : bodies) detail::check_same_grid(bodies.front().grid(), b.grid());
    for (double l : coefficients)
      if (!(l >= 0.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidParameter, "coefficients must be >= 0");
  }
};

/// Flower of sum_i lambda_i K_i: radial sum_i lambda_i h_{K_i}.
inline Flower combine(const FlowerCombination& c) {
  c.validate();
  std::vector<double> r(c.bodies.front().size(), 0.0);
  bool any = false;
  for (std::size_t k = 0; k < c.bodies.size(); ++k) {
    if (c.coefficients[k] == 0.0) continue;
    any = true;
    const auto& h = c.bodies[k].support();
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += c.coefficients[k] * h[i];
  }
  if (!any) throw Error(ErrorKind::DegenerateFlower, "all coefficients are zero");
  return Flower::trusted(StarBody(c.bodies.front().grid_ref(), std::move(r)));
}

inline double flower_mixed_volume(std::span<const ConvexBody* const> ks) {
  if (ks.empty()) throw Error(ErrorKind::Arity, "mixed volume needs dim bodies, got 0");
  const int n = ks.front()->dim();
  if (static_cast<int>(ks.size()) != n)
    throw Error(ErrorKind::Arity, "mixed volume needs " + std::to_string(n) + " bodies, got " + std::to_string(ks.size()));
  for (const auto* k : ks) detail::check_same_grid(ks.front()->grid(), k->grid());
  // Factors are multiplied in sorted order so permuting the arguments
  // reproduces the same bits.
  std::vector<double> p(ks.front()->size());
  std::vector<double> f(ks.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t q = 0; q < ks.size(); ++q) f[q] = ks[q]->support()[i];
    std::sort(f.begin(), f.end());
    double prod = 1.0;
    for (double v : f) prod *= v;
    p[i] = prod;
  }
  return unit_ball_volume(n) * quadrature_mean(ks.front()->grid(), p);
}

inline double flower_mixed_volume(const std::vector<ConvexBody>& ks) {
  std::vector<const ConvexBody*> ptrs;
  for (const auto& k : ks) ptrs.push_back(&k);
  return flower_mixed_volume(ptrs);
}

/// One coefficient of the polynomial: a multiset of body indices, its
/// multinomial weight and the mixed volume.
struct MixedTerm {
  std::vector<int> indices;  // nondecreasing, length n
  double multinomial = 1.0;
  double mixed_volume = 0.0;
};

namespace detail {

inline void for_each_multiset(int k, int n, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(idx);
    int pos = n - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == k - 1) --pos;
    if (pos < 0) return;
    const int v = idx[static_cast<std::size_t>(pos)] + 1;
    for (int q = pos; q < n; ++q) idx[static_cast<std::size_t>(q)] = v;
  }
}

inline double multinomial(const std::vector<int>& idx) {
  // n! / prod(count_j!)
  double num = std::tgamma(static_cast<double>(idx.size()) + 1.0);
  std::size_t run = 1;
  for (std::size_t i = 1; i <= idx.size(); ++i) {
    if (i < idx.size() && idx[i] == idx[i - 1]) {
      ++run;
    } else {
      num /= std::tgamma(static_cast<double>(run) + 1.0);
      run = 1;
    }
  }
  return num;
}

}  // namespace detail

inline std::vector<MixedTerm> coefficient_table(const FlowerCombination& c) {
  c.validate();
  const int n = c.bodies.front().dim();
  std::vector<MixedTerm> out;
  detail::for_each_multiset(static_cast<int>(c.bodies.size()), n, [&](const std::vector<int>& idx) {
    std::vector<const ConvexBody*> ks;
    for (int i : idx) ks.push_back(&c.bodies[static_cast<std::size_t>(i)]);
    out.push_back({idx, detail::multinomial(idx), flower_mixed_volume(ks)});
  });
  return out;
}

struct ExpansionReport {
  double volume = 0.0;      // |combine(c)|
  double polynomial = 0.0;  // sum over terms
  double discrepancy = 0.0;
  std::vector<MixedTerm> terms;
};

inline ExpansionReport expansion_check(const FlowerCombination& c) {
  ExpansionReport r;
  r.terms = coefficient_table(c);
  r.volume = volume(combine(c));
  for (const auto& t : r.terms) {
    double w = t.multinomial * t.mixed_volume;
    for (int i : t.indices) w *= c.coefficients[static_cast<std::size_t>(i)];
    r.polynomial += w;
  }
  r.discrepancy = std::abs(r.volume - r.polynomial);
  return r;
}

}  // namespace flowerlab

#endif  // FLOWERLAB_MIXEDVOL_HPP
