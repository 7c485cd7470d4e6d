#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "flowerlab/bodies.hpp"
#include "support.hpp"

using namespace flowerlab;
namespace ft = flowerlab::testing;

namespace {

Vector v2(double x, double y) { return (Vector(2) << x, y).finished(); }

GridRef grid720() {
  static const GridRef g = uniform_angle_grid(720);
  return g;
}

}  // namespace

TEST(PetalRadial, Examples) {
  EXPECT_DOUBLE_EQ(petal_radial(v2(1, 0), v2(1, 0)), 1.0);
  EXPECT_DOUBLE_EQ(petal_radial(v2(1, 0), v2(0, 1)), 0.0);
  // Oracle: the ray t*theta meets the circle |p - x/2| = 1/2 at t solving
  // t^2 - t <x, theta> = 0.
  const double a = std::numbers::pi / 3.0;
  const Vector th = v2(std::cos(a), std::sin(a));
  const double t = petal_radial(v2(1, 0), th);
  EXPECT_NEAR((t * th - v2(0.5, 0)).norm(), 0.5, 1e-15);
  EXPECT_NEAR(t, 0.5, 1e-15);
  EXPECT_THROW(petal_radial(v2(0, 0), th), Error);
}

TEST(FlowerFromPetals, Examples) {
  const auto g = grid720();
  const auto one = flower_from_petals({v2(1, 0)}, g);
  const auto two = flower_from_petals({v2(1, 0), v2(-1, 0)}, g);
  const auto orth = flower_from_petals({v2(1, 0), v2(0, 1)}, g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto d = g->direction(i);
    EXPECT_DOUBLE_EQ(one.radial()[i], std::max(kPositivityFloor, std::max(0.0, d[0])));
    EXPECT_DOUBLE_EQ(two.radial()[i], std::max(kPositivityFloor, std::abs(d[0])));
    EXPECT_DOUBLE_EQ(orth.radial()[i], std::max({kPositivityFloor, d[0], d[1]}));
  }
  EXPECT_TRUE(is_flower(one.body()).ok);
  try {
    flower_from_petals({v2(0, 0)}, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateFlower);
  }
}

TEST(FlowerOf, Examples) {
  const auto g = grid720();
  {
    const auto tmp = flower_of(ball(g));
    for (double v : tmp.radial()) EXPECT_EQ(v, 1.0);
  }
  const auto seg = body_of_points(g, std::vector<Vector>{v2(1, 0)});
  ASSERT_TRUE(seg.certified());
  const auto petal = flower_of(seg);
  const auto sq = flower_of(body_of_points(g, cube_vertices(2, 1.0)));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto d = g->direction(i);
    EXPECT_NEAR(petal.radial()[i], std::max(kPositivityFloor, d[0]), 1e-15);
    EXPECT_NEAR(sq.radial()[i], std::abs(d[0]) + std::abs(d[1]), 1e-15);
  }
}

TEST(FlowerOf, RequiresCertifiedBody) {
  const auto g = grid720();
  std::vector<double> h(g->size(), 1.0);
  h[0] = 3.0;  // a spike: not a support function
  const auto k = ConvexBody::from_support(g, h);
  EXPECT_FALSE(k.certified());
  try {
    flower_of(k);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CertificationRequired);
  }
}

TEST(CoreOf, PetalsGiveHullWithOrigin) {
  const auto g = grid720();
  const auto k = core_of(flower_from_petals({v2(1, 0), v2(0, 1)}, g));
  // Oracle: support of the triangle conv{0, e1, e2}.
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto d = g->direction(i);
    EXPECT_NEAR(k.support()[i], std::max({kPositivityFloor, 0.0, d[0], d[1]}), 1e-15);
  }
  EXPECT_TRUE(k.certified());
}

TEST(CoreOf, InverseOfFlowerOf) {
  Rng rng(4);
  const auto g = grid720();
  for (int t = 0; t < 10; ++t) {
    const auto k = ft::random_body(g, rng);
    EXPECT_EQ(core_of(flower_of(k)).support(), k.support());
  }
  const auto cross = StarBody(g, [&] {
    std::vector<double> r(g->size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 / (std::abs(g->direction(i)[0]) + std::abs(g->direction(i)[1]));
    return r;
  }());
  try {
    core_of(Flower::trusted(cross));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAFlower);
  }
}

TEST(Cof, Examples) {
  const auto g = grid720();
  const StarBody two(g, std::vector<double>(g->size(), 2.0));
  {
    const auto tmp = cof(two);
    for (double v : tmp.radial()) EXPECT_EQ(v, 0.5);
  }
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    const auto s = ft::random_star(g, rng);
    const auto back = cof(cof(s));
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(back.radial()[i], s.radial()[i], 1e-15 * s.radial()[i]);
    const auto k = ft::random_body(g, rng);
    const auto c = cof(flower_of(k).body());
    const auto p = polar(k);
    for (std::size_t i = 0; i < k.size(); ++i) {
      EXPECT_NEAR(c.radial()[i] * k.support()[i], 1.0, 1e-15);
      EXPECT_NEAR(c.radial()[i], p.radial()[i], 1e-12 * c.radial()[i]);
    }
  }
}

TEST(Polar, Examples) {
  const auto g = grid720();
  {
    const auto tmp = polar(ball(g));
    for (double v : tmp.support()) EXPECT_NEAR(v, 1.0, 1e-15);
  }
  const auto cp = polar(body_of_points(g, cube_vertices(2, 1.0)));
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto d = g->direction(i);
    EXPECT_NEAR(cp.support()[i], std::max(std::abs(d[0]), std::abs(d[1])), 1e-12);
  }
}

TEST(Polar, BipolarOnSmoothBodies) {
  // Oracle scale: one grid-interpolation tolerance is the sagitta of an
  // edge between neighbouring nodes.
  Rng rng(6);
  const auto g = uniform_angle_grid(4096);
  for (int t = 0; t < 5; ++t) {
    const auto k = ft::random_ellipse(g, rng);
    const auto kk = polar(polar(k));
    EXPECT_LT(log_radial_distance(kk.support(), k.support()), 2e-5);
  }
}

TEST(ConvexifySupport, Examples) {
  const auto g = grid720();
  {
    const auto tmp = convexify_support(ball(g).as_star());
    for (double v : tmp.support()) EXPECT_NEAR(v, 1.0, 1e-15);
  }
  // The petal B_{e1} is the disk B(e1/2, 1/2): h = <c, theta> + rho. Node
  // points crowd near the origin, so the inscribed polygon lags by ~4 sagittas.
  const auto petal = convexify_support(flower_from_petals({v2(1, 0)}, g).body());
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(petal.support()[i], (g->direction(i)[0] + 1.0) / 2.0, 3e-5);
  // Unit ball with one spike of radius 2 along e1.
  std::vector<double> r(g->size(), 1.0);
  r[0] = 2.0;
  const auto spike = convexify_support(StarBody(g, r));
  for (std::size_t i = 0; i < g->size(); ++i)
    EXPECT_NEAR(spike.support()[i], std::max(1.0, 2.0 * std::max(0.0, g->direction(i)[0])), 1e-15);
}

TEST(HalfspaceBody, Examples) {
  const auto g = grid720();
  const std::vector<double> ones(g->size(), 1.0);
  {
    const auto tmp = radial_of_halfspace_body(ones, g);
    for (double v : tmp.radial()) EXPECT_NEAR(v, 1.0, 1e-5);
  }
  std::vector<double> cut = ones;
  cut[0] = 0.5;
  const auto r = radial_of_halfspace_body(cut, g);
  const auto oracle = ft::halfspace_polygon_oracle(*g, cut);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(r.radial()[i], ft::polygon_radial(oracle, g->direction(i)), 1e-12);
  EXPECT_NEAR(r.radial()[0], 0.5, 1e-15);
}

TEST(Alexandrov, Examples) {
  const auto g = grid720();
  const std::vector<double> ones(g->size(), 1.0);
  {
    const auto tmp = alexandrov(ones, g);
    for (double v : tmp.support()) EXPECT_NEAR(v, 1.0, 1e-15);
  }
  Rng rng(8);
  const auto k = ft::random_body(g, rng);
  EXPECT_LT(log_radial_distance(alexandrov(k.support(), g).support(), k.support()), 1e-12);
}

TEST(Alexandrov, NarrowDipMatchesClippingOracle) {
  const auto g = grid720();
  std::vector<double> gv(g->size(), 1.0);
  for (int d = -4; d <= 4; ++d) gv[static_cast<std::size_t>((d + 720) % 720)] = 0.6 + 0.02 * d * d;
  const auto a = alexandrov(gv, g);
  const auto poly = ft::halfspace_polygon_oracle(*g, gv);
  for (std::size_t i = 0; i < g->size(); ++i) {
    EXPECT_NEAR(a.support()[i], ft::polygon_support(poly, g->direction(i)), 1e-12);
    EXPECT_LE(a.support()[i], gv[i] + 1e-15);
  }
  EXPECT_TRUE(a.certified());
}

TEST(IsFlower, Examples) {
  const auto g = grid720();
  EXPECT_TRUE(is_flower(ball(g).as_star()).ok);
  std::vector<double> r(g->size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 / (std::abs(g->direction(i)[0]) + std::abs(g->direction(i)[1]));
  const auto c = is_flower(StarBody(g, r));
  EXPECT_FALSE(c.ok);
  EXPECT_GT(c.max_violation, 0.1);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) EXPECT_TRUE(is_flower(flower_of(ft::random_body(g, rng)).body()).ok);
}

TEST(IsFlower, FlowersOfPolygonsAndSegments) {
  const auto g = grid720();
  EXPECT_TRUE(is_flower(flower_of(body_of_points(g, cube_vertices(2, 1.0))).body()).ok);
  EXPECT_TRUE(is_flower(flower_of(body_of_points(g, std::vector<Vector>{v2(1, 0)})).body()).ok);
  EXPECT_TRUE(is_flower(flower_of(body_of_points(g, regular_polygon_vertices(5, 1.3, 0.1))).body()).ok);
}

TEST(Volume, Examples) {
  EXPECT_NEAR(volume(ball(grid720()).as_star()), std::numbers::pi, 1e-9);
  EXPECT_NEAR(volume(flower_from_petals({v2(1, 0)}, grid720())), std::numbers::pi / 4.0, 1e-6);
  const auto g = uniform_angle_grid(4096);
  // Radial of the square [-1, 1]^2 is 1 / max(|cos|, |sin|).
  std::vector<double> r(g->size());
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i] = 1.0 / std::max(std::abs(g->direction(i)[0]), std::abs(g->direction(i)[1]));
  EXPECT_NEAR(volume(StarBody(g, r)), 4.0, 1e-4);
}

TEST(Volume, MonotoneAndHomogeneous) {
  Rng rng(10);
  const auto g = grid720();
  for (int t = 0; t < 10; ++t) {
    const auto s = ft::random_star(g, rng);
    EXPECT_NEAR(volume(dilate(s, 1.7)), 1.7 * 1.7 * volume(s), 1e-12 * volume(s));
    auto bigger = s.radial();
    for (std::size_t i = 0; i < bigger.size(); i += 3) bigger[i] *= 1.01;
    EXPECT_GE(volume(StarBody(g, bigger)), volume(s));
  }
}

TEST(RadialSum, Examples) {
  const auto g = grid720();
  const auto b = flower_of(ball(g));
  {
    const auto tmp = radial_sum(b, b);
    for (double v : tmp.radial()) EXPECT_EQ(v, 2.0);
  }
  Rng rng(11);
  for (int t = 0; t < 5; ++t) {
    const auto k1 = ft::random_body(g, rng);
    const auto k2 = ft::random_body(g, rng);
    std::vector<double> h(g->size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = k1.support()[i] + k2.support()[i];
    const auto s = radial_sum(flower_of(k1), flower_of(k2));
    EXPECT_EQ(s.radial(), h);
    EXPECT_TRUE(is_flower(s.body()).ok);
  }
}

TEST(RadialSum, PetalListsCombine) {
  const auto g = grid720();
  const auto a = flower_from_petals({v2(1, 0), v2(0, 1)}, g);
  const auto b = flower_from_petals({v2(-0.5, 0.2)}, g);
  const auto s = radial_sum(a, b);
  ASSERT_TRUE(s.has_petals());
  const auto again = flower_from_petals(s.petals(), g);
  // Directions outside every petal carry the positivity floor twice.
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(again.radial()[i], s.radial()[i], 2 * kPositivityFloor);
}

TEST(MinkowskiSum2D, TwoPetalsMatchDenseSumsetOracle) {
  const auto g = grid720();
  const Vector x = v2(1.0, 0.2), y = v2(-0.3, 0.9);
  const auto f = minkowski_sum_2d(flower_from_petals({x}, g), flower_from_petals({y}, g));
  EXPECT_TRUE(is_flower(f.body()).ok);
  // Oracle: sums of boundary samples of both disks, then the hull.
  std::vector<geo2::Point> pts;
  const int m = 360;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double a = 2 * std::numbers::pi * i / m, b = 2 * std::numbers::pi * j / m;
      const geo2::Point p = x / 2 + x.norm() / 2 * geo2::Point(std::cos(a), std::sin(a));
      const geo2::Point q = y / 2 + y.norm() / 2 * geo2::Point(std::cos(b), std::sin(b));
      pts.push_back(p + q);
    }
  std::vector<geo2::Point> ccw;
  for (auto i : geo2::convex_hull(pts)) ccw.push_back(pts[i]);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(f.radial()[i], ft::polygon_radial(ccw, g->direction(i)), 2e-4);
}

TEST(MinkowskiSum2D, NeedsPetals) {
  const auto g = grid720();
  try {
    minkowski_sum_2d(flower_of(ball(g)), flower_of(ball(g)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RepresentationRequired);
  }
}

TEST(Sandwich, InnerAndOuterApproximations) {
  Rng rng(12);
  const auto g = grid720();
  for (int t = 0; t < 5; ++t) {
    const auto s = ft::random_star(g, rng, 0.8);
    const auto k = convexify_support(s);
    const auto outer = radial_of_halfspace_body(k.support(), g);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_GE(outer.radial()[i], s.radial()[i] * (1 - 1e-15));
  }
}

TEST(Sandwich, GapShrinksFourfoldOnEllipses) {
  // Inner: hull of node points of the exact radial; outer: half-space body
  // of the exact supports.
  auto gap = [](int n) {
    const auto g = uniform_angle_grid(n);
    const auto e = ft::ellipse(g, 1.6, 0.7, 0.3);
    std::vector<double> r(g->size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double a = g->angle(i) - 0.3;
      r[i] = 1.0 / std::hypot(std::cos(a) / 1.6, std::sin(a) / 0.7);
    }
    const auto inner = cloud_support(*g, r);
    double worst = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, e.support()[i] - inner[i]);
    const auto outer = radial_of_halfspace_body(e.support(), g);
    const auto in_r = cloud_radial(*g, r);
    for (std::size_t i = 0; i < r.size(); ++i) worst = std::max(worst, outer.radial()[i] - in_r[i]);
    return worst;
  };
  const double a = gap(360), b = gap(720), c = gap(1440);
  EXPECT_NEAR(a / b, 4.0, 0.6);
  EXPECT_NEAR(b / c, 4.0, 0.6);
}

TEST(Sandwich, HullOfFlowerIsFlower) {
  Rng rng(13);
  const auto g = grid720();
  for (int t = 0; t < 10; ++t) {
    const auto f = flower_of(ft::random_body(g, rng));
    const StarBody hull(g, cloud_radial(*g, f.radial()));
    EXPECT_TRUE(is_flower(hull).ok);
  }
}

TEST(StarBody, RejectsInvalidSamples) {
  const auto g = grid720();
  std::vector<double> r(g->size(), 1.0);
  r[5] = 0.0;
  EXPECT_THROW(StarBody(g, r), Error);
  r[5] = std::nan("");
  EXPECT_THROW(StarBody(g, r), Error);
  EXPECT_THROW(StarBody(g, std::vector<double>(10, 1.0)), Error);
  try {
    radial_sum(flower_of(ball(g)), flower_of(ball(uniform_angle_grid(360))));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::GridMismatch);
  }
}

TEST(Petals, SynthesizedFromCorePolygon) {
  const auto g = grid720();
  const auto verts = regular_polygon_vertices(5, 1.0, 0.2);
  const auto f = flower_of(body_of_points(g, verts));
  const auto p = petals_or_synthesize(f);
  // Edges whose normal falls between nodes add one outer vertex each.
  EXPECT_GE(p.size(), 5u);
  EXPECT_LE(p.size(), 10u);
  const auto h = f.radial();
  for (const auto& x : p)
    for (std::size_t j = 0; j < g->size(); ++j) EXPECT_LE(x.dot(g->direction(j)), h[j] + 1e-12);
  const auto again = flower_from_petals(p, g);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(again.radial()[i], f.radial()[i], 1e-12);
}
