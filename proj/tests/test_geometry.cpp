#include "qlcoll/geometry.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace qlcoll;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}
PointSet line(std::initializer_list<double> xs) {
  std::vector<Point> pts;
  for (double x : xs) pts.push_back(p1(x));
  return PointSet(1, pts);
}

}  // namespace

TEST(Domain, RectangleRejectsEmptySide) {
  EXPECT_THROW(Domain::rectangle(1.0, 0.0, 0.0, 1.0), Error);
  EXPECT_THROW(Domain::rectangle(0.0, 1.0, 2.0, 2.0), Error);
}

TEST(Domain, ContainsAndC1Flag) {
  EXPECT_TRUE(Domain::unit_disk().contains(p2(0.6, 0.6)));
  EXPECT_FALSE(Domain::unit_disk().contains(p2(0.8, 0.8)));
  EXPECT_TRUE(Domain::unit_interval().has_c1_boundary());
  EXPECT_FALSE(Domain::rectangle(0, 1, 0, 1).has_c1_boundary());
}

TEST(InteriorPoints, IntervalGrid) {
  const auto ps = generate_interior_points(Domain::unit_interval(), 3, PointStrategy::Grid, 0);
  ASSERT_EQ(ps.size(), 3u);
  EXPECT_DOUBLE_EQ(ps[0](0), 0.25);
  EXPECT_DOUBLE_EQ(ps[1](0), 0.5);
  EXPECT_DOUBLE_EQ(ps[2](0), 0.75);
}

TEST(InteriorPoints, SquareGridIsLattice) {
  const auto ps = generate_interior_points(Domain::rectangle(0, 1, 0, 1), 9, PointStrategy::Grid, 0);
  ASSERT_EQ(ps.size(), 9u);
  std::vector<std::pair<double, double>> got;
  for (const auto& p : ps) got.emplace_back(p(0), p(1));
  std::sort(got.begin(), got.end());
  std::vector<std::pair<double, double>> want;
  for (double a : {0.25, 0.5, 0.75})
    for (double b : {0.25, 0.5, 0.75}) want.emplace_back(a, b);
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].first, want[i].first, 1e-15);
    EXPECT_NEAR(got[i].second, want[i].second, 1e-15);
  }
}

TEST(InteriorPoints, HaltonDiskSinglePoint) {
  const auto ps = generate_interior_points(Domain::unit_disk(), 1, PointStrategy::Halton, 0);
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_LT(ps[0].norm(), 1.0);
}

TEST(InteriorPoints, StrictlyInsideAndDeterministic) {
  for (auto strategy : {PointStrategy::Grid, PointStrategy::Halton}) {
    const auto a = generate_interior_points(Domain::unit_disk(), 50, strategy, 7);
    const auto b = generate_interior_points(Domain::unit_disk(), 50, strategy, 7);
    ASSERT_EQ(a.size(), b.size());
    EXPECT_LE(a.size(), 50u);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_LT(a[i].norm(), 1.0 - 1e-9);
      EXPECT_EQ(a[i], b[i]);
    }
  }
  EXPECT_EQ(generate_interior_points(Domain::unit_disk(), 50, PointStrategy::Halton, 0).size(), 50u);
}

TEST(InteriorPoints, EmptyRequestFails) {
  EXPECT_THROW(generate_interior_points(Domain::unit_interval(), 0, PointStrategy::Grid, 0), Error);
}

TEST(BoundaryPoints, IntervalEndpoints) {
  const auto bs = generate_boundary_points(Domain::unit_interval(), 7);
  ASSERT_EQ(bs.size(), 2u);
  EXPECT_EQ(bs[0].x(0), 0.0);
  EXPECT_EQ(bs[0].normal(0), -1.0);
  EXPECT_EQ(bs[1].x(0), 1.0);
  EXPECT_EQ(bs[1].normal(0), 1.0);
  EXPECT_EQ(bs[0].label, 0);
  EXPECT_EQ(bs[1].label, 1);
}

TEST(BoundaryPoints, DiskAngles) {
  const auto bs = generate_boundary_points(Domain::unit_disk(), 4);
  ASSERT_EQ(bs.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    const double t = k * std::numbers::pi / 2;
    EXPECT_NEAR(bs[k].x(0), std::cos(t), 1e-15);
    EXPECT_NEAR(bs[k].x(1), std::sin(t), 1e-15);
    EXPECT_NEAR((bs[k].normal - bs[k].x).norm(), 0.0, 1e-15);
  }
}

TEST(BoundaryPoints, SquareCornersWithCounterclockwiseNormals) {
  const auto bs = generate_boundary_points(Domain::rectangle(0, 1, 0, 1), 4);
  ASSERT_EQ(bs.size(), 4u);
  // Corner (0,0) starts the bottom edge, (1,0) the right edge, and so on.
  const Point want_x[4] = {p2(0, 0), p2(1, 0), p2(1, 1), p2(0, 1)};
  const Point want_n[4] = {p2(0, -1), p2(1, 0), p2(0, 1), p2(-1, 0)};
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(bs[k].x, want_x[k]);
    EXPECT_EQ(bs[k].normal, want_n[k]);
    EXPECT_EQ(bs[k].label, k);
  }
}

TEST(BoundaryPoints, FramesOrthonormalOnBoundary) {
  for (const auto& domain : {Domain::unit_disk(), Domain::rectangle(-1, 2, 0, 0.5)}) {
    const auto bs = generate_boundary_points(domain, 37);
    EXPECT_EQ(bs.size(), 37u);
    for (const auto& node : bs) {
      ASSERT_EQ(node.tangents.size(), 1u);
      EXPECT_NEAR(node.normal.norm(), 1.0, 1e-12);
      EXPECT_NEAR(node.tangents[0].norm(), 1.0, 1e-12);
      EXPECT_NEAR(node.normal.dot(node.tangents[0]), 0.0, 1e-12);
      // Tangent is the normal rotated by +90 degrees.
      EXPECT_NEAR(node.tangents[0](0), -node.normal(1), 1e-15);
      EXPECT_NEAR(node.tangents[0](1), node.normal(0), 1e-15);
      EXPECT_LE(domain.boundary_defect(node.x), 1e-12);
    }
  }
}

TEST(BoundaryPoints, ZeroCountFails) {
  EXPECT_THROW(generate_boundary_points(Domain::unit_disk(), 0), Error);
}

TEST(Separation, Examples) {
  EXPECT_DOUBLE_EQ(separation_distance(line({0.0, 1.0})), 0.5);
  EXPECT_DOUBLE_EQ(separation_distance(line({0.0, 0.5, 1.0})), 0.25);
  EXPECT_DOUBLE_EQ(separation_distance(PointSet(2, {p2(0, 0), p2(3, 4)})), 2.5);
  EXPECT_THROW(separation_distance(line({0.3})), Error);
}

TEST(Separation, PermutationAndScaling) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Point> pts;
  for (int i = 0; i < 30; ++i) pts.push_back(p2(u(rng), u(rng)));
  const double q = separation_distance(PointSet(2, pts));
  auto shuffled = pts;
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_EQ(separation_distance(PointSet(2, shuffled)), q);
  for (auto& p : pts) p *= 4.0;
  EXPECT_NEAR(separation_distance(PointSet(2, pts)), 4.0 * q, 1e-14);
}

TEST(FillDistance, Examples) {
  const auto I = Domain::unit_interval();
  EXPECT_NEAR(fill_distance(line({0.5}), I, 1001), 0.5, 1e-3);
  EXPECT_NEAR(fill_distance(line({0.0, 0.5, 1.0}), I), 0.25, 1e-3);
  EXPECT_NEAR(fill_distance(PointSet(2, {p2(0, 0)}), Domain::unit_disk(), 100), 1.0, 2e-2);
  EXPECT_THROW(fill_distance(PointSet(1, {}), I), Error);
}

TEST(FillDistance, MonotoneUnderAddingPoints) {
  const auto D = Domain::unit_disk();
  const auto all = generate_interior_points(D, 40, PointStrategy::Halton, 1);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= all.size(); n += 3) {
    const PointSet sub(2, std::vector<Point>(all.points().begin(), all.points().begin() + n));
    const double h = fill_distance(sub, D, 60);
    EXPECT_LE(h, prev);
    prev = h;
  }
}

TEST(FillDistance, NestedIntervalGrids) {
  // x_k = k / 2^j, k = 0..2^j, are nested under j -> j + 1.
  const auto I = Domain::unit_interval();
  double h_prev = 0, q_prev = 0;
  for (int j = 2; j <= 6; ++j) {
    std::vector<Point> pts;
    const int n = 1 << j;
    for (int k = 0; k <= n; ++k) pts.push_back(p1(static_cast<double>(k) / n));
    const PointSet ps(1, pts);
    const double h = fill_distance(ps, I), q = separation_distance(ps);
    if (j > 2) {
      EXPECT_NEAR(h / h_prev, 0.5, 0.025);
      EXPECT_EQ(q, 0.5 * q_prev);
    }
    h_prev = h;
    q_prev = q;
  }
}

TEST(Uniformity, Examples) {
  const auto I = Domain::unit_interval();
  EXPECT_NEAR(quasi_uniformity_ratio(line({0.0, 0.5, 1.0}), I), 1.0, 1e-9);
  EXPECT_NEAR(quasi_uniformity_ratio(line({0.0, 0.1, 1.0}), I), 9.0, 0.1);
  const auto R = Domain::rectangle(0, 2, 0, 1);
  std::vector<Point> grid;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 4; ++j) grid.push_back(p2(0.25 * i, 0.25 * j));
  EXPECT_LE(quasi_uniformity_ratio(PointSet(2, grid), R), std::sqrt(2.0) * (1 + 1e-9));
}

TEST(ProbeGrid, CoversClosedDomain) {
  EXPECT_GE(probe_grid(Domain::unit_interval(), 50).size(), 50u);
  const auto disk = probe_grid(Domain::unit_disk(), 40);
  EXPECT_GE(disk.size(), 1600u);
  for (const auto& p : disk) EXPECT_LE(p.norm(), 1.0 + 1e-12);
}

TEST(Csv, PointsRoundTripBitExact) {
  const auto ps = generate_interior_points(Domain::unit_disk(), 17, PointStrategy::Halton, 4);
  std::stringstream s;
  write_points_csv(s, ps);
  const auto back = read_points_csv(s);
  ASSERT_EQ(back.size(), ps.size());
  ASSERT_EQ(back.dim(), 2);
  for (std::size_t i = 0; i < ps.size(); ++i) EXPECT_EQ(back[i], ps[i]);
}

TEST(Csv, BoundaryRoundTripBitExact) {
  const auto bs = generate_boundary_points(Domain::rectangle(0, 1, 0, 3), 11);
  std::stringstream s;
  write_boundary_csv(s, bs);
  const auto back = read_boundary_csv(s);
  ASSERT_EQ(back.size(), bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) {
    EXPECT_EQ(back[i].x, bs[i].x);
    EXPECT_EQ(back[i].normal, bs[i].normal);
    EXPECT_EQ(back[i].tangents[0], bs[i].tangents[0]);
    EXPECT_EQ(back[i].label, bs[i].label);
  }
}

TEST(Halton, RadicalInverse) {
  EXPECT_DOUBLE_EQ(radical_inverse(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(radical_inverse(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(radical_inverse(1, 3), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(radical_inverse(5, 3), 7.0 / 9.0);
}

TEST(Strategy, ParseNames) {
  EXPECT_EQ(parse_point_strategy("grid"), PointStrategy::Grid);
  EXPECT_EQ(parse_point_strategy("halton"), PointStrategy::Halton);
  EXPECT_THROW(parse_point_strategy("sobol"), Error);
}
