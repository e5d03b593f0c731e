#include "qlcoll/pde.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace qlcoll;

namespace {

constexpr double kPi = std::numbers::pi;

Jet2 jet1(double z, double p, double h) {
  Jet2 j = Jet2::zero(1);
  j.value = z;
  j.gradient(0) = p;
  j.hessian(0, 0) = h;
  return j;
}

Jet2 random_jet(std::mt19937_64& rng, int d) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Jet2 j = Jet2::zero(d);
  j.value = u(rng);
  for (int i = 0; i < d; ++i) j.gradient(i) = u(rng);
  for (int i = 0; i < d; ++i)
    for (int k = i; k < d; ++k) j.hessian(i, k) = j.hessian(k, i) = u(rng);
  return j;
}

Point random_point_in(std::mt19937_64& rng, const Domain& domain) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  while (true) {
    Point x = domain.lower();
    for (int i = 0; i < domain.dim(); ++i) x(i) += u(rng) * (domain.upper()(i) - domain.lower()(i));
    if (domain.contains(x)) return x;
  }
}

CoefficientField one_plus_z2() {
  CoefficientField f;
  f.a = [](const Point&, double z, const Point&) { return 1.0 + z * z; };
  f.dz_a = [](const Point&, double z, const Point&) { return 2.0 * z; };
  f.dp_a = [](const Point&, double, const Point& p) { return Point(Point::Zero(p.size())); };
  return f;
}

BoundaryNode node1(double x, double nu) {
  return BoundaryNode{Point::Constant(1, x), Point::Constant(1, nu), {}, x == 0.0 ? 0 : 1};
}

RobinCoefficients robin(double b_nu, double b_0, double b_t = 0.0) {
  RobinCoefficients r;
  r.b_nu = [b_nu](const Point&) { return b_nu; };
  r.b_0 = [b_0](const Point&) { return b_0; };
  r.b_t = [b_t](const Point& x) {
    return Point(Point::Constant(std::max<Eigen::Index>(x.size() - 1, 0), b_t));
  };
  return r;
}

}  // namespace

TEST(ApplyG, Examples) {
  QuasilinearOperator lap(1);
  lap.set(1, 1, CoefficientField::constant(1.0));
  EXPECT_DOUBLE_EQ(apply_G(lap, Point::Constant(1, 0.3), jet1(4.0, -1.0, 2.0)), 2.0);

  QuasilinearOperator mass(1);
  mass.set(0, 0, CoefficientField::constant(1.0));
  EXPECT_DOUBLE_EQ(apply_G(mass, Point::Constant(1, 0.3), jet1(3.0, 5.0, 7.0)), 3.0);

  QuasilinearOperator q(1);
  q.set(1, 1, one_plus_z2());
  EXPECT_DOUBLE_EQ(apply_G(q, Point::Constant(1, 0.3), jet1(2.0, 0.0, 3.0)), 15.0);
}

TEST(ApplyG, IndexZeroSignConvention) {
  // D^0 u = -u, so a (0, 1) entry contributes -a u' and (1, 0) contributes -a u'.
  QuasilinearOperator op(1);
  op.set(0, 1, CoefficientField::constant(2.0));
  EXPECT_DOUBLE_EQ(apply_G(op, Point::Constant(1, 0.0), jet1(1.0, 5.0, 0.0)), -10.0);
  QuasilinearOperator op2(1);
  op2.set(1, 0, CoefficientField::constant(2.0));
  EXPECT_DOUBLE_EQ(apply_G(op2, Point::Constant(1, 0.0), jet1(1.0, 5.0, 0.0)), -10.0);
}

TEST(ApplyG, LinearInJetForConstantCoefficients) {
  std::mt19937_64 rng(1);
  QuasilinearOperator op(2);
  op.set(0, 0, CoefficientField::constant(0.5));
  op.set(1, 1, CoefficientField::constant(2.0));
  op.set(1, 2, CoefficientField::constant(-0.3));
  op.set(2, 2, CoefficientField::constant(1.0));
  op.set(0, 2, CoefficientField::constant(0.7));
  const Point x = Point::Constant(2, 0.1);
  for (int t = 0; t < 20; ++t) {
    const Jet2 a = random_jet(rng, 2), b = random_jet(rng, 2);
    EXPECT_NEAR(apply_G(op, x, 1.5 * a + (-2.0) * b),
                1.5 * apply_G(op, x, a) - 2.0 * apply_G(op, x, b), 1e-12);
  }
}

TEST(ApplyGLinearized, ConstantCoefficientsReduceToG) {
  std::mt19937_64 rng(2);
  const auto p4 = make_problem("P4");
  for (int t = 0; t < 20; ++t) {
    const Jet2 base = random_jet(rng, 2), dir = random_jet(rng, 2);
    const Point x = random_point_in(rng, p4.domain);
    EXPECT_DOUBLE_EQ(apply_G_linearized(p4.op, x, base, dir), apply_G(p4.op, x, dir));
  }
}

TEST(ApplyGLinearized, ZeroDirection) {
  std::mt19937_64 rng(3);
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    const int d = p.domain.dim();
    EXPECT_EQ(apply_G_linearized(p.op, random_point_in(rng, p.domain), random_jet(rng, d), Jet2::zero(d)), 0.0);
  }
}

TEST(ApplyGLinearized, LinearInDirection) {
  std::mt19937_64 rng(4);
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    const int d = p.domain.dim();
    for (int t = 0; t < 10; ++t) {
      const Point x = random_point_in(rng, p.domain);
      const Jet2 base = random_jet(rng, d), a = random_jet(rng, d), b = random_jet(rng, d);
      const double lhs = apply_G_linearized(p.op, x, base, 0.3 * a + 2.0 * b);
      const double rhs = 0.3 * apply_G_linearized(p.op, x, base, a) + 2.0 * apply_G_linearized(p.op, x, base, b);
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs)));
    }
  }
}

TEST(ApplyGLinearized, GateauxConsistencyOnRegisteredProblems) {
  std::mt19937_64 rng(5);
  const double t = 1e-5;
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    const int d = p.domain.dim();
    for (int k = 0; k < 100; ++k) {
      const Point x = random_point_in(rng, p.domain);
      const Jet2 base = random_jet(rng, d), dir = random_jet(rng, d);
      const double fd = (apply_G(p.op, x, base + t * dir) - apply_G(p.op, x, base - t * dir)) / (2 * t);
      const double lin = apply_G_linearized(p.op, x, base, dir);
      EXPECT_NEAR(lin, fd, 1e-5 * std::max(1.0, std::abs(fd))) << name;
    }
  }
}

TEST(ApplyGLinearized, ModelProblemDirectionalDerivative) {
  QuasilinearOperator op(1);
  op.set(1, 1, one_plus_z2());
  const Point x = Point::Constant(1, 0.4);
  const Jet2 base = jet1(0.8, -0.3, 1.7), dir = jet1(0.5, 2.0, -1.1);
  // d/dt (1 + (z + t v)^2)(u'' + t v'') at t = 0.
  const double exact = 2 * 0.8 * 0.5 * 1.7 + (1 + 0.64) * -1.1;
  EXPECT_NEAR(apply_G_linearized(op, x, base, dir), exact, 1e-14);
  const double t = 1e-5;
  const double fd = (apply_G(op, x, base + t * dir) - apply_G(op, x, base - t * dir)) / (2 * t);
  EXPECT_NEAR(fd, exact, 1e-5 * std::abs(exact));
}

TEST(LinearizeG, MatchesLiteralLinearization) {
  std::mt19937_64 rng(6);
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    const int d = p.domain.dim();
    for (int k = 0; k < 20; ++k) {
      const Point x = random_point_in(rng, p.domain);
      const Jet2 base = random_jet(rng, d), dir = random_jet(rng, d);
      const double want = apply_G_linearized(p.op, x, base, dir);
      EXPECT_NEAR(linearize_G(p.op, x, base)(dir), want, 1e-12 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(ApplyB, Examples) {
  EXPECT_EQ(apply_B(BoundaryOperator::dirichlet(), node1(1.0, 1.0), jet1(7.0, 1.0, 1.0)), 7.0);

  BoundaryNode y{Point::Constant(2, 0.0), Point::Zero(2), {Point::Zero(2)}, 0};
  y.x << 1.0, 0.5;
  y.normal << 1.0, 0.0;
  y.tangents[0] << 0.0, 1.0;
  Jet2 j = Jet2::zero(2);
  j.gradient = y.normal;
  EXPECT_DOUBLE_EQ(apply_B(BoundaryOperator::neumann_robin(robin(1.0, 0.0)), y, j), 1.0);

  EXPECT_DOUBLE_EQ(apply_B(BoundaryOperator::neumann_robin(robin(1.0, 2.0)), node1(0.0, -1.0),
                           jet1(3.0, 5.0, 0.0)),
                   1.0);
}

TEST(ApplyB, TangentialTerm) {
  BoundaryNode y{Point::Zero(2), Point::Zero(2), {Point::Zero(2)}, 0};
  y.normal << 0.0, -1.0;
  y.tangents[0] << 1.0, 0.0;
  Jet2 j = Jet2::zero(2);
  j.value = 2.0;
  j.gradient << 3.0, 5.0;
  // 1*(-5) + 0.5*3 + 0.25*2
  EXPECT_DOUBLE_EQ(apply_B(BoundaryOperator::neumann_robin(robin(1.0, 0.25, 0.5)), y, j), -3.0);
}

TEST(ApplyB, DegenerateRobinCoefficient) {
  const auto bc = BoundaryOperator::neumann_robin(robin(0.0, 1.0));
  try {
    apply_B(bc, node1(0.0, -1.0), jet1(1.0, 1.0, 0.0));
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate Robin coefficient"), std::string::npos);
  }
}

TEST(ApplyB, MixedSwitchCoincidesWithPureOperators) {
  std::mt19937_64 rng(7);
  const auto r = robin(1.3, 0.4, -0.2);
  const auto nr = BoundaryOperator::neumann_robin(r);
  const auto dir = BoundaryOperator::dirichlet();
  const auto all_robin = BoundaryOperator::mixed(r, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  const auto all_dirichlet = BoundaryOperator::mixed(r, {{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  for (const auto& y : generate_boundary_points(Domain::rectangle(0, 1, 0, 1), 24)) {
    const Jet2 j = random_jet(rng, 2);
    EXPECT_EQ(apply_B(all_robin, y, j), apply_B(nr, y, j));
    EXPECT_EQ(apply_B(all_dirichlet, y, j), apply_B(dir, y, j));
  }
}

TEST(ApplyB, MixedMissingLabel) {
  const auto bc = BoundaryOperator::mixed(robin(1, 1), {{0, 1}});
  EXPECT_THROW(apply_B(bc, node1(1.0, 1.0), jet1(0, 0, 0)), Error);
  EXPECT_THROW(BoundaryOperator::mixed(robin(1, 1), {{0, 2}}), Error);
}

TEST(LinearizeB, MatchesApplyB) {
  std::mt19937_64 rng(8);
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    for (const auto& y : generate_boundary_points(p.domain, 12)) {
      const Jet2 j = random_jet(rng, p.domain.dim());
      EXPECT_NEAR(linearize_B(p.bc, y)(j), apply_B(p.bc, y, j), 1e-14);
    }
  }
}

TEST(ManufactureRhs, Examples) {
  QuasilinearOperator op(1);
  op.set(1, 1, one_plus_z2());
  const auto zero = [](const Point&) { return Jet2::zero(1); };
  const auto [f1, f2] = manufacture_rhs(op, BoundaryOperator::dirichlet(), zero);
  EXPECT_EQ(f1(Point::Constant(1, 0.3)), 0.0);
  EXPECT_EQ(f2(node1(1.0, 1.0)), 0.0);

  QuasilinearOperator lap(1);
  lap.set(1, 1, CoefficientField::constant(1.0));
  const auto square = [](const Point& x) { return jet1(x(0) * x(0), 2 * x(0), 2.0); };
  const auto [g1, g2] = manufacture_rhs(lap, BoundaryOperator::dirichlet(), square);
  for (double x : {0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(g1(Point::Constant(1, x)), 2.0);
  EXPECT_DOUBLE_EQ(g2(node1(1.0, 1.0)), 1.0);
}

TEST(ManufactureRhs, DiskHandDerivation) {
  QuasilinearOperator op(2);
  op.set(1, 1, one_plus_z2());
  op.set(2, 2, one_plus_z2());
  const auto truth = [](const Point& x) {
    const double s1 = std::sin(kPi * x(0)), c1 = std::cos(kPi * x(0));
    const double s2 = std::sin(kPi * x(1)), c2 = std::cos(kPi * x(1));
    Jet2 j = Jet2::zero(2);
    j.value = s1 * s2;
    j.gradient << kPi * c1 * s2, kPi * s1 * c2;
    j.hessian << -kPi * kPi * s1 * s2, kPi * kPi * c1 * c2, kPi * kPi * c1 * c2, -kPi * kPi * s1 * s2;
    return j;
  };
  const auto [f1, f2] = manufacture_rhs(op, BoundaryOperator::dirichlet(), truth);
  std::mt19937_64 rng(9);
  for (int k = 0; k < 20; ++k) {
    const Point x = random_point_in(rng, Domain::unit_disk());
    const double u = std::sin(kPi * x(0)) * std::sin(kPi * x(1));
    const double want = (1 + u * u) * (-2 * kPi * kPi * u);
    EXPECT_NEAR(f1(x), want, 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST(Problems, BuiltinsValidate) {
  for (const auto& name : builtin_problem_names()) {
    const auto p = make_problem(name);
    EXPECT_EQ(p.name, name);
    EXPECT_TRUE(p.u_star.has_value());
    EXPECT_NO_THROW(validate_problem(p, 11));
  }
  EXPECT_TRUE(make_problem("P4").is_linear());
  EXPECT_FALSE(make_problem("P1").is_linear());
  EXPECT_THROW(make_problem("P9"), Error);
}

TEST(Problems, WrongDerivativeIsRejected) {
  auto p = make_problem("P1");
  CoefficientField bad = one_plus_z2();
  bad.dz_a = [](const Point&, double z, const Point&) { return 3.0 * z; };
  p.op.set(1, 1, bad);
  EXPECT_THROW(validate_problem(p), Error);
}

TEST(Problems, InconsistentDataIsRejected) {
  auto p = make_problem("P3");
  p.f1 = [](const Point&) { return 0.0; };
  EXPECT_THROW(validate_problem(p), Error);
}

TEST(Problems, WithBoundaryRemanufacturesData) {
  const auto p4 = make_problem("P4");
  const auto dir = with_boundary(p4, BoundaryOperator::dirichlet());
  EXPECT_NO_THROW(validate_problem(dir));
  for (const auto& y : generate_boundary_points(p4.domain, 16))
    EXPECT_DOUBLE_EQ(dir.f2(y), (*p4.u_star)(y.x).value);
}
