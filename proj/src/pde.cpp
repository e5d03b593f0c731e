#include "qlcoll/pde.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace qlcoll {

namespace {

// D^i D^j u with D^0 u = -u.
double second_derivative(const Jet2& j, int i, int k) {
  if (i == 0 && k == 0) return j.value;
  if (i == 0) return -j.gradient(k - 1);
  if (k == 0) return -j.gradient(i - 1);
  return j.hessian(i - 1, k - 1);
}

}  // namespace

CoefficientField CoefficientField::constant(double value) {
  CoefficientField f;
  f.a = [value](const Point&, double, const Point&) { return value; };
  f.dz_a = [](const Point&, double, const Point&) { return 0.0; };
  f.dp_a = [](const Point&, double, const Point& p) { return Point(Point::Zero(p.size())); };
  f.solution_dependent = false;
  return f;
}

QuasilinearOperator::QuasilinearOperator(int dim)
    : dim_(dim), entries_(static_cast<std::size_t>((dim + 1) * (dim + 1))) {
  if (dim < 1 || dim > kMaxDim) throw Error("operator dimension out of range");
}

void QuasilinearOperator::set(int i, int j, CoefficientField field) {
  if (i < 0 || j < 0 || i > dim_ || j > dim_) throw Error("coefficient index out of range");
  if (!field.a || !field.dz_a || !field.dp_a)
    throw Error("coefficient field needs a, dz_a and dp_a");
  entries_[static_cast<std::size_t>(i * (dim_ + 1) + j)] = std::move(field);
}

const CoefficientField* QuasilinearOperator::get(int i, int j) const {
  const auto& e = entries_[static_cast<std::size_t>(i * (dim_ + 1) + j)];
  return e ? &*e : nullptr;
}

bool QuasilinearOperator::is_linear() const {
  for (const auto& e : entries_)
    if (e && e->solution_dependent) return false;
  return true;
}

BoundaryOperator BoundaryOperator::dirichlet() { return BoundaryOperator{}; }

BoundaryOperator BoundaryOperator::neumann_robin(RobinCoefficients coeffs, double b_min) {
  if (!coeffs.b_nu) throw Error("Robin operator needs b_nu");
  if (!(b_min > 0.0)) throw Error("b_min must be positive");
  BoundaryOperator b;
  b.kind_ = BoundaryKind::NeumannRobin;
  b.robin_ = std::move(coeffs);
  b.b_min_ = b_min;
  return b;
}

BoundaryOperator BoundaryOperator::mixed(RobinCoefficients coeffs, std::map<int, int> delta,
                                         double b_min) {
  for (const auto& [label, v] : delta)
    if (v != 0 && v != 1) throw Error("switch function values must be 0 or 1");
  BoundaryOperator b = neumann_robin(std::move(coeffs), b_min);
  b.kind_ = BoundaryKind::Mixed;
  b.delta_ = std::move(delta);
  return b;
}

bool BoundaryOperator::uses_robin(int label) const {
  switch (kind_) {
    case BoundaryKind::Dirichlet:
      return false;
    case BoundaryKind::NeumannRobin:
      return true;
    case BoundaryKind::Mixed: {
      const auto it = delta_.find(label);
      if (it == delta_.end())
        throw Error("switch function undefined for boundary label " + std::to_string(label));
      return it->second == 1;
    }
  }
  return false;
}

double apply_G(const QuasilinearOperator& op, const Point& x, const Jet2& jet) {
  double sum = 0.0;
  for (int i = 0; i <= op.dim(); ++i) {
    for (int k = 0; k <= op.dim(); ++k) {
      const auto* f = op.get(i, k);
      if (!f) continue;
      sum += f->a(x, jet.value, jet.gradient) * second_derivative(jet, i, k);
    }
  }
  return sum;
}

double apply_G_linearized(const QuasilinearOperator& op, const Point& x, const Jet2& base,
                          const Jet2& dir) {
  double sum = 0.0;
  for (int i = 0; i <= op.dim(); ++i) {
    for (int k = 0; k <= op.dim(); ++k) {
      const auto* f = op.get(i, k);
      if (!f) continue;
      sum += f->a(x, base.value, base.gradient) * second_derivative(dir, i, k);
      if (f->solution_dependent) {
        const double coeff_change = dir.value * f->dz_a(x, base.value, base.gradient) +
                                    dir.gradient.dot(f->dp_a(x, base.value, base.gradient));
        sum += second_derivative(base, i, k) * coeff_change;
      }
    }
  }
  return sum;
}

double apply_B(const BoundaryOperator& bc, const BoundaryNode& node, const Jet2& jet) {
  if (!bc.uses_robin(node.label)) return jet.value;
  const auto& r = bc.robin();
  const double b_nu = r.b_nu(node.x);
  if (!(b_nu > bc.b_min())) throw Error("degenerate Robin coefficient");
  double out = b_nu * jet.gradient.dot(node.normal);
  if (r.b_t) {
    const Point bt = r.b_t(node.x);
    for (std::size_t i = 0; i < node.tangents.size(); ++i)
      out += bt(static_cast<Eigen::Index>(i)) * jet.gradient.dot(node.tangents[i]);
  }
  if (r.b_0) out += r.b_0(node.x) * jet.value;
  return out;
}

JetFunctional linearize_G(const QuasilinearOperator& op, const Point& x, const Jet2& base) {
  const int d = op.dim();
  JetFunctional w{0.0, Point::Zero(d), SmallMatrix::Zero(d, d)};
  for (int i = 0; i <= d; ++i) {
    for (int k = 0; k <= d; ++k) {
      const auto* f = op.get(i, k);
      if (!f) continue;
      const double a = f->a(x, base.value, base.gradient);
      if (i == 0 && k == 0) {
        w.value_weight += a;
      } else if (i == 0 || k == 0) {
        w.gradient_weight(i + k - 1) -= a;
      } else {
        w.hessian_weight(i - 1, k - 1) += a;
      }
      if (f->solution_dependent) {
        const double dd = second_derivative(base, i, k);
        w.value_weight += dd * f->dz_a(x, base.value, base.gradient);
        w.gradient_weight += dd * f->dp_a(x, base.value, base.gradient);
      }
    }
  }
  return w;
}

JetFunctional linearize_B(const BoundaryOperator& bc, const BoundaryNode& node) {
  const int d = static_cast<int>(node.x.size());
  JetFunctional w{0.0, Point::Zero(d), SmallMatrix::Zero(d, d)};
  if (!bc.uses_robin(node.label)) {
    w.value_weight = 1.0;
    return w;
  }
  const auto& r = bc.robin();
  const double b_nu = r.b_nu(node.x);
  if (!(b_nu > bc.b_min())) throw Error("degenerate Robin coefficient");
  w.gradient_weight = b_nu * node.normal;
  if (r.b_t) {
    const Point bt = r.b_t(node.x);
    for (std::size_t i = 0; i < node.tangents.size(); ++i)
      w.gradient_weight += bt(static_cast<Eigen::Index>(i)) * node.tangents[i];
  }
  if (r.b_0) w.value_weight = r.b_0(node.x);
  return w;
}

std::pair<InteriorData, BoundaryData> manufacture_rhs(const QuasilinearOperator& op,
                                                      const BoundaryOperator& bc,
                                                      const JetField& u_star) {
  InteriorData f1 = [op, u_star](const Point& x) { return apply_G(op, x, u_star(x)); };
  BoundaryData f2 = [bc, u_star](const BoundaryNode& y) { return apply_B(bc, y, u_star(y.x)); };
  return {std::move(f1), std::move(f2)};
}

void validate_problem(const ProblemInstance& problem, std::uint64_t seed) {
  const auto& op = problem.op;
  const int d = op.dim();
  if (d != problem.domain.dim()) throw Error("operator dimension does not match the domain");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> sym(-2.0, 2.0);
  const Point lo = problem.domain.lower();
  const Point hi = problem.domain.upper();
  auto random_interior = [&] {
    while (true) {
      Point x(d);
      for (int k = 0; k < d; ++k) x(k) = lo(k) + (hi(k) - lo(k)) * unit(rng);
      if (problem.domain.contains(x)) return x;
    }
  };

  constexpr double kStep = 1e-6;
  constexpr double kTol = 1e-5;
  auto close = [](double analytic, double fd) {
    return std::abs(analytic - fd) <= kTol * std::max(1.0, std::abs(analytic));
  };

  for (int probe = 0; probe < 20; ++probe) {
    const Point x = random_interior();
    const double z = sym(rng);
    Point p(d);
    for (int k = 0; k < d; ++k) p(k) = sym(rng);
    for (int i = 0; i <= d; ++i) {
      for (int k = 0; k <= d; ++k) {
        const auto* f = op.get(i, k);
        if (!f) continue;
        const std::string where = "a_" + std::to_string(i) + std::to_string(k);
        const double fd_z = (f->a(x, z + kStep, p) - f->a(x, z - kStep, p)) / (2 * kStep);
        if (!close(f->dz_a(x, z, p), fd_z))
          throw Error("coefficient " + where + ": dz_a disagrees with finite differences");
        const Point dp = f->dp_a(x, z, p);
        for (int m = 0; m < d; ++m) {
          Point pp = p, pm = p;
          pp(m) += kStep;
          pm(m) -= kStep;
          const double fd_p = (f->a(x, z, pp) - f->a(x, z, pm)) / (2 * kStep);
          if (!close(dp(m), fd_p))
            throw Error("coefficient " + where + ": dp_a disagrees with finite differences");
        }
      }
    }
  }

  if (!problem.u_star) return;
  const auto [g1, g2] = manufacture_rhs(op, problem.bc, *problem.u_star);
  auto consistent = [](double a, double b) { return std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(b)); };
  for (int probe = 0; probe < 20; ++probe) {
    const Point x = random_interior();
    if (!consistent(problem.f1(x), g1(x)))
      throw Error("interior data is inconsistent with the manufactured solution");
  }
  for (const auto& node : generate_boundary_points(problem.domain, 16))
    if (!consistent(problem.f2(node), g2(node)))
      throw Error("boundary data is inconsistent with the manufactured solution");
}

namespace {

constexpr double kPi = std::numbers::pi;

Jet2 sine_1d(const Point& x) {
  Jet2 j = Jet2::zero(1);
  j.value = std::sin(kPi * x(0));
  j.gradient(0) = kPi * std::cos(kPi * x(0));
  j.hessian(0, 0) = -kPi * kPi * j.value;
  return j;
}

Jet2 exp_cos_2d(const Point& x) {
  const double e = 0.2 * std::exp(x(0));
  const double c = std::cos(x(1));
  const double s = std::sin(x(1));
  Jet2 j = Jet2::zero(2);
  j.value = e * c;
  j.gradient << e * c, -e * s;
  j.hessian << e * c, -e * s, -e * s, -e * c;
  return j;
}

Jet2 square_truth(const Point& x) {
  const double s1 = std::sin(kPi * x(0)), c1 = std::cos(kPi * x(0));
  const double s2 = std::sin(kPi * x(1)), c2 = std::cos(kPi * x(1));
  Jet2 j = Jet2::zero(2);
  j.value = s1 * s2 + x(0) + 0.5 * x(1);
  j.gradient << kPi * c1 * s2 + 1.0, kPi * s1 * c2 + 0.5;
  const double pp = kPi * kPi;
  j.hessian << -pp * s1 * s2, pp * c1 * c2, pp * c1 * c2, -pp * s1 * s2;
  return j;
}

CoefficientField one_plus_z_squared() {
  CoefficientField f;
  f.a = [](const Point&, double z, const Point&) { return 1.0 + z * z; };
  f.dz_a = [](const Point&, double z, const Point&) { return 2.0 * z; };
  f.dp_a = [](const Point&, double, const Point& p) { return Point(Point::Zero(p.size())); };
  return f;
}

CoefficientField minimal_surface() {
  CoefficientField f;
  f.a = [](const Point&, double, const Point& p) { return 1.0 / std::sqrt(1.0 + p.squaredNorm()); };
  f.dz_a = [](const Point&, double, const Point&) { return 0.0; };
  f.dp_a = [](const Point&, double, const Point& p) {
    return Point(-std::pow(1.0 + p.squaredNorm(), -1.5) * p);
  };
  return f;
}

RobinCoefficients unit_robin() {
  RobinCoefficients r;
  r.b_nu = [](const Point&) { return 1.0; };
  r.b_0 = [](const Point&) { return 1.0; };
  r.b_t = [](const Point& x) { return Point(Point::Zero(std::max<Eigen::Index>(x.size() - 1, 0))); };
  return r;
}

ProblemInstance assemble(std::string name, Domain domain, QuasilinearOperator op,
                         BoundaryOperator bc, JetField truth) {
  auto [f1, f2] = manufacture_rhs(op, bc, truth);
  ProblemInstance p{std::move(name), domain, std::move(op), std::move(bc),
                    std::move(f1), std::move(f2), std::move(truth)};
  return p;
}

}  // namespace

std::vector<std::string> builtin_problem_names() { return {"P1", "P2", "P3", "P4"}; }

ProblemInstance make_problem(const std::string& name) {
  if (name == "P1" || name == "P3") {
    QuasilinearOperator op(1);
    op.set(1, 1, one_plus_z_squared());
    auto bc = name == "P1" ? BoundaryOperator::dirichlet() : BoundaryOperator::neumann_robin(unit_robin());
    return assemble(name, Domain::unit_interval(), std::move(op), std::move(bc), sine_1d);
  }
  if (name == "P2") {
    QuasilinearOperator op(2);
    op.set(1, 1, minimal_surface());
    op.set(2, 2, minimal_surface());
    return assemble(name, Domain::unit_disk(), std::move(op), BoundaryOperator::dirichlet(),
                    exp_cos_2d);
  }
  if (name == "P4") {
    QuasilinearOperator op(2);
    op.set(1, 1, CoefficientField::constant(1.0));
    op.set(2, 2, CoefficientField::constant(1.0));
    auto bc = BoundaryOperator::mixed(unit_robin(), {{0, 0}, {1, 1}, {2, 1}, {3, 0}});
    return assemble(name, Domain::rectangle(0.0, 1.0, 0.0, 1.0), std::move(op), std::move(bc),
                    square_truth);
  }
  std::string known;
  for (const auto& n : builtin_problem_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error("unknown problem '" + name + "' (built-in: " + known + ")");
}

ProblemInstance with_boundary(const ProblemInstance& problem, BoundaryOperator bc) {
  if (!problem.u_star) throw Error("changing the boundary operator needs a manufactured solution");
  ProblemInstance out = problem;
  out.bc = std::move(bc);
  out.f2 = manufacture_rhs(out.op, out.bc, *out.u_star).second;
  return out;
}

}  // namespace qlcoll
