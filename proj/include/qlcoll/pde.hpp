#pragma once

#include "qlcoll/geometry.hpp"
#include "qlcoll/types.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qlcoll {

/// Coefficient a(x, z, p) of the quasilinear operator together with its
/// partial derivatives in z and p.
struct CoefficientField {
  using Scalar = std::function<double(const Point& x, double z, const Point& p)>;
  using Gradient = std::function<Point(const Point& x, double z, const Point& p)>;

  Scalar a;
  Scalar dz_a;
  Gradient dp_a;
  // False when a does not depend on (z, p); lets callers detect linear problems.
  bool solution_dependent = true;

  static CoefficientField constant(double value);
};

/// G u = sum_{i,j=0..d} a_ij(x, u, grad u) D^i D^j u with D^k = d/dx_k for
/// k >= 1 and D^0 u = -u. Hence a_00 contributes +a_00 u and a mixed
/// (0, j) entry contributes -a_0j du/dx_j. Missing entries are zero.
class QuasilinearOperator {
 public:
  explicit QuasilinearOperator(int dim);

  int dim() const { return dim_; }
  void set(int i, int j, CoefficientField field);
  const CoefficientField* get(int i, int j) const;
  /// True when no coefficient depends on the solution.
  bool is_linear() const;

 private:
  int dim_;
  std::vector<std::optional<CoefficientField>> entries_;
};

enum class BoundaryKind { Dirichlet, NeumannRobin, Mixed };

struct RobinCoefficients {
  std::function<double(const Point&)> b_nu;
  std::function<double(const Point&)> b_0;
  // d-1 tangential coefficients; may be empty for "no tangential terms".
  std::function<Point(const Point&)> b_t;
};

/// Dirichlet, Neumann/Robin
///   B u = b_nu du/dnu + sum_i b_i du/dt^i + b_0 u,
/// or the mixed switch delta(label) B_NR + (1 - delta(label)) B_D.
class BoundaryOperator {
 public:
  static constexpr double kDefaultBMin = 1e-6;

  static BoundaryOperator dirichlet();
  static BoundaryOperator neumann_robin(RobinCoefficients coeffs, double b_min = kDefaultBMin);
  static BoundaryOperator mixed(RobinCoefficients coeffs, std::map<int, int> delta,
                                double b_min = kDefaultBMin);

  BoundaryKind kind() const { return kind_; }
  const RobinCoefficients& robin() const { return robin_; }
  const std::map<int, int>& delta() const { return delta_; }
  double b_min() const { return b_min_; }

  /// Whether the Robin branch applies at a node with this label.
  bool uses_robin(int label) const;

 private:
  BoundaryKind kind_ = BoundaryKind::Dirichlet;
  RobinCoefficients robin_;
  std::map<int, int> delta_;
  double b_min_ = kDefaultBMin;
};

using JetField = std::function<Jet2(const Point&)>;
using InteriorData = std::function<double(const Point&)>;
using BoundaryData = std::function<double(const BoundaryNode&)>;

struct ProblemInstance {
  std::string name;
  Domain domain = Domain::unit_interval();
  QuasilinearOperator op{1};
  BoundaryOperator bc;
  InteriorData f1;
  BoundaryData f2;
  std::optional<JetField> u_star;

  bool is_linear() const { return op.is_linear(); }
};

double apply_G(const QuasilinearOperator& op, const Point& x, const Jet2& jet);

/// Formal linearization of G at the base jet applied to the direction jet.
double apply_G_linearized(const QuasilinearOperator& op, const Point& x, const Jet2& base,
                          const Jet2& dir);

double apply_B(const BoundaryOperator& bc, const BoundaryNode& node, const Jet2& jet);

/// Linear functional v -> w0 v + w1 . grad v + <W2, hess v> on jets.
struct JetFunctional {
  double value_weight = 0.0;
  Point gradient_weight;
  SmallMatrix hessian_weight;

  double operator()(const Jet2& v) const {
    return value_weight * v.value + gradient_weight.dot(v.gradient) +
           (hessian_weight.array() * v.hessian.array()).sum();
  }
};

/// apply_G_linearized(op, x, base, .) collected into weights once per point.
JetFunctional linearize_G(const QuasilinearOperator& op, const Point& x, const Jet2& base);
/// apply_B as a functional (boundary operators are linear).
JetFunctional linearize_B(const BoundaryOperator& bc, const BoundaryNode& node);

/// Right-hand sides that make u_star an exact solution.
std::pair<InteriorData, BoundaryData> manufacture_rhs(const QuasilinearOperator& op,
                                                      const BoundaryOperator& bc,
                                                      const JetField& u_star);

/// Checks supplied coefficient derivatives against central differences of
/// a in (z, p), and f1/f2 against u_star when one is given. Throws on failure.
void validate_problem(const ProblemInstance& problem, std::uint64_t seed = 0);

// Built-in manufactured problems:
//   P1  1D, a_11 = 1 + z^2, Dirichlet, u* = sin(pi x)
//   P2  unit disk, a_ii = (1 + |p|^2)^(-1/2), Dirichlet, u* = 0.2 exp(x1) cos(x2)
//   P3  P1 with Robin b_nu = 1, b_0 = 1 at both endpoints
//   P4  unit square, Poisson, Dirichlet on edges 0 and 3, Robin on edges 1 and 2
std::vector<std::string> builtin_problem_names();
ProblemInstance make_problem(const std::string& name);

/// Same operator and truth with a different boundary operator; the boundary
/// data is manufactured again from u_star.
ProblemInstance with_boundary(const ProblemInstance& problem, BoundaryOperator bc);

}  // namespace qlcoll
