#pragma once

#include "qlcoll/geometry.hpp"
#include "qlcoll/pde.hpp"
#include "qlcoll/trialspace.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlcoll {

/// Pointwise test map: interior collocation points x_1..x_M and boundary
/// points y_1..y_N; boundary rows are scaled by boundary_weight.
class TestMap {
 public:
  TestMap(PointSet interior, BoundaryPointSet boundary, double boundary_weight = 1.0);

  const PointSet& interior() const { return interior_; }
  const BoundaryPointSet& boundary() const { return boundary_; }
  double boundary_weight() const { return boundary_weight_; }
  int rows() const { return static_cast<int>(interior_.size() + boundary_.size()); }

 private:
  PointSet interior_;
  BoundaryPointSet boundary_;
  double boundary_weight_;
};

struct OversamplingRule {
  double rho = 2.0;
  double beta = 1.0;  // 1 or 2
};

/// Splits a budget of ceil(rho * trial_dim^beta) collocation points into
/// boundary (2 in 1D, ceil(2 sqrt(total)) in 2D) and interior points.
TestMap build_test_map(const Domain& domain, int trial_dim, OversamplingRule rule,
                       PointStrategy strategy, std::uint64_t seed, double boundary_weight = 1.0);

/// Explicit interior/boundary counts, bypassing the budget heuristic.
TestMap build_test_map_counts(const Domain& domain, int interior_count, int boundary_count,
                              PointStrategy strategy, std::uint64_t seed,
                              double boundary_weight = 1.0);

/// Discretized problem T_s(F u_r) = T_s(f). Basis jets at every test point
/// are computed once at construction.
class CollocationSystem {
 public:
  CollocationSystem(ProblemInstance problem, TrialSpace trial, TestMap testmap);

  const ProblemInstance& problem() const { return problem_; }
  const TrialSpace& trial() const { return trial_; }
  const TestMap& testmap() const { return testmap_; }
  int rows() const { return testmap_.rows(); }
  int cols() const { return trial_.dim(); }
  /// True when there are fewer test values than trial degrees of freedom.
  bool underdetermined() const { return rows() < cols(); }

  /// T_s(f), boundary entries already weighted.
  const Vector& data() const { return data_; }

  /// Trial function jets at each collocation point, in row order.
  std::vector<Jet2> jets(const Coefficients& c) const;
  /// T_s(F u) without subtracting the data.
  Vector apply(const Coefficients& c) const;
  Vector residual(const Coefficients& c) const;
  Matrix jacobian(const Coefficients& c) const;

 private:
  const Point& row_point(int row) const;

  ProblemInstance problem_;
  TrialSpace trial_;
  TestMap testmap_;
  Vector data_;
  std::vector<std::vector<Jet2>> basis_;  // basis_[row][col]
};

inline Vector assemble_residual(const CollocationSystem& sys, const Coefficients& c) {
  return sys.residual(c);
}
inline Matrix assemble_jacobian(const CollocationSystem& sys, const Coefficients& c) {
  return sys.jacobian(c);
}

void write_vector_csv(std::ostream& os, const Vector& v, const std::string& name);
void write_matrix_csv(std::ostream& os, const Matrix& m);

}  // namespace qlcoll
