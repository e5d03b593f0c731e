#pragma once

#include "qlcoll/geometry.hpp"
#include "qlcoll/kernels.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace qlcoll {

/// Coefficient vector of a trial function in the kernel-translate basis.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(Vector values);
  static Coefficients zero(Eigen::Index n) { return Coefficients(Vector::Zero(n)); }

  const Vector& values() const { return values_; }
  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_(i); }

 private:
  Vector values_;
};

/// Partial derivative order per coordinate, total order at most 2.
struct MultiIndex {
  int dim = 1;
  std::array<int, kMaxDim> order{};

  MultiIndex(int dim, std::array<int, kMaxDim> order);
  static MultiIndex value(int dim) { return MultiIndex(dim, {}); }
  static MultiIndex first(int dim, int i);
  static MultiIndex second(int dim, int i, int j);

  int total() const;
};

/// Span of kernel translates Phi(., x_j) over a set of distinct centers.
class TrialSpace {
 public:
  TrialSpace(Kernel kernel, PointSet centers);

  const Kernel& kernel() const { return kernel_; }
  const PointSet& centers() const { return centers_; }
  int dim() const { return static_cast<int>(centers_.size()); }
  int space_dim() const { return centers_.dim(); }

  /// Jets of every basis function at x, in center order.
  std::vector<Jet2> basis_jets(const Point& x) const;

 private:
  Kernel kernel_;
  PointSet centers_;
};

Jet2 eval_jet(const TrialSpace& ts, const Coefficients& c, const Point& x);

/// Entry (i, j) is the derivative `deriv` of the j-th basis function at pts[i].
Matrix basis_matrix(const TrialSpace& ts, const PointSet& pts, const MultiIndex& deriv);

Matrix gram_matrix(const TrialSpace& ts);

/// Values of the trial function at every point.
Vector evaluate(const TrialSpace& ts, const Coefficients& c, const PointSet& pts);

/// Kernel interpolant: solves Gram * c = samples by Cholesky.
Coefficients interpolate(const TrialSpace& ts, const Vector& samples);

void write_coefficients_csv(std::ostream& os, const Coefficients& c);
Coefficients read_coefficients_csv(std::istream& is);

}  // namespace qlcoll
