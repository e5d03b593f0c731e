#pragma once

#include "qlcoll/types.hpp"

#include <array>

namespace qlcoll {

/// Whittle-Matern radial kernel with half-integer smoothness nu in
/// {5/2, 7/2, 9/2}, normalized to 1 at the origin:
///
///   Phi(x, y) = phi(eps * |x - y|),  phi(r) = P_nu(r) exp(-r).
///
/// On R^d it reproduces the Sobolev space of order nu + d/2. For nu >= 5/2
/// every translate is C^2, so second-order operators apply pointwise.
class Kernel {
 public:
  static constexpr double kDefaultEps = 3.0;

  explicit Kernel(double nu = 2.5, double eps = kDefaultEps);

  double nu() const { return nu_; }
  double eps() const { return eps_; }
  double sobolev_order(int dim) const { return nu_ + 0.5 * dim; }

  // Radial profile and its derivatives in the scaled radius r = eps*|x-y|.
  double profile(double r) const;
  double profile_d1(double r) const;
  double profile_d2(double r) const;

  double value(const Point& x, const Point& y) const;
  /// Value, gradient and hessian with respect to x.
  Jet2 jet(const Point& x, const Point& y) const;

 private:
  static double horner(const double* c, int n, double r);

  double nu_;
  double eps_;
  // phi(r)          = P(r) e^{-r}
  // phi'(r) / r     = -A(r) e^{-r}
  // (phi'' - phi'/r) / r^2 = B(r) e^{-r}
  // The factored forms are polynomial, so nothing is singular at r = 0.
  std::array<double, 5> p_{};
  std::array<double, 4> a_{};
  std::array<double, 3> b_{};
  int np_ = 0, na_ = 0, nb_ = 0;
};

inline double kernel_value(const Kernel& k, const Point& x, const Point& y) { return k.value(x, y); }
inline Jet2 kernel_jet(const Kernel& k, const Point& x, const Point& y) { return k.jet(x, y); }

}  // namespace qlcoll
