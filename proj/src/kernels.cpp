#include "qlcoll/kernels.hpp"

#include <cmath>
#include <string>

namespace qlcoll {

Kernel::Kernel(double nu, double eps) : nu_(nu), eps_(eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error("kernel shape parameter must be positive");
  if (nu == 2.5) {
    p_ = {1.0, 1.0, 1.0 / 3.0};
    a_ = {1.0 / 3.0, 1.0 / 3.0};
    b_ = {1.0 / 3.0};
    np_ = 3, na_ = 2, nb_ = 1;
  } else if (nu == 3.5) {
    p_ = {1.0, 1.0, 2.0 / 5.0, 1.0 / 15.0};
    a_ = {1.0 / 5.0, 1.0 / 5.0, 1.0 / 15.0};
    b_ = {1.0 / 15.0, 1.0 / 15.0};
    np_ = 4, na_ = 3, nb_ = 2;
  } else if (nu == 4.5) {
    p_ = {1.0, 1.0, 3.0 / 7.0, 2.0 / 21.0, 1.0 / 105.0};
    a_ = {1.0 / 7.0, 1.0 / 7.0, 2.0 / 35.0, 1.0 / 105.0};
    b_ = {1.0 / 35.0, 1.0 / 35.0, 1.0 / 105.0};
    np_ = 5, na_ = 4, nb_ = 3;
  } else {
    throw Error("unsupported kernel smoothness nu=" + std::to_string(nu) +
                " (supported: 2.5, 3.5, 4.5)");
  }
}

double Kernel::horner(const double* c, int n, double r) {
  double acc = 0.0;
  for (int i = n - 1; i >= 0; --i) acc = acc * r + c[i];
  return acc;
}

double Kernel::profile(double r) const { return horner(p_.data(), np_, r) * std::exp(-r); }

double Kernel::profile_d1(double r) const { return -r * horner(a_.data(), na_, r) * std::exp(-r); }

double Kernel::profile_d2(double r) const {
  return (-horner(a_.data(), na_, r) + r * r * horner(b_.data(), nb_, r)) * std::exp(-r);
}

double Kernel::value(const Point& x, const Point& y) const {
  return profile(eps_ * (x - y).norm());
}

Jet2 Kernel::jet(const Point& x, const Point& y) const {
  const Point delta = x - y;
  const double r = eps_ * delta.norm();
  const double e = std::exp(-r);
  const double eps2 = eps_ * eps_;
  const double g1 = -horner(a_.data(), na_, r) * e;
  const double g2 = horner(b_.data(), nb_, r) * e;

  Jet2 j;
  j.value = horner(p_.data(), np_, r) * e;
  j.gradient = eps2 * g1 * delta;
  j.hessian = (eps2 * eps2 * g2) * (delta * delta.transpose());
  j.hessian.diagonal().array() += eps2 * g1;
  return j;
}

}  // namespace qlcoll
