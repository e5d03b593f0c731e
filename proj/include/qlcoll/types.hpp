#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace qlcoll {

// Points live in R^d with d <= 3, so coordinates and small matrices stay on
// the stack.
inline constexpr int kMaxDim = 3;

using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using SmallMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, kMaxDim, kMaxDim>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Value, gradient and hessian of a scalar function at one point.
struct Jet2 {
  double value = 0.0;
  Point gradient;
  SmallMatrix hessian;

  static Jet2 zero(int dim) {
    return Jet2{0.0, Point::Zero(dim), SmallMatrix::Zero(dim, dim)};
  }

  int dim() const { return static_cast<int>(gradient.size()); }

  Jet2& operator+=(const Jet2& o) {
    value += o.value;
    gradient += o.gradient;
    hessian += o.hessian;
    return *this;
  }
  Jet2& operator*=(double s) {
    value *= s;
    gradient *= s;
    hessian *= s;
    return *this;
  }
  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) {
    a.value -= b.value;
    a.gradient -= b.gradient;
    a.hessian -= b.hessian;
    return a;
  }
  friend Jet2 operator*(double s, Jet2 a) { return a *= s; }
};

}  // namespace qlcoll
