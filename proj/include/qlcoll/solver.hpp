#pragma once

#include "qlcoll/collocation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlcoll {

/// Divergence or too few converged levels; the CLI maps it to exit code 2.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

struct SolveOptions {
  int max_iter = 50;
  double tol_residual_sup = 1e-10;
  // Steps are compared against tol_step * max(1, |c|_2).
  double tol_step = 1e-12;
  // Stop once the Gauss-Newton model predicts a relative decrease of |R|_2^2
  // below this value: the residual of an oversampled system does not vanish,
  // and this is where further steps only chase rounding noise.
  double tol_stationary = 1e-12;
  double armijo_c = 1e-4;
  double lm_lambda0 = 1e-3;
  double rank_tol = 1e-12;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class Termination { ResidualTolerance, StepTolerance, Stationary, MaxIterations };
std::string to_string(Termination t);

struct TraceEntry {
  int iteration = 0;
  double residual_l2 = 0.0;
  double residual_sup = 0.0;
  double step_norm = 0.0;
  double damping = 0.0;  // line-search alpha for GN steps, lambda for LM steps
  std::string kind;      // start, gn, lm, lm-reject, stop
};

struct SolveReport {
  Coefficients coeffs;
  int iterations = 0;  // accepted steps
  double residual_sup = 0.0;
  double residual_l2 = 0.0;
  bool converged = false;
  Termination termination = Termination::MaxIterations;
  std::vector<TraceEntry> trace;
};

/// Minimum-norm least-squares solution from a truncated SVD; singular values
/// below rank_tol times the largest are dropped.
Vector solve_least_squares(const Matrix& a, const Vector& b, double rank_tol = 1e-12);

/// One Gauss-Newton step from the zero coefficient vector.
Coefficients initial_guess(const CollocationSystem& sys, double rank_tol = 1e-12);

/// Damped Gauss-Newton on |R(c)|_2^2 with Armijo backtracking and a
/// Levenberg-Marquardt fallback. The discrete problem is kept nonlinear; the
/// linearization only supplies search directions.
SolveReport gauss_newton(const CollocationSystem& sys, const Coefficients& c0,
                         const SolveOptions& opts = {});

void write_solve_report(std::ostream& os, const SolveReport& r);
void write_trace_csv(std::ostream& os, const SolveReport& r);

}  // namespace qlcoll
