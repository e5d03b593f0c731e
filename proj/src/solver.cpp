#include "qlcoll/solver.hpp"

#include "qlcoll/csv.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <ostream>

namespace qlcoll {

void SolveOptions::validate() const {
  if (max_iter < 1) throw Error("max_iter must be at least 1");
  if (!(tol_residual_sup > 0) || !(tol_step > 0) || !(tol_stationary > 0) || !(armijo_c > 0) ||
      !(lm_lambda0 > 0) || !(rank_tol > 0))
    throw Error("solver tolerances must be positive");
  if (armijo_c >= 1.0) throw Error("armijo_c must be below 1");
}

std::string to_string(Termination t) {
  switch (t) {
    case Termination::ResidualTolerance:
      return "residual_tolerance";
    case Termination::StepTolerance:
      return "step_tolerance";
    case Termination::Stationary:
      return "stationary";
    case Termination::MaxIterations:
      return "max_iterations";
  }
  return "?";
}

Vector solve_least_squares(const Matrix& a, const Vector& b, double rank_tol) {
  if (a.rows() == 0 || a.cols() == 0) throw Error("least squares on an empty matrix");
  if (b.size() != a.rows()) throw Error("least squares right-hand side has the wrong length");
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(rank_tol);
  return svd.solve(b);
}

Coefficients initial_guess(const CollocationSystem& sys, double rank_tol) {
  const auto zero = Coefficients::zero(sys.cols());
  const Vector r0 = sys.residual(zero);
  if (!r0.allFinite()) throw ConvergenceError("divergence: residual at zero is not finite");
  return Coefficients(solve_least_squares(sys.jacobian(zero), -r0, rank_tol));
}

namespace {

struct Iterate {
  Vector c;
  Vector r;
  double f = 0.0;  // |r|_2^2
};

bool evaluate(const CollocationSystem& sys, const Vector& c, Iterate& out) {
  if (!c.allFinite()) return false;
  Vector r = sys.residual(Coefficients(c));
  if (!r.allFinite()) return false;
  out.f = r.squaredNorm();
  out.c = c;
  out.r = std::move(r);
  return true;
}

}  // namespace

SolveReport gauss_newton(const CollocationSystem& sys, const Coefficients& c0,
                         const SolveOptions& opts) {
  opts.validate();
  if (c0.size() != sys.cols()) throw Error("initial coefficients have the wrong length");

  Iterate cur;
  if (!evaluate(sys, c0.values(), cur)) throw ConvergenceError("divergence: initial residual is not finite");

  SolveReport rep;
  auto sup = [](const Vector& v) { return v.lpNorm<Eigen::Infinity>(); };
  rep.trace.push_back({0, std::sqrt(cur.f), sup(cur.r), 0.0, 0.0, "start"});

  double lambda = opts.lm_lambda0;
  bool done = false;
  for (int k = 1; k <= opts.max_iter && !done; ++k) {
    if (sup(cur.r) <= opts.tol_residual_sup) {
      rep.converged = true;
      rep.termination = Termination::ResidualTolerance;
      break;
    }
    const Matrix jac = sys.jacobian(Coefficients(cur.c));
    if (!jac.allFinite()) throw ConvergenceError("divergence: Jacobian is not finite");
    const Vector step = solve_least_squares(jac, -cur.r, opts.rank_tol);
    if (!step.allFinite()) throw ConvergenceError("divergence: step is not finite");

    const double scale = std::max(1.0, cur.c.norm());
    if (step.norm() <= opts.tol_step * scale) {
      rep.converged = true;
      rep.termination = Termination::StepTolerance;
      rep.trace.push_back({k, std::sqrt(cur.f), sup(cur.r), 0.0, 0.0, "stop"});
      break;
    }
    const Vector jstep = jac * step;
    const double slope = 2.0 * cur.r.dot(jstep);
    const double predicted = -(slope + jstep.squaredNorm());
    if (predicted <= opts.tol_stationary * cur.f) {
      rep.converged = true;
      rep.termination = Termination::Stationary;
      rep.trace.push_back({k, std::sqrt(cur.f), sup(cur.r), 0.0, 0.0, "stop"});
      break;
    }

    // Armijo backtracking on |R|^2 along the Gauss-Newton direction.
    Iterate trial;
    bool accepted = false;
    double alpha = 1.0;
    for (; alpha >= std::ldexp(1.0, -20); alpha *= 0.5) {
      if (evaluate(sys, cur.c + alpha * step, trial) &&
          trial.f <= cur.f + opts.armijo_c * alpha * slope && trial.f < cur.f) {
        accepted = true;
        break;
      }
    }
    if (accepted) {
      cur = std::move(trial);
      ++rep.iterations;
      rep.trace.push_back({k, std::sqrt(cur.f), sup(cur.r), alpha * step.norm(), alpha, "gn"});
      continue;
    }

    // Levenberg-Marquardt fallback.
    Matrix normal = jac.transpose() * jac;
    normal.diagonal().array() += lambda;
    const Vector lm_step = normal.ldlt().solve(-jac.transpose() * cur.r);
    if (evaluate(sys, cur.c + lm_step, trial) && trial.f < cur.f) {
      cur = std::move(trial);
      ++rep.iterations;
      rep.trace.push_back({k, std::sqrt(cur.f), sup(cur.r), lm_step.norm(), lambda, "lm"});
      lambda /= 10.0;
    } else {
      rep.trace.push_back({k, std::sqrt(cur.f), sup(cur.r), 0.0, lambda, "lm-reject"});
      lambda *= 10.0;
    }
  }

  if (!rep.converged && sup(cur.r) <= opts.tol_residual_sup) {
    rep.converged = true;
    rep.termination = Termination::ResidualTolerance;
  }
  rep.coeffs = Coefficients(cur.c);
  rep.residual_l2 = std::sqrt(cur.f);
  rep.residual_sup = sup(cur.r);
  return rep;
}

void write_solve_report(std::ostream& os, const SolveReport& r) {
  os << "converged = " << (r.converged ? "true" : "false") << '\n'
     << "termination = " << to_string(r.termination) << '\n'
     << "iterations = " << r.iterations << '\n'
     << "residual_sup = " << csv::format(r.residual_sup) << '\n'
     << "residual_l2 = " << csv::format(r.residual_l2) << '\n'
     << "trial_dim = " << r.coeffs.size() << '\n'
     << "coefficient_l2 = " << csv::format(r.coeffs.values().norm()) << '\n';
}

void write_trace_csv(std::ostream& os, const SolveReport& r) {
  csv::write_row(os, {"iteration", "kind", "residual_l2", "residual_sup", "step_norm", "damping"});
  for (const auto& t : r.trace)
    csv::write_row(os, {std::to_string(t.iteration), t.kind, csv::format(t.residual_l2),
                        csv::format(t.residual_sup), csv::format(t.step_norm),
                        csv::format(t.damping)});
}

}  // namespace qlcoll
