#include "qlcoll/collocation.hpp"

#include "qlcoll/csv.hpp"

#include <cmath>
#include <ostream>

namespace qlcoll {

TestMap::TestMap(PointSet interior, BoundaryPointSet boundary, double boundary_weight)
    : interior_(std::move(interior)), boundary_(std::move(boundary)),
      boundary_weight_(boundary_weight) {
  if (interior_.empty()) throw Error("test map needs at least one interior point");
  if (boundary_.size() == 0) throw Error("test map needs at least one boundary point");
  if (interior_.dim() != boundary_.dim()) throw Error("test map dimension mismatch");
  if (!(boundary_weight > 0.0)) throw Error("boundary weight must be positive");
}

TestMap build_test_map_counts(const Domain& domain, int interior_count, int boundary_count,
                              PointStrategy strategy, std::uint64_t seed, double boundary_weight) {
  if (interior_count < 1 || boundary_count < 1)
    throw Error("collocation budget too small: need at least one interior and one boundary point");
  return TestMap(generate_interior_points(domain, interior_count, strategy, seed),
                 generate_boundary_points(domain, boundary_count), boundary_weight);
}

TestMap build_test_map(const Domain& domain, int trial_dim, OversamplingRule rule,
                       PointStrategy strategy, std::uint64_t seed, double boundary_weight) {
  if (!(rule.rho >= 1.0)) throw Error("oversampling factor rho must be at least 1");
  if (rule.beta != 1.0 && rule.beta != 2.0) throw Error("oversampling exponent beta must be 1 or 2");
  if (trial_dim < 1) throw Error("trial dimension must be positive");
  const double raw = rule.rho * std::pow(static_cast<double>(trial_dim), rule.beta);
  const int total = static_cast<int>(std::ceil(raw * (1.0 - 1e-14)));
  const int boundary =
      domain.dim() == 1 ? 2 : static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(total))));
  return build_test_map_counts(domain, total - boundary, boundary, strategy, seed, boundary_weight);
}

CollocationSystem::CollocationSystem(ProblemInstance problem, TrialSpace trial, TestMap testmap)
    : problem_(std::move(problem)), trial_(std::move(trial)), testmap_(std::move(testmap)) {
  const int d = problem_.domain.dim();
  if (problem_.op.dim() != d || trial_.space_dim() != d || testmap_.interior().dim() != d)
    throw Error("collocation system members disagree on the dimension");
  if (!problem_.f1 || !problem_.f2) throw Error("problem has no right-hand side");

  const auto m = static_cast<int>(testmap_.interior().size());
  data_.resize(rows());
  basis_.reserve(static_cast<std::size_t>(rows()));
  for (int i = 0; i < m; ++i) {
    data_(i) = problem_.f1(testmap_.interior()[i]);
    basis_.push_back(trial_.basis_jets(testmap_.interior()[i]));
  }
  const double w = testmap_.boundary_weight();
  for (std::size_t j = 0; j < testmap_.boundary().size(); ++j) {
    const auto& node = testmap_.boundary()[j];
    data_(m + static_cast<int>(j)) = w * problem_.f2(node);
    basis_.push_back(trial_.basis_jets(node.x));
  }
}

const Point& CollocationSystem::row_point(int row) const {
  const auto m = static_cast<int>(testmap_.interior().size());
  return row < m ? testmap_.interior()[row] : testmap_.boundary()[row - m].x;
}

std::vector<Jet2> CollocationSystem::jets(const Coefficients& c) const {
  if (c.size() != cols()) throw Error("coefficient length does not match trial dimension");
  std::vector<Jet2> out;
  out.reserve(basis_.size());
  const int d = trial_.space_dim();
  for (const auto& row : basis_) {
    Jet2 acc = Jet2::zero(d);
    for (int j = 0; j < cols(); ++j) {
      const double cj = c[j];
      acc.value += cj * row[j].value;
      acc.gradient += cj * row[j].gradient;
      acc.hessian += cj * row[j].hessian;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

Vector CollocationSystem::apply(const Coefficients& c) const {
  const auto u = jets(c);
  const auto m = static_cast<int>(testmap_.interior().size());
  Vector out(rows());
  for (int i = 0; i < m; ++i) out(i) = apply_G(problem_.op, row_point(i), u[i]);
  const double w = testmap_.boundary_weight();
  for (int r = m; r < rows(); ++r)
    out(r) = w * apply_B(problem_.bc, testmap_.boundary()[r - m], u[r]);
  return out;
}

Vector CollocationSystem::residual(const Coefficients& c) const { return apply(c) - data_; }

Matrix CollocationSystem::jacobian(const Coefficients& c) const {
  const auto u = jets(c);
  const auto m = static_cast<int>(testmap_.interior().size());
  const double w = testmap_.boundary_weight();
  Matrix jac(rows(), cols());
  for (int r = 0; r < rows(); ++r) {
    const JetFunctional f = r < m ? linearize_G(problem_.op, row_point(r), u[r])
                                  : linearize_B(problem_.bc, testmap_.boundary()[r - m]);
    const double scale = r < m ? 1.0 : w;
    for (int j = 0; j < cols(); ++j) jac(r, j) = scale * f(basis_[r][j]);
  }
  return jac;
}

void write_vector_csv(std::ostream& os, const Vector& v, const std::string& name) {
  csv::write_row(os, {"row", name});
  for (Eigen::Index i = 0; i < v.size(); ++i) csv::write_row(os, {std::to_string(i), csv::format(v(i))});
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  std::vector<std::string> header;
  for (Eigen::Index j = 0; j < m.cols(); ++j) header.push_back("c" + std::to_string(j));
  csv::write_row(os, header);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<std::string> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(csv::format(m(i, j)));
    csv::write_row(os, row);
  }
}

}  // namespace qlcoll
