#include "qlcoll/trialspace.hpp"

#include "qlcoll/csv.hpp"

#include <cmath>
#include <istream>
#include <ostream>

namespace qlcoll {

Coefficients::Coefficients(Vector values) : values_(std::move(values)) {
  if (!values_.allFinite()) throw Error("coefficients contain NaN or Inf");
}

MultiIndex::MultiIndex(int d, std::array<int, kMaxDim> ord) : dim(d), order(ord) {
  if (d < 1 || d > kMaxDim) throw Error("multi-index dimension out of range");
  for (int k = 0; k < kMaxDim; ++k) {
    if (order[k] < 0) throw Error("negative derivative order");
    if (k >= d && order[k] != 0) throw Error("derivative along a coordinate beyond the dimension");
  }
  if (total() > 2) throw Error("derivative order above 2 is not supported");
}

MultiIndex MultiIndex::first(int d, int i) {
  if (i < 0 || i >= d) throw Error("derivative coordinate out of range");
  std::array<int, kMaxDim> o{};
  o[i] = 1;
  return MultiIndex(d, o);
}

MultiIndex MultiIndex::second(int d, int i, int j) {
  if (i < 0 || i >= d || j < 0 || j >= d) throw Error("derivative coordinate out of range");
  std::array<int, kMaxDim> o{};
  ++o[i];
  ++o[j];
  return MultiIndex(d, o);
}

int MultiIndex::total() const {
  int t = 0;
  for (int k = 0; k < kMaxDim; ++k) t += order[k];
  return t;
}

TrialSpace::TrialSpace(Kernel kernel, PointSet centers)
    : kernel_(std::move(kernel)), centers_(std::move(centers)) {
  if (centers_.empty()) throw Error("trial space needs at least one center");
  if (centers_.size() >= 2 && separation_distance(centers_) <= 0.0)
    throw Error("trial space centers must be pairwise distinct");
}

std::vector<Jet2> TrialSpace::basis_jets(const Point& x) const {
  std::vector<Jet2> out;
  out.reserve(centers_.size());
  for (const auto& c : centers_) out.push_back(kernel_.jet(x, c));
  return out;
}

Jet2 eval_jet(const TrialSpace& ts, const Coefficients& c, const Point& x) {
  if (c.size() != ts.dim()) throw Error("coefficient length does not match trial dimension");
  Jet2 acc = Jet2::zero(ts.space_dim());
  for (int j = 0; j < ts.dim(); ++j) {
    const Jet2 b = ts.kernel().jet(x, ts.centers()[j]);
    acc.value += c[j] * b.value;
    acc.gradient += c[j] * b.gradient;
    acc.hessian += c[j] * b.hessian;
  }
  return acc;
}

namespace {

double select(const Jet2& j, const MultiIndex& m) {
  switch (m.total()) {
    case 0:
      return j.value;
    case 1:
      for (int k = 0; k < m.dim; ++k)
        if (m.order[k] == 1) return j.gradient(k);
      break;
    case 2: {
      int first = -1, second = -1;
      for (int k = 0; k < m.dim; ++k) {
        if (m.order[k] == 2) return j.hessian(k, k);
        if (m.order[k] == 1) (first < 0 ? first : second) = k;
      }
      return j.hessian(first, second);
    }
  }
  throw Error("invalid multi-index");
}

}  // namespace

Matrix basis_matrix(const TrialSpace& ts, const PointSet& pts, const MultiIndex& deriv) {
  if (deriv.dim != ts.space_dim() || (!pts.empty() && pts.dim() != ts.space_dim()))
    throw Error("multi-index dimension does not match the trial space");
  Matrix out(static_cast<Eigen::Index>(pts.size()), ts.dim());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < ts.dim(); ++j) {
      out(static_cast<Eigen::Index>(i), j) =
          deriv.total() == 0 ? ts.kernel().value(pts[i], ts.centers()[j])
                             : select(ts.kernel().jet(pts[i], ts.centers()[j]), deriv);
    }
  }
  return out;
}

Matrix gram_matrix(const TrialSpace& ts) {
  return basis_matrix(ts, ts.centers(), MultiIndex::value(ts.space_dim()));
}

Vector evaluate(const TrialSpace& ts, const Coefficients& c, const PointSet& pts) {
  if (c.size() != ts.dim()) throw Error("coefficient length does not match trial dimension");
  return basis_matrix(ts, pts, MultiIndex::value(ts.space_dim())) * c.values();
}

Coefficients interpolate(const TrialSpace& ts, const Vector& samples) {
  if (samples.size() != ts.dim()) throw Error("interpolation needs one sample per center");
  const Matrix gram = gram_matrix(ts);
  Eigen::LLT<Matrix> llt(gram);
  const char* msg = "ill-conditioned Gram; increase separation or decrease eps";
  if (llt.info() != Eigen::Success) throw Error(msg);
  Vector c = llt.solve(samples);
  const double scale = samples.lpNorm<Eigen::Infinity>();
  if (!c.allFinite() || (gram * c - samples).lpNorm<Eigen::Infinity>() > 1e-8 * scale)
    throw Error(msg);
  return Coefficients(std::move(c));
}

void write_coefficients_csv(std::ostream& os, const Coefficients& c) {
  csv::write_row(os, {"index", "coefficient"});
  for (Eigen::Index i = 0; i < c.size(); ++i)
    csv::write_row(os, {std::to_string(i), csv::format(c[i])});
}

Coefficients read_coefficients_csv(std::istream& is) {
  const auto table = csv::read_table(is);
  if (table.header.size() != 2) throw Error("coefficient csv must have two columns");
  Vector v(static_cast<Eigen::Index>(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = csv::parse_double(table.rows[i][1]);
  return Coefficients(std::move(v));
}

}  // namespace qlcoll
