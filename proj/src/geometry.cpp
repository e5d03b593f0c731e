#include "qlcoll/geometry.hpp"

#include "qlcoll/csv.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

namespace qlcoll {

namespace {

constexpr double kDiskMargin = 1e-9;

Point make_point(double x) {
  Point p(1);
  p << x;
  return p;
}

Point make_point(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

Point rotate_plus_90(const Point& v) { return make_point(-v(1), v(0)); }

BoundaryNode make_node(Point x, Point normal, int label) {
  BoundaryNode node;
  node.x = std::move(x);
  if (normal.size() == 2) node.tangents.push_back(rotate_plus_90(normal));
  node.normal = std::move(normal);
  node.label = label;
  return node;
}

std::vector<Point> disk_grid(int k, double radius_limit) {
  std::vector<Point> pts;
  const double step = 2.0 / (k + 1);
  for (int j = 0; j < k; ++j) {
    for (int i = 0; i < k; ++i) {
      Point p = make_point(-1.0 + (i + 1) * step, -1.0 + (j + 1) * step);
      if (p.norm() < radius_limit) pts.push_back(p);
    }
  }
  return pts;
}

// Squared distance from y to the nearest point of ps.
double nearest_sq(const Point& y, const PointSet& ps) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& x : ps) best = std::min(best, (y - x).squaredNorm());
  return best;
}

}  // namespace

Domain::Domain(DomainKind kind, double a1, double b1, double a2, double b2)
    : kind_(kind), a1_(a1), b1_(b1), a2_(a2), b2_(b2) {}

Domain Domain::unit_interval() { return Domain(DomainKind::UnitInterval, 0.0, 1.0, 0.0, 0.0); }

Domain Domain::rectangle(double a1, double b1, double a2, double b2) {
  if (!(a1 < b1) || !(a2 < b2)) throw Error("rectangle needs a1 < b1 and a2 < b2");
  return Domain(DomainKind::Rectangle, a1, b1, a2, b2);
}

Domain Domain::unit_disk() { return Domain(DomainKind::UnitDisk, -1.0, 1.0, -1.0, 1.0); }

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::UnitInterval:
      return "unit_interval";
    case DomainKind::UnitDisk:
      return "unit_disk";
    case DomainKind::Rectangle:
      return "rectangle(" + csv::format(a1_) + "," + csv::format(b1_) + "," + csv::format(a2_) +
             "," + csv::format(b2_) + ")";
  }
  return "?";
}

bool Domain::contains(const Point& x, double tol) const {
  if (x.size() != dim()) return false;
  switch (kind_) {
    case DomainKind::UnitInterval:
      return x(0) >= -tol && x(0) <= 1.0 + tol;
    case DomainKind::Rectangle:
      return x(0) >= a1_ - tol && x(0) <= b1_ + tol && x(1) >= a2_ - tol && x(1) <= b2_ + tol;
    case DomainKind::UnitDisk:
      return x.norm() <= 1.0 + tol;
  }
  return false;
}

double Domain::boundary_defect(const Point& x) const {
  switch (kind_) {
    case DomainKind::UnitInterval:
      return std::min(std::abs(x(0)), std::abs(x(0) - 1.0));
    case DomainKind::UnitDisk:
      return std::abs(x.norm() - 1.0);
    case DomainKind::Rectangle: {
      const double dx = std::min(std::abs(x(0) - a1_), std::abs(x(0) - b1_));
      const double dy = std::min(std::abs(x(1) - a2_), std::abs(x(1) - b2_));
      // Off-boundary distance for a point of the closed rectangle.
      return contains(x, 1e-12) ? std::min(dx, dy) : std::max(dx, dy);
    }
  }
  return 0.0;
}

Point Domain::lower() const {
  return kind_ == DomainKind::UnitInterval ? make_point(a1_) : make_point(a1_, a2_);
}

Point Domain::upper() const {
  return kind_ == DomainKind::UnitInterval ? make_point(b1_) : make_point(b1_, b2_);
}

double Domain::perimeter() const {
  switch (kind_) {
    case DomainKind::UnitInterval:
      return 0.0;
    case DomainKind::Rectangle:
      return 2.0 * ((b1_ - a1_) + (b2_ - a2_));
    case DomainKind::UnitDisk:
      return 2.0 * std::numbers::pi;
  }
  return 0.0;
}

PointSet::PointSet(int dim, std::vector<Point> points) : dim_(dim), points_(std::move(points)) {
  if (dim < 1 || dim > kMaxDim) throw Error("point dimension out of range");
  for (const auto& p : points_)
    if (p.size() != dim) throw Error("point dimension mismatch in point set");
}

PointSet PointSet::appended(const PointSet& other) const {
  if (!empty() && !other.empty() && other.dim() != dim_)
    throw Error("cannot join point sets of different dimension");
  auto pts = points_;
  pts.insert(pts.end(), other.points_.begin(), other.points_.end());
  return PointSet(empty() ? other.dim() : dim_, std::move(pts));
}

BoundaryPointSet::BoundaryPointSet(int dim, std::vector<BoundaryNode> nodes)
    : dim_(dim), nodes_(std::move(nodes)) {
  for (const auto& n : nodes_) {
    if (n.x.size() != dim || n.normal.size() != dim ||
        static_cast<int>(n.tangents.size()) != dim - 1)
      throw Error("boundary node dimension mismatch");
  }
}

PointSet BoundaryPointSet::positions() const {
  std::vector<Point> pts;
  pts.reserve(nodes_.size());
  for (const auto& n : nodes_) pts.push_back(n.x);
  return PointSet(dim_, std::move(pts));
}

PointStrategy parse_point_strategy(const std::string& name) {
  if (name == "grid") return PointStrategy::Grid;
  if (name == "halton") return PointStrategy::Halton;
  throw Error("unknown point strategy '" + name + "' (expected grid or halton)");
}

std::string to_string(PointStrategy s) { return s == PointStrategy::Grid ? "grid" : "halton"; }

double radical_inverse(std::uint64_t index, unsigned base) {
  const double inv_base = 1.0 / base;
  double factor = inv_base;
  double result = 0.0;
  while (index > 0) {
    result += static_cast<double>(index % base) * factor;
    index /= base;
    factor *= inv_base;
  }
  return result;
}

PointSet generate_interior_points(const Domain& domain, int n, PointStrategy strategy,
                                  std::uint64_t seed) {
  if (n <= 0) throw Error("empty point set");
  std::vector<Point> pts;
  const Point lo = domain.lower();
  const Point hi = domain.upper();

  if (strategy == PointStrategy::Grid) {
    switch (domain.kind()) {
      case DomainKind::UnitInterval:
        for (int i = 0; i < n; ++i) pts.push_back(make_point(double(i + 1) / (n + 1)));
        break;
      case DomainKind::Rectangle: {
        const double w = hi(0) - lo(0);
        const double h = hi(1) - lo(1);
        const int kx = std::clamp(static_cast<int>(std::floor(std::sqrt(n * w / h))), 1, n);
        const int ky = std::max(1, n / kx);
        for (int j = 0; j < ky; ++j)
          for (int i = 0; i < kx; ++i)
            pts.push_back(make_point(lo(0) + w * (i + 1) / (kx + 1), lo(1) + h * (j + 1) / (ky + 1)));
        break;
      }
      case DomainKind::UnitDisk: {
        // Largest grid whose clipped point count does not exceed n.
        const int k_max = 2 * static_cast<int>(std::ceil(std::sqrt(double(n)))) + 4;
        int best_k = 1;
        for (int k = 1; k <= k_max; ++k)
          if (disk_grid(k, 1.0 - kDiskMargin).size() <= static_cast<std::size_t>(n)) best_k = k;
        pts = disk_grid(best_k, 1.0 - kDiskMargin);
        break;
      }
    }
    return PointSet(domain.dim(), std::move(pts));
  }

  std::uint64_t index = seed + 1;
  while (static_cast<int>(pts.size()) < n) {
    const double u = radical_inverse(index, 2);
    switch (domain.kind()) {
      case DomainKind::UnitInterval:
        pts.push_back(make_point(u));
        break;
      case DomainKind::Rectangle:
        pts.push_back(make_point(lo(0) + (hi(0) - lo(0)) * u,
                                 lo(1) + (hi(1) - lo(1)) * radical_inverse(index, 3)));
        break;
      case DomainKind::UnitDisk: {
        Point p = make_point(2.0 * u - 1.0, 2.0 * radical_inverse(index, 3) - 1.0);
        if (p.norm() < 1.0 - kDiskMargin) pts.push_back(p);
        break;
      }
    }
    ++index;
  }
  return PointSet(domain.dim(), std::move(pts));
}

BoundaryPointSet generate_boundary_points(const Domain& domain, int n) {
  if (n <= 0) throw Error("empty boundary point set");
  std::vector<BoundaryNode> nodes;
  switch (domain.kind()) {
    case DomainKind::UnitInterval:
      nodes.push_back(make_node(make_point(0.0), make_point(-1.0), 0));
      nodes.push_back(make_node(make_point(1.0), make_point(1.0), 1));
      break;
    case DomainKind::UnitDisk:
      for (int k = 0; k < n; ++k) {
        const double t = 2.0 * std::numbers::pi * k / n;
        Point x = make_point(std::cos(t), std::sin(t));
        nodes.push_back(make_node(x, x, 0));
      }
      break;
    case DomainKind::Rectangle: {
      const Point lo = domain.lower();
      const Point hi = domain.upper();
      // Counterclockwise corners; each corner takes the normal and label of
      // the edge leaving it counterclockwise.
      const Point corners[4] = {make_point(lo(0), lo(1)), make_point(hi(0), lo(1)),
                                make_point(hi(0), hi(1)), make_point(lo(0), hi(1))};
      const Point normals[4] = {make_point(0.0, -1.0), make_point(1.0, 0.0),
                                make_point(0.0, 1.0), make_point(-1.0, 0.0)};
      for (int e = 0; e < std::min(n, 4); ++e) nodes.push_back(make_node(corners[e], normals[e], e));

      const int extra = n - 4;
      if (extra > 0) {
        double len[4];
        for (int e = 0; e < 4; ++e) len[e] = (corners[(e + 1) % 4] - corners[e]).norm();
        const double perim = domain.perimeter();
        int counts[4];
        double remainders[4];
        int assigned = 0;
        for (int e = 0; e < 4; ++e) {
          const double share = extra * len[e] / perim;
          counts[e] = static_cast<int>(std::floor(share));
          remainders[e] = share - counts[e];
          assigned += counts[e];
        }
        // Largest remainder, ties broken by edge order.
        while (assigned < extra) {
          int best = 0;
          for (int e = 1; e < 4; ++e)
            if (remainders[e] > remainders[best]) best = e;
          ++counts[best];
          remainders[best] = -1.0;
          ++assigned;
        }
        for (int e = 0; e < 4; ++e) {
          const Point& a = corners[e];
          const Point& b = corners[(e + 1) % 4];
          for (int j = 0; j < counts[e]; ++j) {
            const double s = double(j + 1) / (counts[e] + 1);
            nodes.push_back(make_node(Point(a + s * (b - a)), normals[e], e));
          }
        }
      }
      break;
    }
  }
  return BoundaryPointSet(domain.dim(), std::move(nodes));
}

double separation_distance(const PointSet& ps) {
  if (ps.size() < 2) throw Error("separation undefined for fewer than two points");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < ps.size(); ++j)
    for (std::size_t k = j + 1; k < ps.size(); ++k)
      best = std::min(best, (ps[j] - ps[k]).squaredNorm());
  return 0.5 * std::sqrt(best);
}

PointSet probe_grid(const Domain& domain, int resolution) {
  if (resolution < 2) throw Error("probe resolution must be at least 2");
  std::vector<Point> pts;
  const Point lo = domain.lower();
  const Point hi = domain.upper();
  switch (domain.kind()) {
    case DomainKind::UnitInterval:
      for (int i = 0; i < resolution; ++i) pts.push_back(make_point(double(i) / (resolution - 1)));
      break;
    case DomainKind::Rectangle:
      for (int j = 0; j < resolution; ++j)
        for (int i = 0; i < resolution; ++i)
          pts.push_back(make_point(lo(0) + (hi(0) - lo(0)) * i / (resolution - 1),
                                   lo(1) + (hi(1) - lo(1)) * j / (resolution - 1)));
      break;
    case DomainKind::UnitDisk: {
      // The disk fills pi/4 of its bounding box; enlarge so at least
      // resolution^2 grid points survive clipping.
      const int r = static_cast<int>(std::ceil(resolution * 2.0 / std::sqrt(std::numbers::pi))) + 1;
      for (int j = 0; j < r; ++j)
        for (int i = 0; i < r; ++i) {
          Point p = make_point(-1.0 + 2.0 * i / (r - 1), -1.0 + 2.0 * j / (r - 1));
          if (p.norm() <= 1.0) pts.push_back(p);
        }
      break;
    }
  }
  return PointSet(domain.dim(), std::move(pts));
}

double fill_distance(const PointSet& ps, const Domain& domain, int probe_resolution) {
  if (ps.empty()) throw Error("fill distance of an empty point set");
  if (probe_resolution < 10) throw Error("probe resolution must be at least 10");
  if (ps.dim() != domain.dim()) throw Error("point set dimension does not match domain");

  double worst = 0.0;
  for (const auto& y : probe_grid(domain, probe_resolution))
    worst = std::max(worst, nearest_sq(y, ps));
  if (domain.dim() == 2) {
    for (const auto& node : generate_boundary_points(domain, 4 * probe_resolution))
      worst = std::max(worst, nearest_sq(node.x, ps));
  } else {
    // In 1D the supremum sits at an endpoint or between two neighbours.
    std::vector<double> xs;
    for (const auto& p : ps) xs.push_back(p(0));
    std::sort(xs.begin(), xs.end());
    worst = std::max(worst, nearest_sq(make_point(0.0), ps));
    worst = std::max(worst, nearest_sq(make_point(1.0), ps));
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      worst = std::max(worst, nearest_sq(make_point(0.5 * (xs[i] + xs[i + 1])), ps));
  }
  return std::sqrt(worst);
}

double quasi_uniformity_ratio(const PointSet& ps, const Domain& domain) {
  const double q = separation_distance(ps);
  if (q <= 0.0) throw Error("point set has coincident points");
  return fill_distance(ps, domain) / q;
}

GeometryQuality geometry_quality(const PointSet& ps, const Domain& domain, int probe_resolution) {
  GeometryQuality g;
  g.fill_distance = fill_distance(ps, domain, probe_resolution);
  g.separation_distance = separation_distance(ps);
  if (g.separation_distance <= 0.0) throw Error("point set has coincident points");
  g.uniformity_ratio = g.fill_distance / g.separation_distance;
  return g;
}

void write_points_csv(std::ostream& os, const PointSet& ps) {
  std::vector<std::string> header;
  for (int k = 0; k < ps.dim(); ++k) header.push_back("x" + std::to_string(k + 1));
  csv::write_row(os, header);
  for (const auto& p : ps) {
    std::vector<std::string> row;
    for (int k = 0; k < ps.dim(); ++k) row.push_back(csv::format(p(k)));
    csv::write_row(os, row);
  }
}

PointSet read_points_csv(std::istream& is) {
  const auto table = csv::read_table(is);
  const int dim = static_cast<int>(table.header.size());
  if (dim < 1 || dim > kMaxDim) throw Error("point csv must have 1..3 columns");
  std::vector<Point> pts;
  for (const auto& row : table.rows) {
    Point p(dim);
    for (int k = 0; k < dim; ++k) p(k) = csv::parse_double(row[k]);
    pts.push_back(p);
  }
  return PointSet(dim, std::move(pts));
}

void write_boundary_csv(std::ostream& os, const BoundaryPointSet& bs) {
  const int d = bs.dim();
  std::vector<std::string> header;
  for (int k = 0; k < d; ++k) header.push_back("x" + std::to_string(k + 1));
  for (int k = 0; k < d; ++k) header.push_back("nu" + std::to_string(k + 1));
  for (int t = 0; t < d - 1; ++t)
    for (int k = 0; k < d; ++k)
      header.push_back("t" + std::to_string(t + 1) + "_" + std::to_string(k + 1));
  header.push_back("label");
  csv::write_row(os, header);
  for (const auto& n : bs) {
    std::vector<std::string> row;
    for (int k = 0; k < d; ++k) row.push_back(csv::format(n.x(k)));
    for (int k = 0; k < d; ++k) row.push_back(csv::format(n.normal(k)));
    for (const auto& t : n.tangents)
      for (int k = 0; k < d; ++k) row.push_back(csv::format(t(k)));
    row.push_back(std::to_string(n.label));
    csv::write_row(os, row);
  }
}

BoundaryPointSet read_boundary_csv(std::istream& is) {
  const auto table = csv::read_table(is);
  // Columns: d coordinates, d normal components, (d-1)*d tangent components, label.
  const auto cols = table.header.size();
  int d = 0;
  for (int cand = 1; cand <= kMaxDim; ++cand)
    if (static_cast<std::size_t>(2 * cand + (cand - 1) * cand + 1) == cols) d = cand;
  if (d == 0) throw Error("boundary csv has an unexpected column count");
  std::vector<BoundaryNode> nodes;
  for (const auto& row : table.rows) {
    BoundaryNode n;
    n.x.resize(d);
    n.normal.resize(d);
    std::size_t c = 0;
    for (int k = 0; k < d; ++k) n.x(k) = csv::parse_double(row[c++]);
    for (int k = 0; k < d; ++k) n.normal(k) = csv::parse_double(row[c++]);
    for (int t = 0; t < d - 1; ++t) {
      Point tan(d);
      for (int k = 0; k < d; ++k) tan(k) = csv::parse_double(row[c++]);
      n.tangents.push_back(tan);
    }
    n.label = static_cast<int>(csv::parse_int(row[c]));
    nodes.push_back(std::move(n));
  }
  return BoundaryPointSet(d, std::move(nodes));
}

}  // namespace qlcoll
