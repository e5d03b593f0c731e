#pragma once

#include "qlcoll/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qlcoll {

enum class DomainKind { UnitInterval, Rectangle, UnitDisk };

/// Bounded domain in R^1 or R^2.
class Domain {
 public:
  static Domain unit_interval();
  static Domain rectangle(double a1, double b1, double a2, double b2);
  static Domain unit_disk();

  DomainKind kind() const { return kind_; }
  int dim() const { return kind_ == DomainKind::UnitInterval ? 1 : 2; }
  std::string name() const;

  /// Closed-domain membership with absolute tolerance.
  bool contains(const Point& x, double tol = 0.0) const;
  /// Distance of x from the boundary curve (zero on the boundary).
  double boundary_defect(const Point& x) const;
  /// Rectangles have corners, so theory that needs a C^1 boundary does not apply.
  bool has_c1_boundary() const { return kind_ != DomainKind::Rectangle; }

  Point lower() const;
  Point upper() const;
  double perimeter() const;

 private:
  Domain(DomainKind kind, double a1, double b1, double a2, double b2);

  DomainKind kind_;
  double a1_, b1_, a2_, b2_;
};

class PointSet {
 public:
  PointSet() = default;
  PointSet(int dim, std::vector<Point> points);

  int dim() const { return dim_; }
  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Point>& points() const { return points_; }
  auto begin() const { return points_.begin(); }
  auto end() const { return points_.end(); }

  PointSet appended(const PointSet& other) const;

 private:
  int dim_ = 0;
  std::vector<Point> points_;
};

struct BoundaryNode {
  Point x;
  Point normal;                 // outward, unit length
  std::vector<Point> tangents;  // d-1 unit vectors orthogonal to normal
  int label = 0;                // boundary component
};

class BoundaryPointSet {
 public:
  BoundaryPointSet() = default;
  BoundaryPointSet(int dim, std::vector<BoundaryNode> nodes);

  int dim() const { return dim_; }
  std::size_t size() const { return nodes_.size(); }
  const BoundaryNode& operator[](std::size_t i) const { return nodes_[i]; }
  const std::vector<BoundaryNode>& nodes() const { return nodes_; }
  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }

  PointSet positions() const;

 private:
  int dim_ = 0;
  std::vector<BoundaryNode> nodes_;
};

struct GeometryQuality {
  double fill_distance = 0.0;
  double separation_distance = 0.0;
  double uniformity_ratio = 0.0;
};

enum class PointStrategy { Grid, Halton };

PointStrategy parse_point_strategy(const std::string& name);
std::string to_string(PointStrategy s);

inline constexpr int kDefaultProbeResolution = 200;

/// n points strictly inside the domain. The grid strategy returns the
/// largest tensor grid with at most n points, so the count can be smaller
/// than requested; callers must use PointSet::size().
PointSet generate_interior_points(const Domain& domain, int n, PointStrategy strategy,
                                  std::uint64_t seed);

/// Boundary nodes equispaced in arc length with outward frames. The interval
/// always yields its two endpoints; rectangles list the four corners first.
BoundaryPointSet generate_boundary_points(const Domain& domain, int n);

/// Half the minimal pairwise distance (exhaustive scan).
double separation_distance(const PointSet& ps);

/// Largest distance from a probe point of the closed domain to the nearest
/// point of ps. The probe set is a tensor grid with resolution points per axis,
/// plus boundary samples; in 1D the midpoints between consecutive points are
/// added, which makes the value exact there.
double fill_distance(const PointSet& ps, const Domain& domain,
                     int probe_resolution = kDefaultProbeResolution);

double quasi_uniformity_ratio(const PointSet& ps, const Domain& domain);

GeometryQuality geometry_quality(const PointSet& ps, const Domain& domain,
                                 int probe_resolution = kDefaultProbeResolution);

/// Deterministic tensor probe grid over the closed domain with at least
/// resolution^d points.
PointSet probe_grid(const Domain& domain, int resolution);

/// Radical inverse of index in the given base.
double radical_inverse(std::uint64_t index, unsigned base);

// CSV round trip, 17 significant digits.
void write_points_csv(std::ostream& os, const PointSet& ps);
PointSet read_points_csv(std::istream& is);
void write_boundary_csv(std::ostream& os, const BoundaryPointSet& bs);
BoundaryPointSet read_boundary_csv(std::istream& is);

}  // namespace qlcoll
