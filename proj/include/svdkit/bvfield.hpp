#pragma once

#include <vector>

#include "svdkit/bv1d.hpp"
#include "svdkit/chains.hpp"
#include "svdkit/geometry.hpp"
#include "svdkit/wall.hpp"

namespace svdkit {

/// Bilinear interpolant of samples on a regular lattice covering `box`.
/// Queries outside the box are clamped to it.
class SmoothGrid {
 public:
  static SmoothGrid constant(double value);
  /// `values` is row-major with nx columns and ny rows, row 0 at ymin.
  static SmoothGrid samples(Rect box, int nx, int ny, std::vector<double> values);
  /// Samples sum c[k] x^i y^j (k enumerating i + j <= 3 as listed by polynomial_terms) at the lattice nodes.
  static SmoothGrid polynomial(Rect box, int nx, int ny, const std::vector<double>& coefficients);
  static std::vector<std::pair<int, int>> polynomial_terms();

  bool is_constant() const { return nx_ == 0; }
  Rect box() const { return box_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const std::vector<double>& values() const { return values_; }

  double value(Point p) const;
  Point gradient(Point p) const;
  /// Coefficient of x*y in the cell containing p, in unscaled coordinates.
  double twist(Point p) const;

  /// Parameters in (0, 1) at which segment pq crosses lattice lines.
  std::vector<double> cell_crossings(Point p, Point q) const;

  SmoothGrid plus(const SmoothGrid& other) const;
  SmoothGrid scaled(double factor) const;

 private:
  struct Cell {
    int i, j;
    double fx, fy;
  };
  Cell locate(Point p) const;
  double node(int i, int j) const { return values_[static_cast<std::size_t>(j) * nx_ + i]; }

  Rect box_{};
  int nx_ = 0;
  int ny_ = 0;
  std::vector<double> values_;  // a single value when constant
};

/// Smooth grid part + jump walls + Cantor channels on a planar domain.
class StructuredBVField {
 public:
  StructuredBVField(Domain domain, SmoothGrid smooth, std::vector<JumpWall> walls = {},
                    std::vector<CantorChannel> channels = {}, int cantor_depth = kDefaultCantorDepth);

  const Domain& domain() const { return domain_; }
  const SmoothGrid& smooth() const { return smooth_; }
  const std::vector<JumpWall>& walls() const { return walls_; }
  const std::vector<CantorChannel>& channels() const { return channels_; }
  int cantor_depth() const { return depth_; }

  bool on_wall(Point x) const;
  /// Value at a point off every wall.
  double value(Point x) const;
  /// Limit of the field along the ray from x in direction `dir`.
  double directional_limit(Point x, Point dir) const;
  double eval_lower(Point x) const;
  double eval_upper(Point x) const;
  double jump_size(Point x) const;
  /// Approximate gradient at a point off every wall.
  Point gradient(Point x) const;
  bool has_ac_walls() const;

  StructuredBVField with_smooth(SmoothGrid smooth) const;
  StructuredBVField scaled(double factor) const;
  StructuredBVField scaled_singular(double factor) const;

 private:
  struct Sector {
    double lo, hi;          // direction angles
    double at_lo, at_hi;    // one-sided limits at the sector ends
  };
  std::vector<Sector> sectors(Point x) const;
  double wall_value(std::size_t w, Point x) const;

  Domain domain_;
  SmoothGrid smooth_;
  std::vector<JumpWall> walls_;
  std::vector<CantorChannel> channels_;
  int depth_;
};

double eval_lower(const StructuredBVField& f, Point x);
double jump_size(const StructuredBVField& f, Point x);

/// Exact restriction of f to the chain. Throws ChainRejected when a vertex lies
/// on a wall, an endpoint lies on a Cantor fiber, or contact is degenerate.
BVProfile restrict(const StructuredBVField& f, const PolygonalChain& chain);

/// Jump + Cantor variation of the restriction, without building the AC part.
double singular_variation(const StructuredBVField& f, const PolygonalChain& chain);

bool is_admissible_node(const StructuredBVField& f, Point x);

/// Wall segments split at every mutual contact, with duplicates removed.
std::vector<Segment> arrangement_pieces(const std::vector<JumpWall>& walls);

}  // namespace svdkit
