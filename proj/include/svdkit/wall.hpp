#pragma once

#include <vector>

#include "svdkit/geometry.hpp"

namespace svdkit {

/// Oriented polyline across which a field jumps. Crossing from the left side
/// of a segment to its right side adds that segment's height.
struct JumpWall {
  std::vector<Point> vertices;
  std::vector<double> heights;  // one per segment
  bool closed = false;

  static JumpWall polyline(std::vector<Point> vertices, double height, bool closed = false);

  std::size_t segment_count() const { return closed ? vertices.size() : vertices.size() - 1; }
  Point seg_a(std::size_t i) const { return vertices[i]; }
  Point seg_b(std::size_t i) const { return vertices[(i + 1) % vertices.size()]; }
  bool uniform_height() const;

  /// Throws ContractError on malformed data.
  void validate() const;
};

/// w * C((x . nu - a) / (b - a)), clamped to [0, 1].
struct CantorChannel {
  Point direction{1.0, 0.0};
  double band_lo = 0.0;
  double band_hi = 1.0;
  double weight = 1.0;

  double level(Point x) const;
  void validate() const;
};

}  // namespace svdkit
