#pragma once

#include <cstddef>
#include <vector>

#include "svdkit/geometry.hpp"
#include "svdkit/wall.hpp"

namespace svdkit {

/// Arc-length parameterized simple polygonal chain. On segment i the chain is
/// gamma(t) = foot[i] + (t + offset[i]) * direction[i], with foot[i] on the
/// line through the origin orthogonal to direction[i].
class PolygonalChain {
 public:
  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<double>& params() const { return params_; }
  std::size_t segment_count() const { return vertices_.size() - 1; }
  double length() const { return params_.back(); }

  Point direction(std::size_t i) const { return directions_[i]; }
  Point foot(std::size_t i) const { return feet_[i]; }
  double offset(std::size_t i) const { return offsets_[i]; }

  Point at(double t) const;
  std::size_t segment_of(double t) const;
  PolygonalChain reversed() const;

 private:
  friend PolygonalChain validate_chain(const Domain& domain, const std::vector<Point>& vertices);

  std::vector<Point> vertices_;
  std::vector<double> params_;
  std::vector<Point> directions_;
  std::vector<Point> feet_;
  std::vector<double> offsets_;
};

/// Throws ChainRejected naming the first violation.
PolygonalChain validate_chain(const Domain& domain, const std::vector<Point>& vertices);

struct Crossing {
  double t = 0.0;
  int sign = 0;  // +1 when passing from the left of the wall segment to its right
  std::size_t chain_segment = 0;
  std::size_t wall_segment = 0;
};

/// Transversal crossings sorted by parameter. Tangential or degenerate contact
/// throws ChainRejected with the chain segment index.
std::vector<Crossing> wall_crossings(const PolygonalChain& chain, const JumpWall& wall);

}  // namespace svdkit
