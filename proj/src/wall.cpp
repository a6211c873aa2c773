#include "svdkit/wall.hpp"

#include <algorithm>
#include <cmath>

#include "svdkit/errors.hpp"

namespace svdkit {

JumpWall JumpWall::polyline(std::vector<Point> vertices, double height, bool closed) {
  JumpWall w;
  w.closed = closed;
  w.vertices = std::move(vertices);
  if (w.vertices.size() >= 2) w.heights.assign(w.segment_count(), height);
  return w;
}

bool JumpWall::uniform_height() const {
  return std::all_of(heights.begin(), heights.end(), [this](double h) { return h == heights.front(); });
}

void JumpWall::validate() const {
  if (vertices.size() < 2 || (closed && vertices.size() < 3)) throw ContractError("wall needs more vertices");
  if (heights.size() != segment_count()) throw ContractError("wall needs one height per segment");
  for (std::size_t i = 0; i < segment_count(); ++i) {
    if (!std::isfinite(heights[i]) || heights[i] == 0.0) throw ContractError("wall heights must be finite and nonzero");
    if (seg_a(i) == seg_b(i)) throw ContractError("wall segment has zero length");
  }
  const std::size_t n = segment_count();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (closed && i == 0 && j == n - 1);
      const Contact c = classify_segments(seg_a(i), seg_b(i), seg_a(j), seg_b(j));
      if (adjacent ? c == Contact::overlapping : c != Contact::none) throw ContractError("wall polyline is not simple");
    }
  }
}

double CantorChannel::level(Point x) const {
  return std::clamp((dot(x, direction) - band_lo) / (band_hi - band_lo), 0.0, 1.0);
}

void CantorChannel::validate() const {
  if (!(std::abs(norm(direction) - 1.0) <= 1e-12)) throw ContractError("channel direction must be a unit vector");
  if (!(band_lo < band_hi)) throw ContractError("channel band needs a < b");
  if (!std::isfinite(weight) || weight == 0.0) throw ContractError("channel weight must be finite and nonzero");
}

}  // namespace svdkit
