#include "svdkit/chains.hpp"

#include <algorithm>

#include "svdkit/errors.hpp"

namespace svdkit {

Point PolygonalChain::at(double t) const {
  const std::size_t i = segment_of(t);
  return feet_[i] + (t + offsets_[i]) * directions_[i];
}

std::size_t PolygonalChain::segment_of(double t) const {
  const auto it = std::upper_bound(params_.begin(), params_.end(), t);
  const auto idx = static_cast<std::size_t>(it - params_.begin());
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, segment_count() - 1);
}

PolygonalChain PolygonalChain::reversed() const {
  PolygonalChain r;
  r.vertices_.assign(vertices_.rbegin(), vertices_.rend());
  const double len = length();
  for (auto it = params_.rbegin(); it != params_.rend(); ++it) r.params_.push_back(len - *it);
  for (std::size_t k = segment_count(); k-- > 0;) {
    const Point eta = -1.0 * directions_[k];
    const double a_prev = r.params_[r.directions_.size()];
    const Point p = r.vertices_[r.directions_.size()];
    r.directions_.push_back(eta);
    r.feet_.push_back(p - dot(p, eta) * eta);
    r.offsets_.push_back(dot(p, eta) - a_prev);
  }
  return r;
}

PolygonalChain validate_chain(const Domain& domain, const std::vector<Point>& vertices) {
  if (vertices.size() < 2) throw ChainRejected(0, "needs at least two vertices");
  const std::size_t m = vertices.size() - 1;
  PolygonalChain c;
  c.vertices_ = vertices;
  c.params_.push_back(0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const Point p = vertices[i];
    const Point q = vertices[i + 1];
    const double len = norm(q - p);
    if (len == 0.0) throw ChainRejected(i, "zero-length segment");
    if (!domain.contains_segment(p, q)) throw ChainRejected(i, "segment leaves the domain");
    const Point eta = (1.0 / len) * (q - p);
    c.directions_.push_back(eta);
    c.feet_.push_back(p - dot(p, eta) * eta);
    c.offsets_.push_back(dot(p, eta) - c.params_.back());
    c.params_.push_back(c.params_.back() + len);
  }
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (vertices[i] == vertices[j]) throw ChainRejected(j == 0 ? 0 : j - 1, "repeated vertex");
    }
  }
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      const Contact contact = classify_segments(vertices[i], vertices[i + 1], vertices[j], vertices[j + 1]);
      const bool ok = (i + 1 == j) ? contact != Contact::overlapping : contact == Contact::none;
      if (!ok) throw ChainRejected(j, "chain is not simple");
    }
  }
  return c;
}

std::vector<Crossing> wall_crossings(const PolygonalChain& chain, const JumpWall& wall) {
  std::vector<Crossing> out;
  const auto& v = chain.vertices();
  for (std::size_t i = 0; i < chain.segment_count(); ++i) {
    const Point p = v[i];
    const Point q = v[i + 1];
    for (std::size_t k = 0; k < wall.segment_count(); ++k) {
      const Point a = wall.seg_a(k);
      const Point b = wall.seg_b(k);
      switch (classify_segments(p, q, a, b)) {
        case Contact::none:
          break;
        case Contact::proper: {
          const double s = crossing_parameter(p, q, a, b);
          const double t = chain.params()[i] + s * (chain.params()[i + 1] - chain.params()[i]);
          out.push_back({t, orient(a, b, p) > 0 ? 1 : -1, i, k});
          break;
        }
        case Contact::touching:
          throw ChainRejected(i, "degenerate contact with a wall");
        case Contact::overlapping:
          throw ChainRejected(i, "segment runs along a wall");
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& l, const Crossing& r) { return l.t < r.t; });
  return out;
}

}  // namespace svdkit
