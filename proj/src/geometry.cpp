#include "svdkit/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svdkit/errors.hpp"

namespace svdkit {

namespace {

using Rational = boost::multiprecision::cpp_rational;

int exact_orient(Point a, Point b, Point c) {
  const Rational ax(a.x), ay(a.y), bx(b.x), by(b.y), cx(c.x), cy(c.y);
  const Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return det > 0 ? 1 : (det < 0 ? -1 : 0);
}

bool on_collinear_segment(Point p, Point a, Point b) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

double signed_area(const std::vector<Point>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice += cross(v[i], v[(i + 1) % v.size()]);
  return 0.5 * twice;
}

}  // namespace

int orient(Point a, Point b, Point c) {
  const double l = (b.x - a.x) * (c.y - a.y);
  const double r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  const double bound = 3.3306690738754716e-16 * (std::abs(l) + std::abs(r));
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return exact_orient(a, b, c);
}

Contact classify_segments(Point p, Point q, Point a, Point b) {
  const int o1 = orient(a, b, p);
  const int o2 = orient(a, b, q);
  const int o3 = orient(p, q, a);
  const int o4 = orient(p, q, b);

  if (o1 * o2 < 0 && o3 * o4 < 0) return Contact::proper;

  if (o1 == 0 && o2 == 0) {
    // Collinear: compare extents along the dominant axis.
    const bool use_x = std::abs(q.x - p.x) + std::abs(b.x - a.x) >= std::abs(q.y - p.y) + std::abs(b.y - a.y);
    auto coord = [use_x](Point z) { return use_x ? z.x : z.y; };
    const double lo1 = std::min(coord(p), coord(q)), hi1 = std::max(coord(p), coord(q));
    const double lo2 = std::min(coord(a), coord(b)), hi2 = std::max(coord(a), coord(b));
    const double lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
    if (lo > hi) return Contact::none;
    return lo < hi ? Contact::overlapping : Contact::touching;
  }

  if ((o1 == 0 && on_collinear_segment(p, a, b)) || (o2 == 0 && on_collinear_segment(q, a, b)) ||
      (o3 == 0 && on_collinear_segment(a, p, q)) || (o4 == 0 && on_collinear_segment(b, p, q))) {
    return Contact::touching;
  }
  return Contact::none;
}

double crossing_parameter(Point p, Point q, Point a, Point b) {
  const Point d = q - p;
  const Point e = b - a;
  return cross(a - p, e) / cross(d, e);
}

double project_on_segment(Point p, Point a, Point b) {
  const Point e = b - a;
  const double len2 = dot(e, e);
  if (len2 == 0.0) return 0.0;
  return std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
}

double distance_to_segment(Point p, Point a, Point b) {
  const double s = project_on_segment(p, a, b);
  return norm(p - (a + s * (b - a)));
}

double subtended_angle(Point a, Point b, Point x) {
  const Point da = a - x;
  const Point db = b - x;
  return std::atan2(cross(da, db), dot(da, db));
}

Point subtended_angle_gradient(Point a, Point b, Point x) {
  auto grad_arg = [x](Point p) {
    const Point d = p - x;
    const double r2 = dot(d, d);
    return Point{d.y / r2, -d.x / r2};
  };
  return grad_arg(b) - grad_arg(a);
}

Domain::Domain(std::vector<Point> vertices, bool is_rectangle)
    : vertices_(std::move(vertices)), is_rectangle_(is_rectangle) {
  bounds_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Point& v : vertices_) {
    bounds_.xmin = std::min(bounds_.xmin, v.x);
    bounds_.ymin = std::min(bounds_.ymin, v.y);
    bounds_.xmax = std::max(bounds_.xmax, v.x);
    bounds_.ymax = std::max(bounds_.ymax, v.y);
  }
  area_ = signed_area(vertices_);
  cumulative_.resize(vertices_.size() + 1, 0.0);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    cumulative_[i + 1] = cumulative_[i] + norm(vertices_[(i + 1) % vertices_.size()] - vertices_[i]);
  }
  boundary_length_ = cumulative_.back();
}

Domain Domain::rectangle(double xmin, double ymin, double xmax, double ymax) {
  if (!(xmin < xmax && ymin < ymax)) throw ContractError("rectangle domain needs xmin < xmax and ymin < ymax");
  return Domain({{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}}, true);
}

Domain Domain::polygon(std::vector<Point> vertices) {
  if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
  if (vertices.size() < 3) throw ContractError("polygon domain needs at least 3 vertices");
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (vertices[i] == vertices[(i + 1) % n]) throw ContractError("polygon domain has a repeated vertex");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      const Contact c = classify_segments(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]);
      if (adjacent ? c == Contact::overlapping : c != Contact::none) {
        throw ContractError("polygon domain is not simple");
      }
    }
  }
  const double area = signed_area(vertices);
  if (area == 0.0) throw ContractError("polygon domain has zero area");
  if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
  return Domain(std::move(vertices), false);
}

double Domain::boundary_distance(Point p) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    best = std::min(best, distance_to_segment(p, vertices_[i], vertices_[(i + 1) % vertices_.size()]));
  }
  return best;
}

bool Domain::contains_closed(Point p) const {
  if (boundary_distance(p) <= kGeomTol) return true;
  // Crossing-number test with exact orientation.
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      const int o = orient(a, b, p);
      if ((b.y > a.y) ? o > 0 : o < 0) inside = !inside;
    }
  }
  return inside;
}

bool Domain::contains(Point p) const {
  if (is_rectangle_) {
    return p.x - bounds_.xmin > kGeomTol && bounds_.xmax - p.x > kGeomTol && p.y - bounds_.ymin > kGeomTol &&
           bounds_.ymax - p.y > kGeomTol;
  }
  return boundary_distance(p) > kGeomTol && contains_closed(p);
}

bool Domain::contains_segment(Point p, Point q) const {
  if (!contains(p) || !contains(q)) return false;
  if (is_rectangle_) return true;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (classify_segments(p, q, vertices_[i], vertices_[(i + 1) % n]) != Contact::none) return false;
  }
  return true;
}

std::optional<double> Domain::boundary_coordinate(Point p, double tol) const {
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = vertices_[i];
    const Point b = vertices_[(i + 1) % n];
    if (distance_to_segment(p, a, b) <= tol) {
      return cumulative_[i] + project_on_segment(p, a, b) * (cumulative_[i + 1] - cumulative_[i]);
    }
  }
  return std::nullopt;
}

Point Domain::boundary_point(double s) const {
  s = std::fmod(s, boundary_length_);
  if (s < 0.0) s += boundary_length_;
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()) - 1,
                                              vertices_.size() - 1);
  const Point a = vertices_[i];
  const Point b = vertices_[(i + 1) % vertices_.size()];
  const double len = cumulative_[i + 1] - cumulative_[i];
  return a + ((s - cumulative_[i]) / len) * (b - a);
}

std::vector<Point> Domain::boundary_path(double s0, double s1) const {
  while (s1 <= s0) s1 += boundary_length_;
  std::vector<Point> path{boundary_point(s0)};
  const std::size_t n = vertices_.size();
  // Polygon corners strictly between s0 and s1 (possibly wrapping once).
  for (int lap = 0; lap < 2; ++lap) {
    for (std::size_t i = 0; i < n; ++i) {
      const double s = cumulative_[i] + lap * boundary_length_;
      if (s > s0 + 1e-12 && s < s1 - 1e-12) path.push_back(vertices_[i]);
    }
  }
  path.push_back(boundary_point(s1));
  return path;
}

}  // namespace svdkit
