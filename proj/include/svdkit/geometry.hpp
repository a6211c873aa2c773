#pragma once

#include <cmath>
#include <optional>
#include <vector>

namespace svdkit {

/// Absolute tolerance for "point lies on a curve" decisions.
inline constexpr double kGeomTol = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline Point perp_left(Point a) { return {-a.y, a.x}; }

struct Segment {
  Point a;
  Point b;
};

struct Rect {
  double xmin = 0.0, ymin = 0.0, xmax = 0.0, ymax = 0.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains_closed(Point p) const { return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax; }
  bool contains_open(Point p) const { return p.x > xmin && p.x < xmax && p.y > ymin && p.y < ymax; }
};

/// Sign of cross(b - a, c - a): +1 when c is left of the directed line a->b.
/// Floating-point filter with an exact rational fallback.
int orient(Point a, Point b, Point c);

enum class Contact { none, proper, touching, overlapping };

/// Classifies closed segments pq and ab. `proper` means a single transversal
/// crossing interior to both; `touching` covers endpoint contact and T-contacts.
Contact classify_segments(Point p, Point q, Point a, Point b);

/// Parameter s in (0, 1) of the crossing point p + s (q - p) for a proper crossing.
double crossing_parameter(Point p, Point q, Point a, Point b);

double distance_to_segment(Point p, Point a, Point b);

/// Parameter of the orthogonal projection of p on segment ab, clamped to [0, 1].
double project_on_segment(Point p, Point a, Point b);

/// Signed angle subtended by segment ab at x, in (-pi, pi). Jumps by 2 pi
/// across the open segment and is smooth elsewhere.
double subtended_angle(Point a, Point b, Point x);

/// Gradient of subtended_angle with respect to x.
Point subtended_angle_gradient(Point a, Point b, Point x);

/// Bounded open planar domain given by a simple polygon (stored counter-clockwise).
class Domain {
 public:
  static Domain rectangle(double xmin, double ymin, double xmax, double ymax);
  static Domain polygon(std::vector<Point> vertices);

  bool is_rectangle() const { return is_rectangle_; }
  const std::vector<Point>& vertices() const { return vertices_; }
  Rect bounds() const { return bounds_; }
  double area() const { return area_; }
  double boundary_length() const { return boundary_length_; }
  double diameter() const { return std::hypot(bounds_.width(), bounds_.height()); }

  /// Strictly inside, farther than kGeomTol from the boundary.
  bool contains(Point p) const;
  /// Inside or on the boundary (within kGeomTol).
  bool contains_closed(Point p) const;
  /// Both endpoints strictly inside and the segment never meets the boundary.
  bool contains_segment(Point p, Point q) const;
  double boundary_distance(Point p) const;

  /// Arc-length coordinate of a boundary point, when p lies on the boundary.
  std::optional<double> boundary_coordinate(Point p, double tol = 1e-9) const;
  /// Counter-clockwise boundary path from arc-length s0 to s1 (inclusive ends).
  std::vector<Point> boundary_path(double s0, double s1) const;
  Point boundary_point(double s) const;

 private:
  Domain(std::vector<Point> vertices, bool is_rectangle);

  std::vector<Point> vertices_;
  std::vector<double> cumulative_;  // arc length at each vertex
  Rect bounds_;
  double area_ = 0.0;
  double boundary_length_ = 0.0;
  bool is_rectangle_ = false;
};

}  // namespace svdkit
