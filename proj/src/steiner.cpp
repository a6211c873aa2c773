#include "svdkit/steiner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "svdkit/errors.hpp"
#include "svdkit/parallel.hpp"

namespace svdkit {

namespace {

constexpr std::array<double, 4> kGauss4X{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
constexpr std::array<double, 4> kGauss4W{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                         0.3478548451374538};
const double kGauss2 = 1.0 / std::sqrt(3.0);

// Clips segment pq to the closed box; returns false when nothing is left.
bool clip_to_box(Point& p, Point& q, const Rect& box) {
  double t0 = 0.0, t1 = 1.0;
  const Point d = q - p;
  const std::array<std::pair<double, double>, 4> planes{{{-d.x, p.x - box.xmin},
                                                         {d.x, box.xmax - p.x},
                                                         {-d.y, p.y - box.ymin},
                                                         {d.y, box.ymax - p.y}}};
  for (const auto& [pk, qk] : planes) {
    if (pk == 0.0) {
      if (qk < 0.0) return false;
      continue;
    }
    const double r = qk / pk;
    if (pk < 0.0) t0 = std::max(t0, r); else t1 = std::min(t1, r);
  }
  if (!(t1 > t0)) return false;
  const Point a = p;
  if (t0 > 0.0) p = a + t0 * d;
  if (t1 < 1.0) q = a + t1 * d;
  return true;
}

// Length of the line {x . nu = tau} inside the box.
double chord_length(const Rect& box, Point nu, double tau) {
  const Point base = tau * nu;
  const Point along = perp_left(nu);
  const double big = 4.0 * (std::abs(box.xmin) + std::abs(box.xmax) + std::abs(box.ymin) + std::abs(box.ymax) + 1.0);
  Point p = base - big * along;
  Point q = base + big * along;
  if (!clip_to_box(p, q, box)) return 0.0;
  return norm(q - p);
}

template <class F>
double integrate_segment(Point a, Point b, int subdivisions, F&& integrand) {
  const double len = norm(b - a);
  double sum = 0.0;
  for (int s = 0; s < subdivisions; ++s) {
    const double lo = static_cast<double>(s) / subdivisions, hi = static_cast<double>(s + 1) / subdivisions;
    for (std::size_t g = 0; g < 4; ++g) {
      const double t = 0.5 * (lo + hi) + 0.5 * (hi - lo) * kGauss4X[g];
      sum += kGauss4W[g] * 0.5 * (hi - lo) * integrand(a + t * (b - a));
    }
  }
  return sum * len;
}

bool on_box_edge(Point p, const Rect& box) {
  return std::abs(p.x - box.xmin) <= 1e-12 || std::abs(p.x - box.xmax) <= 1e-12 || std::abs(p.y - box.ymin) <= 1e-12 ||
         std::abs(p.y - box.ymax) <= 1e-12;
}

std::vector<Point> quadrature_points(const Rect& box, int n) {
  std::vector<Point> pts;
  const double hx = box.width() / n, hy = box.height() / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double cx = box.xmin + (i + 0.5) * hx, cy = box.ymin + (j + 0.5) * hy;
      for (double sx : {-kGauss2, kGauss2}) {
        for (double sy : {-kGauss2, kGauss2}) pts.push_back({cx + 0.5 * hx * sx, cy + 0.5 * hy * sy});
      }
    }
  }
  return pts;
}


using Polygon = std::vector<Point>;

// Degree-5 rule on a triangle: barycentric (a, b, b) orbits plus the centroid.
constexpr std::array<std::array<double, 3>, 3> kTriangleRule{{{1.0 / 3.0, 1.0 / 3.0, 0.225},
                                                              {0.0597158717897698, 0.4701420641051151, 0.1323941527885062},
                                                              {0.7974269853530873, 0.1012865073234563, 0.1259391805448272}}};

// Splits a convex polygon by the line through a and b; pieces touching the line only are kept whole.
void split_by_line(const Polygon& poly, Point a, Point b, std::vector<Polygon>& out) {
  const Point d = b - a;
  const double scale = norm(d);
  std::vector<double> side(poly.size());
  bool pos = false, neg = false;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    side[i] = cross(d, poly[i] - a) / scale;
    pos = pos || side[i] > 1e-13;
    neg = neg || side[i] < -1e-13;
  }
  if (!(pos && neg)) {
    out.push_back(poly);
    return;
  }
  Polygon left, right;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const std::size_t j = (i + 1) % poly.size();
    const double si = side[i], sj = side[j];
    if (si >= 0.0) left.push_back(poly[i]);
    if (si <= 0.0) right.push_back(poly[i]);
    if ((si > 0.0 && sj < 0.0) || (si < 0.0 && sj > 0.0)) {
      const Point x = poly[i] + (si / (si - sj)) * (poly[j] - poly[i]);
      left.push_back(x);
      right.push_back(x);
    }
  }
  out.push_back(std::move(left));
  out.push_back(std::move(right));
}

template <class F>
double integrate_convex(const Polygon& poly, F&& integrand) {
  double sum = 0.0;
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
    const Point p0 = poly[0], p1 = poly[k], p2 = poly[k + 1];
    const double area = 0.5 * std::abs(cross(p1 - p0, p2 - p0));
    if (area <= 0.0) continue;
    for (const auto& [ra, rb, w] : kTriangleRule) {
      const double rc = 1.0 - ra - rb;
      if (ra == rb) {
        sum += area * w * integrand(ra * p0 + rb * p1 + rc * p2);
        continue;
      }
      sum += area * w * integrand(ra * p0 + rb * p1 + rb * p2);
      sum += area * w * integrand(rb * p0 + ra * p1 + rb * p2);
      sum += area * w * integrand(rb * p0 + rb * p1 + ra * p2);
    }
  }
  return sum;
}

using ChannelKey = std::tuple<double, double, double, double>;

ChannelKey key_of(const CantorChannel& c) { return {c.direction.x, c.direction.y, c.band_lo, c.band_hi}; }

void require_same_domain(const StructuredBVField& v, const StructuredBVField& b) {
  if (v.domain().vertices() != b.domain().vertices()) throw ContractError("v and b must live on the same domain");
}

}  // namespace

VDistributedSet steiner_set(const StructuredBVField& v) {
  const Rect box = v.domain().bounds();
  constexpr int n = 64;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Point p{box.xmin + (i + 0.5) * box.width() / n, box.ymin + (j + 0.5) * box.height() / n};
      if (v.domain().contains(p) && !v.on_wall(p) && v.value(p) < -1e-12) {
        throw ContractError("v takes negative values");
      }
    }
  }
  return {v, StructuredBVField(v.domain(), SmoothGrid::constant(0.0))};
}

double interval_symmetric_difference(double c1, double len1, double c2, double len2) {
  len1 = std::max(len1, 0.0);
  len2 = std::max(len2, 0.0);
  const double overlap =
      std::max(0.0, std::min(c1 + 0.5 * len1, c2 + 0.5 * len2) - std::max(c1 - 0.5 * len1, c2 - 0.5 * len2));
  return len1 + len2 - 2.0 * (len1 > 0.0 && len2 > 0.0 ? overlap : 0.0);
}

PerimeterBreakdown perimeter_breakdown(const VDistributedSet& e, const SubRect& sub, const QuadratureOptions& q) {
  require_same_domain(e.v, e.b);
  const Domain& dom = e.v.domain();
  const Rect& box = sub.box;
  PerimeterBreakdown out;

  // Graph area of b + v/2 and b - v/2 over {v > 0}. Cells met by a wall or
  // the domain boundary are cut along those lines so that no integrand
  // discontinuity crosses a quadrature piece.
  std::vector<JumpWall> all = e.v.walls();
  all.insert(all.end(), e.b.walls().begin(), e.b.walls().end());
  std::vector<Segment> cuts = arrangement_pieces(all);
  const auto& dv = dom.vertices();
  for (std::size_t k = 0; k < dv.size(); ++k) cuts.push_back({dv[k], dv[(k + 1) % dv.size()]});

  auto area_density = [&](Point x) {
    if (!dom.contains(x) || !(e.v.value(x) > 0.0)) return 0.0;
    const Point gv = e.v.gradient(x), gb = e.b.gradient(x);
    const Point up = gb + 0.5 * gv, down = gb - 0.5 * gv;
    return std::sqrt(1.0 + dot(up, up)) + std::sqrt(1.0 + dot(down, down));
  };
  const int n = q.cells_per_side;
  const double hx = box.width() / n, hy = box.height() / n;
  std::vector<double> contrib(static_cast<std::size_t>(n) * n, 0.0);
  parallel_for(contrib.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
    const Rect cell{box.xmin + i * hx, box.ymin + j * hy, box.xmin + (i + 1) * hx, box.ymin + (j + 1) * hy};
    std::vector<Polygon> pieces{{{cell.xmin, cell.ymin}, {cell.xmax, cell.ymin}, {cell.xmax, cell.ymax}, {cell.xmin, cell.ymax}}};
    for (const Segment& c : cuts) {
      Point a = c.a, b = c.b;
      if (!clip_to_box(a, b, cell) || norm(b - a) <= 1e-14) continue;
      std::vector<Polygon> next;
      for (const Polygon& p : pieces) split_by_line(p, c.a, c.b, next);
      pieces = std::move(next);
    }
    if (pieces.size() == 1) {
      const double cx = 0.5 * (cell.xmin + cell.xmax), cy = 0.5 * (cell.ymin + cell.ymax);
      double sum = 0.0;
      for (double sx : {-kGauss2, kGauss2}) {
        for (double sy : {-kGauss2, kGauss2}) sum += area_density({cx + 0.5 * hx * sx, cy + 0.5 * hy * sy});
      }
      contrib[k] = 0.25 * hx * hy * sum;
      return;
    }
    for (const Polygon& p : pieces) contrib[k] += integrate_convex(p, area_density);
  });
  for (double c : contrib) out.ac += c;

  // Vertical walls over the jump set.
  for (const Segment& s : arrangement_pieces(all)) {
    Point a = s.a, b = s.b;
    if (!clip_to_box(a, b, box) || norm(b - a) <= 1e-14) continue;
    const Point mid = 0.5 * (a + b);
    if (dom.boundary_distance(mid) <= 1e-9) continue;
    if (!sub.closed && on_box_edge(mid, box) && on_box_edge(a, box) && on_box_edge(b, box)) continue;
    const Point n = (1.0 / norm(s.b - s.a)) * perp_left(s.b - s.a);
    out.jump += integrate_segment(a, b, q.piece_subdivisions, [&](Point x) {
      return interval_symmetric_difference(e.b.directional_limit(x, n), e.v.directional_limit(x, n),
                                           e.b.directional_limit(x, -1.0 * n), e.v.directional_limit(x, -1.0 * n));
    });
  }

  // Vertical walls over the Cantor sets: |D^c (b + v/2)| + |D^c (b - v/2)|.
  std::map<ChannelKey, std::pair<double, double>> groups;
  for (const CantorChannel& c : e.v.channels()) groups[key_of(c)].first += c.weight;
  for (const CantorChannel& c : e.b.channels()) groups[key_of(c)].second += c.weight;
  const int depth = e.v.cantor_depth();
  for (const auto& [key, w] : groups) {
    const auto [nx, ny, lo, hi] = key;
    const Point nu{nx, ny};
    const double coef = std::abs(w.second + 0.5 * w.first) + std::abs(w.second - 0.5 * w.first);
    std::vector<double> s{0.0, 1.0};
    for (Point c : {Point{box.xmin, box.ymin}, Point{box.xmax, box.ymin}, Point{box.xmin, box.ymax},
                    Point{box.xmax, box.ymax}}) {
      const double sc = (dot(c, nu) - lo) / (hi - lo);
      if (sc > 0.0 && sc < 1.0) s.push_back(sc);
    }
    std::sort(s.begin(), s.end());
    double integral = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
      if (!(s[k] > s[k - 1])) continue;
      const double l0 = chord_length(box, nu, lo + s[k - 1] * (hi - lo));
      const double l1 = chord_length(box, nu, lo + s[k] * (hi - lo));
      const double beta = (l1 - l0) / (s[k] - s[k - 1]);
      const double alpha = l0 - beta * s[k - 1];
      const double dc = cantor_eval(s[k], depth) - cantor_eval(s[k - 1], depth);
      const double dm = cantor_moment(s[k], depth) - cantor_moment(s[k - 1], depth);
      integral += alpha * dc + beta * dm;
    }
    out.cantor += coef * integral;
  }

  // Lateral surface over the domain boundary.
  if (sub.closed) {
    const double inset = 1e-9 * dom.diameter();
    for (std::size_t k = 0; k < dv.size(); ++k) {
      Point a = dv[k], b = dv[(k + 1) % dv.size()];
      const Point inward = (1.0 / norm(b - a)) * perp_left(b - a);
      if (!clip_to_box(a, b, box) || norm(b - a) <= 1e-14) continue;
      out.boundary += integrate_segment(a, b, q.piece_subdivisions,
                                        [&](Point x) { return std::max(0.0, e.v.value(x + inset * inward)); });
    }
  }
  return out;
}

double perimeter(const VDistributedSet& e, const SubRect& b, const QuadratureOptions& q) {
  return perimeter_breakdown(e, b, q).total();
}

void check_positivity_precondition(const StructuredBVField& v, double resolution) {
  const Rect box = v.domain().bounds();
  const int nx = static_cast<int>(std::floor(box.width() / resolution + 1e-9));
  const int ny = static_cast<int>(std::floor(box.height() / resolution + 1e-9));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point p{box.xmin + (i + 0.5) * resolution, box.ymin + (j + 0.5) * resolution};
      if (!is_admissible_node(v, p)) continue;
      if (!(v.eval_lower(p) > 0.0)) {
        std::ostringstream msg;
        msg << "v vanishes at admissible node (" << p.x << ", " << p.y << ")";
        throw PreconditionViolation(msg.str());
      }
    }
  }
}

EqualityReport check_equality_case(const StructuredBVField& v, const StructuredBVField& b, const EqualityOptions& opt) {
  require_same_domain(v, b);
  check_positivity_precondition(v, opt.resolution);
  EqualityReport r;
  const Domain& dom = v.domain();
  std::ostringstream detail;

  r.gradient_vanishes = true;
  for (const Point& x : quadrature_points(dom.bounds(), opt.quadrature.cells_per_side)) {
    if (!dom.contains(x)) continue;
    if (norm(b.gradient(x)) > opt.tol) {
      r.gradient_vanishes = false;
      detail << "grad b = " << norm(b.gradient(x)) << " at (" << x.x << ", " << x.y << "); ";
      break;
    }
  }

  r.jumps_dominated = true;
  for (const Segment& s : arrangement_pieces(b.walls())) {
    if (!r.jumps_dominated) break;
    if (dom.boundary_distance(0.5 * (s.a + s.b)) <= 1e-9) continue;
    const Point n = (1.0 / norm(s.b - s.a)) * perp_left(s.b - s.a);
    for (int k = 1; k <= 16 && r.jumps_dominated; ++k) {
      const Point x = s.a + ((k - 0.5) / 16.0) * (s.b - s.a);
      const double jb = std::abs(b.directional_limit(x, n) - b.directional_limit(x, -1.0 * n));
      const double jv = std::abs(v.directional_limit(x, n) - v.directional_limit(x, -1.0 * n));
      if (jb > 0.5 * jv + 1e-9) {
        r.jumps_dominated = false;
        detail << "[b] = " << jb << " exceeds [v]/2 = " << 0.5 * jv << " at (" << x.x << ", " << x.y << "); ";
      }
    }
  }

  r.cantor_dominated = true;
  for (const CantorChannel& cb : b.channels()) {
    double wv = 0.0;
    for (const CantorChannel& cv : v.channels()) {
      if (key_of(cv) == key_of(cb)) wv += cv.weight;
    }
    if (std::abs(cb.weight) > 0.5 * std::abs(wv) + 1e-9) {
      r.cantor_dominated = false;
      detail << "b channel weight " << cb.weight << " not dominated by v; ";
    }
  }

  r.verdict = r.sections_are_segments && r.gradient_vanishes && r.jumps_dominated && r.cantor_dominated;
  const SubRect whole{dom.bounds(), false};
  r.perimeter_e = perimeter({v, b}, whole, opt.quadrature);
  r.perimeter_fv = perimeter(steiner_set(v), whole, opt.quadrature);
  r.perimeters_equal = std::abs(r.perimeter_e - r.perimeter_fv) <= opt.perimeter_rel_tol * r.perimeter_fv;
  r.detail = detail.str();
  return r;
}

RigidityVerdict rigidity_test(const StructuredBVField& v, double resolution, double tol, int connectivity) {
  check_positivity_precondition(v, resolution);
  const SvdGraph g = build_graph(v, resolution, connectivity);
  RigidityVerdict r;
  r.singularity = is_minimally_singular(g, tol);
  r.rigid = r.singularity.minimally_singular;
  if (!r.rigid && v.channels().empty()) {
    r.counterexample = counterexample(v, g.nodes[r.singularity.witness], 1.0, resolution, connectivity);
  }
  return r;
}

VDistributedSet counterexample(const StructuredBVField& v, Point source, double scale, double resolution,
                               int connectivity) {
  if (!v.channels().empty()) throw ConstructionError("counterexamples are only synthesized for pure-jump v");
  if (!(scale >= 0.0 && scale <= 1.0)) throw ContractError("scale must lie in [0, 1]");
  const SvdGraph g = build_graph(v, resolution, connectivity);
  if (is_minimally_singular(g).minimally_singular) throw ConstructionError("v is minimally singular: no counterexample");
  if (scale == 0.0) return steiner_set(v);

  std::vector<bool> positive(g.size());
  for (std::size_t n = 0; n < g.size(); ++n) positive[n] = v.value(g.nodes[n]) > 0.0;
  const int src = g.nearest_node(source);
  if (!positive[src]) throw DomainError("counterexample source must lie where v is positive");

  std::vector<double> values(g.size(), 0.0);
  std::vector<bool> assigned(g.size(), false);
  int component = 0;
  for (int start = src; start >= 0;) {
    const SvdMap m = svd_map(g, start, positive);
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (m.dist[n] == kInf) continue;
      values[n] = scale * (component + 0.5 * m.dist[n]);
      assigned[n] = true;
    }
    ++component;
    start = -1;
    for (std::size_t n = 0; n < g.size(); ++n) {
      if (positive[n] && !assigned[n]) {
        start = static_cast<int>(n);
        break;
      }
    }
  }
  return {v, interface_field(v, g, values)};
}

}  // namespace svdkit
