#include "svdkit/bvfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svdkit/errors.hpp"

namespace svdkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }

double direction_angle(Point d) {
  const double a = std::atan2(d.y, d.x);
  return a < 0.0 ? a + kTwoPi : a;
}

// Exact winding number of a closed polyline around a point off the polyline.
int winding_number(const JumpWall& w, Point x) {
  int wn = 0;
  for (std::size_t k = 0; k < w.segment_count(); ++k) {
    const Point a = w.seg_a(k);
    const Point b = w.seg_b(k);
    if (a.y <= x.y) {
      if (b.y > x.y && orient(a, b, x) > 0) ++wn;
    } else if (b.y <= x.y && orient(a, b, x) < 0) {
      --wn;
    }
  }
  return wn;
}

bool is_indicator_wall(const JumpWall& w) { return w.closed && w.uniform_height(); }

}  // namespace

// ---------------------------------------------------------------- SmoothGrid

SmoothGrid SmoothGrid::constant(double value) {
  SmoothGrid g;
  g.values_ = {value};
  return g;
}

SmoothGrid SmoothGrid::samples(Rect box, int nx, int ny, std::vector<double> values) {
  if (nx < 2 || ny < 2) throw ContractError("smooth grid needs at least 2x2 samples");
  if (!(box.width() > 0.0 && box.height() > 0.0)) throw ContractError("smooth grid box is degenerate");
  if (values.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw ContractError("smooth grid sample count does not match nx * ny");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw ContractError("smooth grid samples must be finite");
  }
  SmoothGrid g;
  g.box_ = box;
  g.nx_ = nx;
  g.ny_ = ny;
  g.values_ = std::move(values);
  return g;
}

std::vector<std::pair<int, int>> SmoothGrid::polynomial_terms() {
  return {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}};
}

SmoothGrid SmoothGrid::polynomial(Rect box, int nx, int ny, const std::vector<double>& coefficients) {
  const auto terms = polynomial_terms();
  if (coefficients.size() > terms.size()) throw ContractError("polynomial degree is limited to 3");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny));
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = box.xmin + box.width() * i / (nx - 1);
      const double y = box.ymin + box.height() * j / (ny - 1);
      double v = 0.0;
      for (std::size_t k = 0; k < coefficients.size(); ++k) {
        v += coefficients[k] * std::pow(x, terms[k].first) * std::pow(y, terms[k].second);
      }
      values.push_back(v);
    }
  }
  return samples(box, nx, ny, std::move(values));
}

SmoothGrid::Cell SmoothGrid::locate(Point p) const {
  const double hx = box_.width() / (nx_ - 1);
  const double hy = box_.height() / (ny_ - 1);
  const double u = std::clamp((p.x - box_.xmin) / hx, 0.0, static_cast<double>(nx_ - 1));
  const double v = std::clamp((p.y - box_.ymin) / hy, 0.0, static_cast<double>(ny_ - 1));
  const int i = std::min(static_cast<int>(std::floor(u)), nx_ - 2);
  const int j = std::min(static_cast<int>(std::floor(v)), ny_ - 2);
  return {i, j, u - i, v - j};
}

double SmoothGrid::value(Point p) const {
  if (is_constant()) return values_.front();
  const Cell c = locate(p);
  const double f00 = node(c.i, c.j), f10 = node(c.i + 1, c.j);
  const double f01 = node(c.i, c.j + 1), f11 = node(c.i + 1, c.j + 1);
  return (1 - c.fy) * ((1 - c.fx) * f00 + c.fx * f10) + c.fy * ((1 - c.fx) * f01 + c.fx * f11);
}

Point SmoothGrid::gradient(Point p) const {
  if (is_constant()) return {0.0, 0.0};
  const Cell c = locate(p);
  const double hx = box_.width() / (nx_ - 1);
  const double hy = box_.height() / (ny_ - 1);
  const double f00 = node(c.i, c.j), f10 = node(c.i + 1, c.j);
  const double f01 = node(c.i, c.j + 1), f11 = node(c.i + 1, c.j + 1);
  return {((1 - c.fy) * (f10 - f00) + c.fy * (f11 - f01)) / hx, ((1 - c.fx) * (f01 - f00) + c.fx * (f11 - f10)) / hy};
}

double SmoothGrid::twist(Point p) const {
  if (is_constant()) return 0.0;
  const Cell c = locate(p);
  const double hx = box_.width() / (nx_ - 1);
  const double hy = box_.height() / (ny_ - 1);
  return (node(c.i + 1, c.j + 1) - node(c.i + 1, c.j) - node(c.i, c.j + 1) + node(c.i, c.j)) / (hx * hy);
}

std::vector<double> SmoothGrid::cell_crossings(Point p, Point q) const {
  std::vector<double> out;
  if (is_constant()) return out;
  const double hx = box_.width() / (nx_ - 1);
  const double hy = box_.height() / (ny_ - 1);
  auto scan = [&out](double a, double b, double origin, double h, int n) {
    if (a == b) return;
    for (int i = 1; i + 1 < n; ++i) {
      const double s = (origin + i * h - a) / (b - a);
      if (s > 0.0 && s < 1.0) out.push_back(s);
    }
  };
  scan(p.x, q.x, box_.xmin, hx, nx_);
  scan(p.y, q.y, box_.ymin, hy, ny_);
  std::sort(out.begin(), out.end());
  return out;
}

SmoothGrid SmoothGrid::plus(const SmoothGrid& other) const {
  if (other.is_constant()) {
    SmoothGrid g = *this;
    for (double& v : g.values_) v += other.values_.front();
    return g;
  }
  if (is_constant()) return other.plus(*this);
  std::vector<double> values = values_;
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const Point p{box_.xmin + box_.width() * i / (nx_ - 1), box_.ymin + box_.height() * j / (ny_ - 1)};
      values[static_cast<std::size_t>(j) * nx_ + i] += other.value(p);
    }
  }
  return samples(box_, nx_, ny_, std::move(values));
}

SmoothGrid SmoothGrid::scaled(double factor) const {
  SmoothGrid g = *this;
  for (double& v : g.values_) v *= factor;
  return g;
}

// --------------------------------------------------------- StructuredBVField

StructuredBVField::StructuredBVField(Domain domain, SmoothGrid smooth, std::vector<JumpWall> walls,
                                     std::vector<CantorChannel> channels, int cantor_depth)
    : domain_(std::move(domain)), smooth_(std::move(smooth)), walls_(std::move(walls)), depth_(cantor_depth) {
  if (depth_ < 1) throw ContractError("cantor depth must be >= 1");
  for (const JumpWall& w : walls_) {
    w.validate();
    for (const Point& p : w.vertices) {
      if (!domain_.contains_closed(p)) throw ContractError("wall vertex lies outside the closed domain");
    }
    if (!domain_.is_rectangle()) {
      const auto& dv = domain_.vertices();
      for (std::size_t k = 0; k < w.segment_count(); ++k) {
        for (std::size_t e = 0; e < dv.size(); ++e) {
          if (classify_segments(w.seg_a(k), w.seg_b(k), dv[e], dv[(e + 1) % dv.size()]) == Contact::proper) {
            throw ContractError("wall segment leaves the closed domain");
          }
        }
      }
    }
  }
  for (const CantorChannel& c : channels) {
    c.validate();
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Point& v : domain_.vertices()) {
      lo = std::min(lo, dot(v, c.direction));
      hi = std::max(hi, dot(v, c.direction));
    }
    if (c.band_hi <= lo || c.band_lo >= hi) throw ContractError("channel band does not meet the domain");
    // Identical slabs add up.
    auto same = std::find_if(channels_.begin(), channels_.end(), [&c](const CantorChannel& o) {
      return o.direction == c.direction && o.band_lo == c.band_lo && o.band_hi == c.band_hi;
    });
    if (same != channels_.end()) {
      same->weight += c.weight;
    } else {
      channels_.push_back(c);
    }
  }
  std::erase_if(channels_, [](const CantorChannel& c) { return std::abs(c.weight) < kAtomDust; });
}

bool StructuredBVField::on_wall(Point x) const {
  for (const JumpWall& w : walls_) {
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      if (distance_to_segment(x, w.seg_a(k), w.seg_b(k)) <= kGeomTol) return true;
    }
  }
  return false;
}

bool StructuredBVField::has_ac_walls() const {
  return std::any_of(walls_.begin(), walls_.end(), [](const JumpWall& w) { return !is_indicator_wall(w); });
}

double StructuredBVField::wall_value(std::size_t wi, Point x) const {
  const JumpWall& w = walls_[wi];
  if (is_indicator_wall(w)) return -w.heights.front() * winding_number(w, x);
  double sum = 0.0;
  for (std::size_t k = 0; k < w.segment_count(); ++k) sum += w.heights[k] * subtended_angle(w.seg_a(k), w.seg_b(k), x);
  return -sum / kTwoPi;
}

double StructuredBVField::value(Point x) const {
  double v = smooth_.value(x);
  for (std::size_t w = 0; w < walls_.size(); ++w) v += wall_value(w, x);
  for (const CantorChannel& c : channels_) v += c.weight * cantor_eval(c.level(x), depth_);
  return v;
}

std::vector<StructuredBVField::Sector> StructuredBVField::sectors(Point x) const {
  enum class Where { a_end, b_end, interior };
  struct Incident {
    std::size_t wall, seg;
    Where where;
  };
  std::vector<Incident> incident;
  std::vector<double> dirs;
  for (std::size_t wi = 0; wi < walls_.size(); ++wi) {
    const JumpWall& w = walls_[wi];
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      const Point a = w.seg_a(k), b = w.seg_b(k);
      if (distance_to_segment(x, a, b) > kGeomTol) continue;
      Where where = Where::interior;
      if (norm(x - a) <= kGeomTol) {
        where = Where::a_end;
        dirs.push_back(direction_angle(b - a));
      } else if (norm(x - b) <= kGeomTol) {
        where = Where::b_end;
        dirs.push_back(direction_angle(a - b));
      } else {
        dirs.push_back(direction_angle(b - a));
        dirs.push_back(direction_angle(a - b));
      }
      incident.push_back({wi, k, where});
    }
  }

  double base = smooth_.value(x);
  for (const CantorChannel& c : channels_) base += c.weight * cantor_eval(c.level(x), depth_);
  std::vector<bool> touched(walls_.size(), false);
  for (const Incident& inc : incident) touched[inc.wall] = true;
  for (std::size_t wi = 0; wi < walls_.size(); ++wi) {
    if (!touched[wi]) base += wall_value(wi, x);
  }
  if (incident.empty()) return {{0.0, kTwoPi, base, base}};

  std::sort(dirs.begin(), dirs.end());
  std::vector<double> uniq;
  for (double d : dirs) {
    if (uniq.empty() || d - uniq.back() > 1e-12) uniq.push_back(d);
  }
  if (uniq.size() > 1 && uniq.front() + kTwoPi - uniq.back() <= 1e-12) uniq.pop_back();

  std::vector<Sector> out;
  for (std::size_t s = 0; s < uniq.size(); ++s) {
    const double lo = uniq[s];
    const double hi = s + 1 < uniq.size() ? uniq[s + 1] : uniq.front() + kTwoPi;
    const double mid = 0.5 * (lo + hi);
    double value = base;
    double slope = 0.0;
    for (std::size_t wi = 0; wi < walls_.size(); ++wi) {
      if (!touched[wi]) continue;
      const JumpWall& w = walls_[wi];
      double angle_sum = 0.0;
      double angle_slope = 0.0;
      double weighted = 0.0;
      double weighted_slope = 0.0;
      for (std::size_t k = 0; k < w.segment_count(); ++k) {
        const Point a = w.seg_a(k), b = w.seg_b(k);
        double theta = 0.0;
        double dtheta = 0.0;
        const auto it = std::find_if(incident.begin(), incident.end(),
                                     [wi, k](const Incident& i) { return i.wall == wi && i.seg == k; });
        if (it == incident.end()) {
          theta = subtended_angle(a, b, x);
        } else if (it->where == Where::a_end) {
          theta = wrap_angle(direction_angle(b - a) - mid - std::numbers::pi);
          dtheta = -1.0;
        } else if (it->where == Where::b_end) {
          theta = wrap_angle(mid + std::numbers::pi - direction_angle(a - b));
          dtheta = 1.0;
        } else {
          theta = std::sin(mid - direction_angle(b - a)) > 0.0 ? std::numbers::pi : -std::numbers::pi;
        }
        angle_sum += theta;
        angle_slope += dtheta;
        weighted += w.heights[k] * theta;
        weighted_slope += w.heights[k] * dtheta;
      }
      if (is_indicator_wall(w)) {
        value -= w.heights.front() * std::round(angle_sum / kTwoPi);
        (void)angle_slope;
      } else {
        value -= weighted / kTwoPi;
        slope -= weighted_slope / kTwoPi;
      }
    }
    out.push_back({lo, hi, value - slope * (mid - lo), value + slope * (hi - mid)});
  }
  return out;
}

double StructuredBVField::directional_limit(Point x, Point dir) const {
  if (!on_wall(x)) return value(x);
  const auto secs = sectors(x);
  double phi = direction_angle(dir);
  for (const Sector& s : secs) {
    for (double p : {phi, phi + kTwoPi}) {
      if (p >= s.lo && p <= s.hi) return s.at_lo + (p - s.lo) / (s.hi - s.lo) * (s.at_hi - s.at_lo);
    }
  }
  return secs.front().at_lo;
}

double StructuredBVField::eval_lower(Point x) const {
  if (!domain_.contains(x)) throw DomainError("evaluation point outside the domain");
  if (!on_wall(x)) return value(x);
  double best = std::numeric_limits<double>::infinity();
  for (const Sector& s : sectors(x)) best = std::min({best, s.at_lo, s.at_hi});
  return best;
}

double StructuredBVField::eval_upper(Point x) const {
  if (!domain_.contains(x)) throw DomainError("evaluation point outside the domain");
  if (!on_wall(x)) return value(x);
  double best = -std::numeric_limits<double>::infinity();
  for (const Sector& s : sectors(x)) best = std::max({best, s.at_lo, s.at_hi});
  return best;
}

double StructuredBVField::jump_size(Point x) const {
  if (!domain_.contains(x)) throw DomainError("evaluation point outside the domain");
  if (!on_wall(x)) return 0.0;
  return eval_upper(x) - eval_lower(x);
}

Point StructuredBVField::gradient(Point x) const {
  Point g = smooth_.gradient(x);
  for (const JumpWall& w : walls_) {
    if (is_indicator_wall(w)) continue;
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      g = g + (-w.heights[k] / kTwoPi) * subtended_angle_gradient(w.seg_a(k), w.seg_b(k), x);
    }
  }
  return g;
}

StructuredBVField StructuredBVField::with_smooth(SmoothGrid smooth) const {
  return StructuredBVField(domain_, std::move(smooth), walls_, channels_, depth_);
}

StructuredBVField StructuredBVField::scaled_singular(double factor) const {
  auto walls = walls_;
  for (JumpWall& w : walls) {
    for (double& h : w.heights) h *= factor;
  }
  auto channels = channels_;
  for (CantorChannel& c : channels) c.weight *= factor;
  return StructuredBVField(domain_, smooth_, std::move(walls), std::move(channels), depth_);
}

StructuredBVField StructuredBVField::scaled(double factor) const {
  return scaled_singular(factor).with_smooth(smooth_.scaled(factor));
}

double eval_lower(const StructuredBVField& f, Point x) { return f.eval_lower(x); }
double jump_size(const StructuredBVField& f, Point x) { return f.jump_size(x); }

bool is_admissible_node(const StructuredBVField& f, Point x) {
  if (!f.domain().contains(x) || f.on_wall(x)) return false;
  for (const CantorChannel& c : f.channels()) {
    const double raw = (dot(x, c.direction) - c.band_lo) / (c.band_hi - c.band_lo);
    if (raw >= 0.0 && raw <= 1.0 && in_cantor_set(raw, f.cantor_depth())) return false;
  }
  return true;
}

// ------------------------------------------------------------------ restrict

namespace {

struct SingularData {
  std::vector<JumpAtom> jumps;
  std::vector<CantorAtom> atoms;
};

SingularData singular_data(const StructuredBVField& f, const PolygonalChain& chain) {
  const auto& v = chain.vertices();
  const std::size_t m = chain.segment_count();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (f.on_wall(v[i])) throw ChainRejected(std::min(i, m - 1), "chain vertex lies on a wall");
  }
  for (const CantorChannel& c : f.channels()) {
    for (const Point& p : {v.front(), v.back()}) {
      const double raw = (dot(p, c.direction) - c.band_lo) / (c.band_hi - c.band_lo);
      if (raw >= 0.0 && raw <= 1.0 && in_cantor_set(raw, f.cantor_depth())) {
        throw ChainRejected(p == v.front() ? 0 : m - 1, "chain endpoint lies on a Cantor fiber");
      }
    }
  }
  SingularData out;
  for (const JumpWall& w : f.walls()) {
    for (const Crossing& c : wall_crossings(chain, w)) out.jumps.push_back({c.t, c.sign * w.heights[c.wall_segment]});
  }
  for (const CantorChannel& c : f.channels()) {
    for (std::size_t i = 0; i < m; ++i) {
      const double l0 = c.level(v[i]);
      const double l1 = c.level(v[i + 1]);
      if (l0 == l1) continue;
      const int d = f.cantor_depth();
      if (cantor_eval(l0, d) == cantor_eval(l1, d)) continue;
      out.atoms.push_back({chain.params()[i], chain.params()[i + 1], c.weight, l0, l1});
    }
  }
  return out;
}

}  // namespace

double singular_variation(const StructuredBVField& f, const PolygonalChain& chain) {
  SingularData s = singular_data(f, chain);
  AcPiece flat;
  flat.direction = {1.0, 0.0};
  const BVProfile p({0.0, chain.length()}, {flat}, std::move(s.jumps), std::move(s.atoms), f.cantor_depth());
  return p.variation(VariationPart::singular);
}

BVProfile restrict(const StructuredBVField& f, const PolygonalChain& chain) {
  SingularData s = singular_data(f, chain);
  const auto& v = chain.vertices();
  const auto& params = chain.params();

  std::vector<AngleTerm> angle_terms;
  for (const JumpWall& w : f.walls()) {
    if (w.closed && w.uniform_height()) continue;
    for (std::size_t k = 0; k < w.segment_count(); ++k) {
      angle_terms.push_back({-w.heights[k] / kTwoPi, w.seg_a(k), w.seg_b(k)});
    }
  }

  std::vector<double> bps{0.0};
  std::vector<AcPiece> pieces;
  for (std::size_t i = 0; i < chain.segment_count(); ++i) {
    const Point p = v[i];
    const Point eta = chain.direction(i);
    const double a_i = params[i];
    std::vector<double> cuts;
    for (double c : f.smooth().cell_crossings(p, v[i + 1])) cuts.push_back(a_i + c * (params[i + 1] - a_i));
    for (const JumpAtom& j : s.jumps) {
      if (j.t > a_i && j.t < params[i + 1]) cuts.push_back(j.t);
    }
    cuts.push_back(params[i + 1]);
    std::sort(cuts.begin(), cuts.end());
    double lo = a_i;
    for (double hi : cuts) {
      if (!(hi > lo)) continue;
      AcPiece piece;
      piece.origin = p + (lo - a_i) * eta;
      piece.direction = eta;
      const Point mid = p + (0.5 * (lo + hi) - a_i) * eta;
      piece.curvature = 2.0 * f.smooth().twist(mid) * eta.x * eta.y;
      piece.slope = dot(f.smooth().gradient(mid), eta) - piece.curvature * 0.5 * (hi - lo);
      piece.angle_terms = angle_terms;
      if (pieces.empty()) {
        piece.value = f.value(v.front());
      } else {
        piece.value = ac_piece_value(pieces.back(), lo - bps[bps.size() - 2]);
      }
      pieces.push_back(std::move(piece));
      bps.push_back(hi);
      lo = hi;
    }
  }
  bps.back() = chain.length();
  return BVProfile(std::move(bps), std::move(pieces), std::move(s.jumps), std::move(s.atoms), f.cantor_depth());
}

std::vector<Segment> arrangement_pieces(const std::vector<JumpWall>& walls) {
  std::vector<Segment> segs;
  for (const JumpWall& w : walls) {
    for (std::size_t k = 0; k < w.segment_count(); ++k) segs.push_back({w.seg_a(k), w.seg_b(k)});
  }
  std::vector<Segment> pieces;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const Point a = segs[i].a, b = segs[i].b;
    std::vector<double> cuts{0.0, 1.0};
    for (std::size_t j = 0; j < segs.size(); ++j) {
      if (i == j) continue;
      const Contact c = classify_segments(a, b, segs[j].a, segs[j].b);
      if (c == Contact::proper) {
        cuts.push_back(crossing_parameter(a, b, segs[j].a, segs[j].b));
      } else if (c != Contact::none) {
        for (Point e : {segs[j].a, segs[j].b}) {
          if (distance_to_segment(e, a, b) <= kGeomTol) cuts.push_back(project_on_segment(e, a, b));
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> uniq;
    for (double c : cuts) {
      if (uniq.empty() || c - uniq.back() > 1e-12) uniq.push_back(c);
    }
    uniq.back() = 1.0;
    for (std::size_t k = 1; k < uniq.size(); ++k) {
      const Point p = k == 1 ? a : a + uniq[k - 1] * (b - a);
      const Point q = k + 1 == uniq.size() ? b : a + uniq[k] * (b - a);
      const bool dup = std::any_of(pieces.begin(), pieces.end(), [&](const Segment& o) {
        return (norm(o.a - p) <= kGeomTol && norm(o.b - q) <= kGeomTol) ||
               (norm(o.a - q) <= kGeomTol && norm(o.b - p) <= kGeomTol);
      });
      if (!dup) pieces.push_back({p, q});
    }
  }
  return pieces;
}

}  // namespace svdkit
