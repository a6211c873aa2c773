#include "svdkit/bv1d.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>

#include "svdkit/errors.hpp"

namespace svdkit {

namespace {

bool same_param(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(1.0, std::abs(a)); }

// Rotation of c - x as x moves from x0 to x1 along a segment avoiding c.
double sweep(Point c, Point x0, Point x1) {
  const Point u = c - x0, w = c - x1;
  return std::atan2(cross(u, w), dot(u, w));
}

double angle_increment(const AcPiece& p, double s) {
  double sum = 0.0;
  const Point x = p.origin + s * p.direction;
  for (const AngleTerm& term : p.angle_terms) {
    sum += term.coef * (sweep(term.b, p.origin, x) - sweep(term.a, p.origin, x));
  }
  return sum;
}

}  // namespace

double ac_piece_value(const AcPiece& p, double s) {
  double v = p.value + p.slope * s + 0.5 * p.curvature * s * s;
  if (!p.angle_terms.empty()) v += angle_increment(p, s);
  return v;
}

namespace {

double local_value(const AcPiece& p, double s) { return ac_piece_value(p, s); }

double local_derivative(const AcPiece& p, double s) {
  double d = p.slope + p.curvature * s;
  const Point x = p.origin + s * p.direction;
  for (const AngleTerm& term : p.angle_terms) {
    d += term.coef * dot(subtended_angle_gradient(term.a, term.b, x), p.direction);
  }
  return d;
}

// Piece re-anchored at local parameter s.
AcPiece split_at(const AcPiece& p, double s) {
  AcPiece q = p;
  q.value = local_value(p, s);
  q.slope = p.slope + p.curvature * s;
  q.origin = p.origin + s * p.direction;
  return q;
}

}  // namespace

double CantorAtom::level(double t) const {
  if (t <= s0) return std::clamp(level0, 0.0, 1.0);
  if (t >= s1) return std::clamp(level1, 0.0, 1.0);
  return std::clamp(level0 + (level1 - level0) * ((t - s0) / (s1 - s0)), 0.0, 1.0);
}

BVProfile::BVProfile(std::vector<double> breakpoints, std::vector<AcPiece> pieces, std::vector<JumpAtom> jumps,
                     std::vector<CantorAtom> cantor, int cantor_depth)
    : breakpoints_(std::move(breakpoints)), pieces_(std::move(pieces)), depth_(cantor_depth) {
  if (breakpoints_.size() < 2) throw ContractError("profile needs at least two breakpoints");
  if (pieces_.size() + 1 != breakpoints_.size()) throw ContractError("profile needs one AC piece per sub-interval");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > breakpoints_[i - 1])) throw ContractError("profile breakpoints must increase strictly");
  }
  if (depth_ < 1) throw ContractError("profile cantor depth must be >= 1");
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i) {
    const double len = breakpoints_[i + 1] - breakpoints_[i];
    const double end_value = local_value(pieces_[i], len);
    const double next = pieces_[i + 1].value;
    if (std::abs(end_value - next) > 1e-9 * (1.0 + std::abs(end_value) + std::abs(next))) {
      throw ContractError("AC pieces must be continuous; use jump atoms for discontinuities");
    }
  }

  const double a0 = breakpoints_.front();
  const double am = breakpoints_.back();

  // Jumps: drop dust, sort, merge coincident parameters.
  std::sort(jumps.begin(), jumps.end(), [](const JumpAtom& l, const JumpAtom& r) { return l.t < r.t; });
  for (const JumpAtom& j : jumps) {
    if (!(j.t > a0 && j.t < am)) throw ContractError("jump atoms must lie strictly inside the interval");
    if (!jumps_.empty() && same_param(jumps_.back().t, j.t)) {
      jumps_.back().height += j.height;
    } else {
      jumps_.push_back(j);
    }
  }
  std::erase_if(jumps_, [](const JumpAtom& j) { return std::abs(j.height) < kAtomDust; });

  for (const CantorAtom& c : cantor) {
    if (std::abs(c.weight) < kAtomDust) continue;
    if (!(c.s0 < c.s1) || c.s0 < a0 || c.s1 > am) throw ContractError("cantor atom span must be inside the interval");
    cantor_.push_back(c);
  }

  // Every jump parameter and Cantor endpoint becomes a breakpoint.
  std::vector<double> required;
  for (const JumpAtom& j : jumps_) required.push_back(j.t);
  for (const CantorAtom& c : cantor_) {
    required.push_back(c.s0);
    required.push_back(c.s1);
  }
  for (double t : required) {
    const auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), t);
    if (it != breakpoints_.end() && same_param(*it, t)) continue;
    if (it != breakpoints_.begin() && same_param(*std::prev(it), t)) continue;
    const auto idx = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
    AcPiece tail = split_at(pieces_[idx], t - breakpoints_[idx]);
    breakpoints_.insert(it, t);
    pieces_.insert(pieces_.begin() + static_cast<std::ptrdiff_t>(idx) + 1, std::move(tail));
  }
}

BVProfile BVProfile::constant(double a0, double a1, double value) { return affine(a0, a1, value, 0.0); }

BVProfile BVProfile::affine(double a0, double a1, double value, double slope) {
  AcPiece piece;
  piece.value = value;
  piece.slope = slope;
  piece.direction = {1.0, 0.0};
  return BVProfile({a0, a1}, {piece});
}

std::size_t BVProfile::piece_index(double t) const {
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto idx = static_cast<std::size_t>(std::distance(breakpoints_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, pieces_.size() - 1);
}

double BVProfile::piece_value(std::size_t i, double t) const { return local_value(pieces_[i], t - breakpoints_[i]); }

double BVProfile::piece_derivative(std::size_t i, double t) const {
  return local_derivative(pieces_[i], t - breakpoints_[i]);
}

double BVProfile::ac_value(double t) const {
  if (t < start() || t > end()) throw DomainError("profile parameter outside the interval");
  return piece_value(piece_index(t), t);
}

double BVProfile::cantor_value(double t) const {
  double sum = 0.0;
  for (const CantorAtom& c : cantor_) {
    const double tc = std::clamp(t, c.s0, c.s1);
    sum += c.weight * (cantor_eval(c.level(tc), depth_) - cantor_eval(c.level(c.s0), depth_));
  }
  return sum;
}

double BVProfile::jump_sum_before(double t, bool inclusive) const {
  double sum = 0.0;
  for (const JumpAtom& j : jumps_) {
    if (j.t < t || (inclusive && j.t == t)) sum += j.height;
  }
  return sum;
}

double BVProfile::left_limit(double t) const {
  if (t <= start()) return right_limit(t);
  return ac_value(t) + jump_sum_before(t, false) + cantor_value(t);
}

double BVProfile::right_limit(double t) const {
  if (t >= end()) return left_limit(t);
  if (t < start()) throw DomainError("profile parameter outside the interval");
  return ac_value(t) + jump_sum_before(t, true) + cantor_value(t);
}

double BVProfile::lower_limit(double t) const { return std::min(left_limit(t), right_limit(t)); }
double BVProfile::upper_limit(double t) const { return std::max(left_limit(t), right_limit(t)); }

double BVProfile::piece_variation(std::size_t i) const {
  const AcPiece& p = pieces_[i];
  const double len = breakpoints_[i + 1] - breakpoints_[i];
  if (p.angle_terms.empty()) {
    if (p.curvature == 0.0) return std::abs(p.slope) * len;
    const double root = -p.slope / p.curvature;
    auto rise = [&p](double s) { return p.slope * s + 0.5 * p.curvature * s * s; };
    if (root > 0.0 && root < len) return std::abs(rise(root)) + std::abs(rise(len) - rise(root));
    return std::abs(rise(len));
  }

  // Split at sign changes of the derivative, then sum monotone increments.
  constexpr int kSamples = 64;
  std::vector<double> turning{0.0};
  double prev_s = 0.0;
  double prev_d = local_derivative(p, 0.0);
  for (int k = 1; k <= kSamples; ++k) {
    const double s = len * k / kSamples;
    const double d = local_derivative(p, s);
    if ((prev_d < 0.0 && d > 0.0) || (prev_d > 0.0 && d < 0.0)) {
      double lo = prev_s, hi = s;
      const bool rising = prev_d < 0.0;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((local_derivative(p, mid) < 0.0) == rising) lo = mid; else hi = mid;
      }
      turning.push_back(0.5 * (lo + hi));
    }
    prev_s = s;
    prev_d = d;
  }
  turning.push_back(len);
  double total = 0.0;
  for (std::size_t k = 1; k < turning.size(); ++k) {
    total += std::abs(local_value(p, turning[k]) - local_value(p, turning[k - 1]));
  }
  return total;
}

double BVProfile::variation(VariationPart part) const {
  double ac = 0.0, jump = 0.0, cantor = 0.0;
  if (part == VariationPart::total || part == VariationPart::ac) {
    for (std::size_t i = 0; i < pieces_.size(); ++i) ac += piece_variation(i);
  }
  if (part != VariationPart::ac && part != VariationPart::cantor) {
    for (const JumpAtom& j : jumps_) jump += std::abs(j.height);
  }
  if (part != VariationPart::ac && part != VariationPart::jump) {
    for (const CantorAtom& c : cantor_) {
      cantor += std::abs(c.weight) *
                std::abs(cantor_eval(c.level(c.s1), depth_) - cantor_eval(c.level(c.s0), depth_));
    }
  }
  switch (part) {
    case VariationPart::ac: return ac;
    case VariationPart::jump: return jump;
    case VariationPart::cantor: return cantor;
    case VariationPart::singular: return jump + cantor;
    case VariationPart::total: break;
  }
  return ac + (jump + cantor);
}

BVProfile BVProfile::restricted(double t0, double t1) const {
  if (!(t0 >= start() && t1 <= end() && t0 < t1)) throw DomainError("restriction interval outside the profile");
  const double base_shift = right_limit(t0) - ac_value(t0);

  std::vector<double> bps{t0};
  std::vector<AcPiece> pieces;
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const double lo = std::max(breakpoints_[i], t0);
    const double hi = std::min(breakpoints_[i + 1], t1);
    if (!(hi > lo)) continue;
    AcPiece piece = split_at(pieces_[i], lo - breakpoints_[i]);
    piece.value += base_shift;
    pieces.push_back(std::move(piece));
    bps.push_back(hi);
  }
  std::vector<JumpAtom> jumps;
  for (const JumpAtom& j : jumps_) {
    if (j.t > t0 && j.t < t1) jumps.push_back(j);
  }
  std::vector<CantorAtom> atoms;
  for (CantorAtom c : cantor_) {
    const double lo = std::max(c.s0, t0);
    const double hi = std::min(c.s1, t1);
    if (!(hi > lo)) continue;
    const double l0 = c.level(lo);
    const double l1 = c.level(hi);
    c.s0 = lo;
    c.s1 = hi;
    c.level0 = l0;
    c.level1 = l1;
    atoms.push_back(c);
  }
  return BVProfile(std::move(bps), std::move(pieces), std::move(jumps), std::move(atoms), depth_);
}

double variation(const BVProfile& p, VariationPart part) { return p.variation(part); }

double lower_limit(const BVProfile& p, double t) { return p.lower_limit(t); }

bool endpoint_bound_check(const BVProfile& p) {
  const double lhs = std::abs(p.lower_limit(p.end()) - p.lower_limit(p.start()));
  const double total = p.variation(VariationPart::total);
  return lhs <= total + 1e-12 * (1.0 + total);
}

BVProfile concat(const BVProfile& p1, const BVProfile& p2, double junction_jump) {
  if (!same_param(p1.end(), p2.start())) throw ContractError("concat: intervals do not share an endpoint");
  std::vector<double> bps = p1.breakpoints();
  std::vector<AcPiece> pieces = p1.pieces();
  const double ac_end = p1.ac_value(p1.end());
  const double ac_shift = ac_end - p2.pieces().front().value;
  for (std::size_t i = 0; i < p2.pieces().size(); ++i) {
    bps.push_back(p2.breakpoints()[i + 1]);
    AcPiece piece = p2.pieces()[i];
    piece.value += ac_shift;
    pieces.push_back(std::move(piece));
  }
  std::vector<JumpAtom> jumps = p1.jumps();
  jumps.push_back({p1.end(), junction_jump});
  jumps.insert(jumps.end(), p2.jumps().begin(), p2.jumps().end());
  std::vector<CantorAtom> atoms = p1.cantor_atoms();
  atoms.insert(atoms.end(), p2.cantor_atoms().begin(), p2.cantor_atoms().end());
  return BVProfile(std::move(bps), std::move(pieces), std::move(jumps), std::move(atoms), p1.cantor_depth());
}

}  // namespace svdkit
