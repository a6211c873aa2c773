#pragma once

#include <cstddef>
#include <vector>

#include "svdkit/cantor.hpp"
#include "svdkit/geometry.hpp"

namespace svdkit {

/// Atoms with |height| or |weight| below this are dropped during canonicalization.
inline constexpr double kAtomDust = 1e-15;

/// coef times the continuous change of subtended_angle(a, b, .) between origin
/// and origin + s * direction: the absolutely continuous part of a restricted
/// jump wall whose ends lie inside the domain.
struct AngleTerm {
  double coef = 0.0;
  Point a;
  Point b;
};

/// Absolutely continuous component over one sub-interval. `value` is the AC
/// component at the left end; the piece is quadratic in the local parameter
/// plus optional angle terms.
struct AcPiece {
  double value = 0.0;
  double slope = 0.0;
  double curvature = 0.0;
  Point origin{};
  Point direction{};
  std::vector<AngleTerm> angle_terms;
};

/// Value of the piece at local parameter s from its origin. Angle terms use
/// the continuous branch along the piece.
double ac_piece_value(const AcPiece& p, double s);

struct JumpAtom {
  double t = 0.0;
  double height = 0.0;
};

/// weight * (C(level(clamp(t, s0, s1))) - C(level0)). The level is affine in t,
/// equal to level0 at s0 and level1 at s1 exactly, and clamped to [0, 1].
struct CantorAtom {
  double s0 = 0.0;
  double s1 = 0.0;
  double weight = 0.0;
  double level0 = 0.0;
  double level1 = 1.0;

  double level(double t) const;
};

enum class VariationPart { total, ac, jump, cantor, singular };

/// Good representative of a one-dimensional BV function on a closed interval.
///
/// The value is u(t) = ac(t) + sum of jumps before t + sum of Cantor increments,
/// where ac is continuous. Jump parameters and Cantor endpoints are always
/// breakpoints (inserted on construction when missing).
class BVProfile {
 public:
  BVProfile(std::vector<double> breakpoints, std::vector<AcPiece> pieces, std::vector<JumpAtom> jumps = {},
            std::vector<CantorAtom> cantor = {}, int cantor_depth = kDefaultCantorDepth);

  static BVProfile constant(double a0, double a1, double value);
  static BVProfile affine(double a0, double a1, double value, double slope);

  double start() const { return breakpoints_.front(); }
  double end() const { return breakpoints_.back(); }
  int cantor_depth() const { return depth_; }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<AcPiece>& pieces() const { return pieces_; }
  const std::vector<JumpAtom>& jumps() const { return jumps_; }
  const std::vector<CantorAtom>& cantor_atoms() const { return cantor_; }

  double ac_value(double t) const;
  double cantor_value(double t) const;
  double left_limit(double t) const;
  double right_limit(double t) const;
  double lower_limit(double t) const;
  double upper_limit(double t) const;

  double variation(VariationPart part) const;

  /// Profile of the restriction to [t0, t1]; its value at t0 is the right limit there.
  BVProfile restricted(double t0, double t1) const;

 private:
  std::size_t piece_index(double t) const;
  double piece_value(std::size_t i, double t) const;
  double piece_derivative(std::size_t i, double t) const;
  double piece_variation(std::size_t i) const;
  double jump_sum_before(double t, bool inclusive) const;

  std::vector<double> breakpoints_;
  std::vector<AcPiece> pieces_;
  std::vector<JumpAtom> jumps_;
  std::vector<CantorAtom> cantor_;
  int depth_ = kDefaultCantorDepth;
};

double variation(const BVProfile& p, VariationPart part);
double lower_limit(const BVProfile& p, double t);

/// |u(a_m) - u(a_0)| <= |Du|(I), endpoint values taken as one-sided limits.
bool endpoint_bound_check(const BVProfile& p);

/// Joins two profiles whose intervals share an endpoint. p2 is translated
/// vertically so that its start equals the left limit of p1 plus the junction jump.
BVProfile concat(const BVProfile& p1, const BVProfile& p2, double junction_jump);

}  // namespace svdkit
