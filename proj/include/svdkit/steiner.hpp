#pragma once

#include <optional>
#include <string>

#include "svdkit/bvfield.hpp"
#include "svdkit/svd.hpp"

namespace svdkit {

/// Set whose vertical section over x is (b(x) - v(x)/2, b(x) + v(x)/2).
struct VDistributedSet {
  StructuredBVField v;
  StructuredBVField b;
};

/// F[v]: the same v with b = 0. Throws ContractError if v takes negative values.
VDistributedSet steiner_set(const StructuredBVField& v);

/// Sub-rectangle of the domain. A closed B also counts the lateral surface
/// over the part of the domain boundary it contains.
struct SubRect {
  Rect box;
  bool closed = false;
};

struct QuadratureOptions {
  int cells_per_side = 64;     // AC part, 2x2 Gauss points per cell
  int piece_subdivisions = 8;  // jump and boundary parts, 4 Gauss points each
};

struct PerimeterBreakdown {
  double ac = 0.0;
  double jump = 0.0;
  double cantor = 0.0;
  double boundary = 0.0;
  double total() const { return ac + jump + cantor + boundary; }
};

PerimeterBreakdown perimeter_breakdown(const VDistributedSet& e, const SubRect& b, const QuadratureOptions& q = {});
double perimeter(const VDistributedSet& e, const SubRect& b, const QuadratureOptions& q = {});

/// H^1 of the symmetric difference of two intervals (lo, lo + len); empty when len <= 0.
double interval_symmetric_difference(double c1, double len1, double c2, double len2);

/// Throws PreconditionViolation when v vanishes at an admissible lattice node.
void check_positivity_precondition(const StructuredBVField& v, double resolution);

struct EqualityReport {
  bool sections_are_segments = true;
  bool gradient_vanishes = false;
  bool jumps_dominated = false;
  bool cantor_dominated = false;
  bool verdict = false;
  double perimeter_e = 0.0;
  double perimeter_fv = 0.0;
  bool perimeters_equal = false;
  bool agrees() const { return verdict == perimeters_equal; }
  std::string detail;
};

struct EqualityOptions {
  double resolution = 0.05;
  double tol = 1e-12;
  double perimeter_rel_tol = 1e-9;
  QuadratureOptions quadrature{};
};

EqualityReport check_equality_case(const StructuredBVField& v, const StructuredBVField& b,
                                   const EqualityOptions& opt = {});

struct RigidityVerdict {
  bool rigid = false;
  MinSingularVerdict singularity;
  std::optional<VDistributedSet> counterexample;
};

RigidityVerdict rigidity_test(const StructuredBVField& v, double resolution, double tol = 0.01, int connectivity = 8);

/// Barycenter built from half the singular vertical distance to `source` on
/// the part of the lattice where v is positive. Other positive components get
/// distinct constants and the zero set gets 0.
VDistributedSet counterexample(const StructuredBVField& v, Point source, double scale, double resolution,
                               int connectivity = 8);

}  // namespace svdkit
