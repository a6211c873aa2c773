#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "svdkit/bv1d.hpp"
#include "svdkit/bvfield.hpp"
#include "svdkit/steiner.hpp"

namespace svdkit {

/// Malformed scenario text or wrong value types (exit code 2).
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-formed scenario describing an invalid model (exit code 3).
class ScenarioSemanticError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DomainSpec {
  bool rectangle = true;
  std::vector<Point> vertices;  // rectangle: {min, max}
  bool operator==(const DomainSpec&) const = default;
};

struct SmoothSpec {
  enum class Kind { constant, polynomial, grid };
  Kind kind = Kind::constant;
  double value = 0.0;
  std::vector<double> coefficients;
  int nx = 0;
  int ny = 0;
  std::vector<double> values;
  bool operator==(const SmoothSpec&) const = default;
};

struct WallSpec {
  std::vector<Point> vertices;
  std::vector<double> heights;  // one entry means uniform
  bool closed = false;
  bool operator==(const WallSpec&) const = default;
};

struct ChannelSpec {
  Point direction;
  double band_lo = 0.0;
  double band_hi = 1.0;
  double weight = 0.0;
  bool operator==(const ChannelSpec&) const = default;
};

struct FieldSpec {
  SmoothSpec smooth;
  std::vector<WallSpec> walls;
  std::vector<ChannelSpec> channels;
  int cantor_depth = kDefaultCantorDepth;
  bool operator==(const FieldSpec&) const = default;
};

struct SubRectSpec {
  Point min;
  Point max;
  bool closed = false;
  bool operator==(const SubRectSpec&) const = default;
};

struct ProfileSpec {
  std::vector<double> breakpoints;
  std::vector<std::pair<double, double>> pieces;  // (value at left end, slope)
  std::vector<std::pair<double, double>> jumps;   // (t, height)
  std::vector<CantorAtom> cantor;
  bool operator==(const ProfileSpec& o) const;
};

struct DenseBallSpec {
  int count = 1000;
  double epsilon = 0.1;
  double resolution = 1.0 / 64;
  bool operator==(const DenseBallSpec&) const = default;
};

struct Scenario {
  std::string name;
  DomainSpec domain;
  FieldSpec field;
  std::optional<FieldSpec> barycenter;
  double resolution = 0.05;
  int connectivity = 8;
  double zero_tol = 1e-12;
  double coverage_tol = 0.01;
  std::vector<Point> sources;
  std::vector<Point> targets;
  std::vector<SubRectSpec> subrects;
  double scale = 1.0;
  std::optional<ProfileSpec> profile_1d;
  std::optional<DenseBallSpec> dense_balls;
  bool operator==(const Scenario&) const = default;
};

Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& s);

Domain build_domain(const DomainSpec& d);
StructuredBVField build_field(const Scenario& s, const FieldSpec& f);
BVProfile build_profile(const ProfileSpec& p);

}  // namespace svdkit
