#pragma once

// Field builders shared by the unit and acceptance tests.

#include <random>
#include <vector>

#include "svdkit/bvfield.hpp"

namespace svdkit::testing {

inline Domain unit_square() { return Domain::rectangle(0.0, 0.0, 1.0, 1.0); }

/// Clockwise square loop; crossing it from outside to inside adds `height`.
inline JumpWall square_loop(double x0, double y0, double x1, double y1, double height) {
  return JumpWall::polyline({{x0, y0}, {x0, y1}, {x1, y1}, {x1, y0}}, height, true);
}

/// v = base outside and base + step inside [0.3, 0.7]^2.
inline StructuredBVField enclosed_field(double base = 1.0, double step = 1.0) {
  return StructuredBVField(unit_square(), SmoothGrid::constant(base), {square_loop(0.3, 0.3, 0.7, 0.7, step)});
}

inline StructuredBVField crack_field(double height = 0.5) {
  return StructuredBVField(unit_square(), SmoothGrid::constant(1.0),
                           {JumpWall::polyline({{0.3, 0.5}, {0.7, 0.5}}, height)});
}

inline StructuredBVField cantor_field(double base = 0.0, double weight = 1.0) {
  return StructuredBVField(unit_square(), SmoothGrid::constant(base), {}, {CantorChannel{{1.0, 0.0}, 0.0, 1.0, weight}});
}

inline SmoothGrid random_smooth(std::mt19937_64& rng, double amplitude = 0.3) {
  std::uniform_real_distribution<double> c(-amplitude, amplitude);
  std::vector<double> coeffs(10);
  for (double& x : coeffs) x = c(rng);
  coeffs[0] = 1.0 + std::abs(coeffs[0]);
  return SmoothGrid::polynomial({0.0, 0.0, 1.0, 1.0}, 9, 9, coeffs);
}

/// Random simple wall inside the unit square: segment, L-shape or loop.
inline JumpWall random_wall(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coord(0.08, 0.92);
  std::uniform_real_distribution<double> mag(0.2, 1.5);
  std::uniform_int_distribution<int> kind(0, 2);
  const double h = (rng() & 1U) ? mag(rng) : -mag(rng);
  double x0 = coord(rng), y0 = coord(rng), x1 = coord(rng), y1 = coord(rng);
  if (std::abs(x1 - x0) < 0.1) x1 = x0 < 0.5 ? x0 + 0.3 : x0 - 0.3;
  if (std::abs(y1 - y0) < 0.1) y1 = y0 < 0.5 ? y0 + 0.3 : y0 - 0.3;
  switch (kind(rng)) {
    case 0: return JumpWall::polyline({{x0, y0}, {x1, y1}}, h);
    case 1: return JumpWall::polyline({{x0, y0}, {x1, y0}, {x1, y1}}, h);
    default: return square_loop(std::min(x0, x1), std::min(y0, y1), std::max(x0, x1), std::max(y0, y1), h);
  }
}

inline CantorChannel random_channel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = angle(rng);
  const Point nu{std::cos(a), std::sin(a)};
  // Band over the projection of the square, shrunk at random.
  double lo = std::min({0.0, nu.x, nu.y, nu.x + nu.y}), hi = std::max({0.0, nu.x, nu.y, nu.x + nu.y});
  const double w = hi - lo;
  lo += 0.3 * w * u(rng);
  hi -= 0.3 * w * u(rng);
  return {nu, lo, hi, 0.2 + u(rng)};
}

/// Up to 3 walls and at most one channel on the unit square.
inline StructuredBVField random_field(std::mt19937_64& rng, int max_walls = 3, bool allow_channel = true) {
  std::uniform_int_distribution<int> nw(0, max_walls);
  std::vector<JumpWall> walls;
  for (int k = nw(rng); k > 0; --k) walls.push_back(random_wall(rng));
  std::vector<CantorChannel> channels;
  if (allow_channel && (rng() % 3 == 0)) channels.push_back(random_channel(rng));
  return StructuredBVField(unit_square(), random_smooth(rng), std::move(walls), std::move(channels));
}

}  // namespace svdkit::testing
