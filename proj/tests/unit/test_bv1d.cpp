#include <doctest.h>

#include <cmath>
#include <random>

#include "svdkit/bv1d.hpp"
#include "svdkit/errors.hpp"

using namespace svdkit;

namespace {

AcPiece piece(double value, double slope) {
  AcPiece p;
  p.value = value;
  p.slope = slope;
  p.direction = {1.0, 0.0};
  return p;
}

// Pointwise partition sum, a lower bound for the total variation.
double partition_sum(const BVProfile& p, int n) {
  double sum = 0.0, prev = p.right_limit(p.start());
  for (int k = 1; k <= n; ++k) {
    const double t = p.start() + (p.end() - p.start()) * k / n;
    const double u = k == n ? p.left_limit(t) : p.right_limit(t);
    sum += std::abs(u - prev);
    prev = u;
  }
  return sum;
}

}  // namespace

TEST_SUITE("bv1d") {
  TEST_CASE("affine profile") {
    const BVProfile p = BVProfile::affine(0.0, 2.0, 1.0, -3.0);
    CHECK(p.variation(VariationPart::total) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(p.variation(VariationPart::jump) == 0.0);
    CHECK(p.variation(VariationPart::singular) == 0.0);
    CHECK(endpoint_bound_check(p));
  }

  TEST_CASE("jump limits") {
    const BVProfile p({0.0, 2.0}, {piece(1.0, 0.0)}, {{1.0, 2.5}});
    CHECK(p.left_limit(1.0) == 1.0);
    CHECK(p.right_limit(1.0) == 3.5);
    CHECK(p.lower_limit(1.0) == 1.0);
    CHECK(p.upper_limit(1.0) == 3.5);
    CHECK(p.variation(VariationPart::jump) == 2.5);
    CHECK(p.variation(VariationPart::singular) == 2.5);
    CHECK(p.breakpoints() == std::vector<double>{0.0, 1.0, 2.0});
  }

  TEST_CASE("jump merging and dust") {
    const BVProfile p({0.0, 1.0}, {piece(0.0, 0.0)}, {{0.5, 1.0}, {0.5, -0.25}, {0.7, 1e-17}});
    REQUIRE(p.jumps().size() == 1);
    CHECK(p.jumps().front().height == 0.75);
  }

  TEST_CASE("contract errors") {
    CHECK_THROWS_AS(BVProfile({0.0, 1.0}, {piece(0.0, 0.0)}, {{0.0, 1.0}}), ContractError);
    CHECK_THROWS_AS(BVProfile({0.0, 1.0}, {piece(0.0, 0.0), piece(0.0, 0.0)}), ContractError);
    CHECK_THROWS_AS(BVProfile({1.0, 0.0}, {piece(0.0, 0.0)}), ContractError);
    // AC part must be continuous at breakpoints.
    CHECK_THROWS_AS(BVProfile({0.0, 1.0, 2.0}, {piece(0.0, 1.0), piece(2.0, 0.0)}), ContractError);
  }

  TEST_CASE("Cantor atom uses exact levels") {
    const BVProfile p({0.0, 1.0}, {piece(0.0, 0.0)}, {}, {CantorAtom{0.0, 1.0, 2.0, 0.0, 1.0}});
    CHECK(std::abs(p.cantor_value(0.25) - 2.0 / 3.0) <= 1e-12);
    CHECK(p.variation(VariationPart::cantor) == doctest::Approx(2.0).epsilon(1e-12));
    // Reversed levels: decreasing staircase, same variation.
    const BVProfile q({0.0, 1.0}, {piece(0.0, 0.0)}, {}, {CantorAtom{0.0, 1.0, 1.0, 1.0, 0.0}});
    CHECK(q.variation(VariationPart::cantor) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q.cantor_value(1.0) == doctest::Approx(-1.0).epsilon(1e-12));
  }

  TEST_CASE("partition sums never exceed the variation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double v0 = u(rng), s0 = u(rng);
      const BVProfile p({0.0, 0.4, 1.0}, {piece(v0, s0), piece(v0 + 0.4 * s0, u(rng))}, {{0.25, u(rng)}, {0.6, u(rng)}},
                        {CantorAtom{0.1, 0.9, u(rng), 0.0, 1.0}});
      const double total = p.variation(VariationPart::total);
      CHECK(partition_sum(p, 20000) <= total + 1e-12);
      CHECK(endpoint_bound_check(p));
      // Without the staircase the sums converge quickly from below.
      const BVProfile q(p.breakpoints(), p.pieces(), p.jumps());
      CHECK(partition_sum(q, 20000) >= q.variation(VariationPart::total) - 1e-3);
    }
  }

  TEST_CASE("restriction is additive away from atoms") {
    const BVProfile p({0.0, 2.0}, {piece(0.0, 1.0)}, {{0.5, -2.0}, {1.5, 1.0}}, {CantorAtom{0.0, 2.0, 1.0, 0.0, 1.0}});
    const double whole = p.variation(VariationPart::total);
    const double left = p.restricted(0.0, 1.1).variation(VariationPart::total);
    const double right = p.restricted(1.1, 2.0).variation(VariationPart::total);
    CHECK(left + right == doctest::Approx(whole).epsilon(1e-12));
    const BVProfile r = p.restricted(0.7, 1.8);
    CHECK(r.start() == 0.7);
    CHECK(r.right_limit(0.7) == doctest::Approx(p.right_limit(0.7)).epsilon(1e-14));
    CHECK(r.right_limit(1.6) == doctest::Approx(p.right_limit(1.6)).epsilon(1e-14));
  }

  TEST_CASE("concat adds the junction jump") {
    const BVProfile a = BVProfile::affine(0.0, 1.0, 0.0, 1.0);
    const BVProfile b({1.0, 2.0}, {piece(5.0, -1.0)}, {{1.5, 0.5}});
    const BVProfile c = concat(a, b, 0.25);
    CHECK(c.variation(VariationPart::total) ==
          doctest::Approx(a.variation(VariationPart::total) + b.variation(VariationPart::total) + 0.25).epsilon(1e-14));
    CHECK(c.variation(VariationPart::jump) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(c.right_limit(1.0) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(endpoint_bound_check(c));
  }
}
