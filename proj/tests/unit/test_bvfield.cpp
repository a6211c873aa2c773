#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "svdkit/cantor.hpp"
#include "svdkit/chains.hpp"
#include "svdkit/errors.hpp"

using namespace svdkit;
using namespace svdkit::testing;

TEST_SUITE("bvfield") {
  TEST_CASE("smooth grid reproduces bilinear data") {
    // x + 2y - 0.5xy is bilinear, so every query is exact up to rounding.
    const SmoothGrid g = SmoothGrid::polynomial({0, 0, 1, 1}, 5, 4, {0.0, 1.0, 2.0, 0.0, -0.5, 0.0, 0, 0, 0, 0});
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
      const Point p{u(rng), u(rng)};
      CHECK(g.value(p) == doctest::Approx(p.x + 2 * p.y - 0.5 * p.x * p.y).epsilon(1e-13));
      CHECK(g.gradient(p).x == doctest::Approx(1.0 - 0.5 * p.y).epsilon(1e-12));
      CHECK(g.twist(p) == doctest::Approx(-0.5).epsilon(1e-12));
    }
    CHECK(SmoothGrid::constant(3.0).value({7, 7}) == 3.0);
  }

  TEST_CASE("enclosing wall values and traces") {
    const StructuredBVField f = enclosed_field();
    CHECK(f.value({0.1, 0.1}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.value({0.5, 0.5}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.on_wall({0.3, 0.5}));
    CHECK(f.eval_lower({0.3, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.eval_upper({0.3, 0.5}) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.jump_size({0.3, 0.5}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.jump_size({0.3, 0.3}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(f.jump_size({0.1, 0.1}) == 0.0);
    CHECK_THROWS_AS(f.jump_size({1.5, 0.5}), DomainError);
    CHECK(f.gradient({0.5, 0.5}).x == 0.0);
  }

  TEST_CASE("crack wall jumps by its height") {
    const StructuredBVField f = crack_field(0.5);
    CHECK(f.jump_size({0.5, 0.5}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(f.jump_size({0.2, 0.5}) == 0.0);
    CHECK(f.value({0.5, 0.9}) + f.value({0.5, 0.1}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(f.has_ac_walls());
    CHECK_FALSE(enclosed_field().has_ac_walls());
  }

  TEST_CASE("restriction across a closed wall") {
    const StructuredBVField f = enclosed_field(1.0, 1.5);
    const PolygonalChain c = validate_chain(f.domain(), {{0.1, 0.5}, {0.9, 0.5}});
    const BVProfile p = restrict(f, c);
    CHECK(p.variation(VariationPart::jump) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(p.variation(VariationPart::ac) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(singular_variation(f, c) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(singular_variation(f, c.reversed()) == singular_variation(f, c));
    CHECK(p.right_limit(0.3) == doctest::Approx(2.5).epsilon(1e-14));
  }

  TEST_CASE("restriction rejects vertices on walls and Cantor fibres") {
    const StructuredBVField f = enclosed_field();
    CHECK_THROWS_AS(restrict(f, validate_chain(f.domain(), {{0.1, 0.5}, {0.3, 0.5}})), ChainRejected);
    const StructuredBVField g = cantor_field();
    CHECK_THROWS_AS(restrict(g, validate_chain(g.domain(), {{0.25, 0.5}, {0.6, 0.6}})), ChainRejected);
  }

  TEST_CASE("restriction matches pointwise values") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
      const StructuredBVField f = random_field(rng, 3, false);
      const PolygonalChain c = validate_chain(f.domain(), {{u(rng), u(rng)}, {u(rng), u(rng)}});
      BVProfile p = BVProfile::constant(0.0, 1.0, 0.0);
      try {
        p = restrict(f, c);
      } catch (const ChainRejected&) {
        continue;
      }
      for (int k = 1; k < 40; ++k) {
        const double t = c.length() * k / 40.0;
        const Point x = c.at(t);
        if (f.on_wall(x)) continue;
        CHECK(p.right_limit(t) == doctest::Approx(f.value(x)).epsilon(1e-9));
        ++checked;
      }
      CHECK(endpoint_bound_check(p));
    }
    CHECK(checked > 500);
  }

  TEST_CASE("Cantor restriction against partition sums") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int trial = 0; trial < 20; ++trial) {
      const CantorChannel ch = random_channel(rng);
      const StructuredBVField f(unit_square(), SmoothGrid::constant(0.0), {}, {ch});
      std::vector<Point> verts{{u(rng), u(rng)}, {u(rng), u(rng)}, {u(rng), u(rng)}};
      PolygonalChain c = validate_chain(f.domain(), {verts[0], verts[1]});
      try {
        c = validate_chain(f.domain(), verts);
      } catch (const ChainRejected&) {
      }
      // The level is affine along each segment, so the Cantor variation on a
      // segment is |C(level(end)) - C(level(start))|.
      double oracle = 0.0;
      for (std::size_t k = 1; k < c.vertices().size(); ++k) {
        oracle += ch.weight * std::abs(cantor_eval(ch.level(c.vertices()[k])) - cantor_eval(ch.level(c.vertices()[k - 1])));
      }
      const BVProfile p = restrict(f, c);
      CHECK(std::abs(p.variation(VariationPart::cantor) - oracle) <= 1e-6);
      CHECK(std::abs(singular_variation(f, c) - oracle) <= 1e-6);
    }
  }

  TEST_CASE("scaling and smooth replacement") {
    const StructuredBVField f = enclosed_field(1.0, 0.8);
    const StructuredBVField g = f.scaled_singular(2.5);
    CHECK(g.value({0.5, 0.5}) == doctest::Approx(1.0 + 2.0).epsilon(1e-14));
    CHECK(f.with_smooth(SmoothGrid::constant(4.0)).value({0.5, 0.5}) == doctest::Approx(4.8).epsilon(1e-14));
    CHECK(f.scaled(2.0).value({0.5, 0.5}) == doctest::Approx(3.6).epsilon(1e-14));
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(StructuredBVField(unit_square(), SmoothGrid::constant(0.0), {JumpWall::polyline({{0.5, 0.5}, {1.5, 0.5}}, 1.0)}),
                    ContractError);
    CHECK_THROWS_AS(StructuredBVField(unit_square(), SmoothGrid::constant(0.0), {}, {CantorChannel{{1.0, 0.0}, 3.0, 4.0, 1.0}}),
                    ContractError);
  }

  TEST_CASE("arrangement splits crossing walls") {
    const auto pieces = arrangement_pieces({JumpWall::polyline({{0.1, 0.5}, {0.9, 0.5}}, 1.0),
                                            JumpWall::polyline({{0.5, 0.1}, {0.5, 0.9}}, 1.0)});
    CHECK(pieces.size() == 4);
  }
}
