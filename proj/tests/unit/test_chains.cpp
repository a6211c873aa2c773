#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svdkit/chains.hpp"
#include "svdkit/errors.hpp"
#include "svdkit/wall.hpp"

using namespace svdkit;

namespace {
const Domain kSquare = Domain::rectangle(0.0, 0.0, 1.0, 1.0);
}

TEST_SUITE("geometry") {
  TEST_CASE("orientation is exact near collinearity") {
    const Point a{0.1, 0.1}, b{0.7, 0.7};
    CHECK(orient(a, b, {0.3, 0.3}) == 0);
    CHECK(orient(a, b, {0.3, std::nextafter(0.3, 1.0)}) == 1);
    CHECK(orient(a, b, {0.3, std::nextafter(0.3, 0.0)}) == -1);
  }

  TEST_CASE("segment contact classes") {
    CHECK(classify_segments({0, 0}, {1, 1}, {0, 1}, {1, 0}) == Contact::proper);
    CHECK(classify_segments({0, 0}, {1, 0}, {0.5, 0}, {0.5, 1}) == Contact::touching);
    CHECK(classify_segments({0, 0}, {1, 0}, {0.5, 0}, {2, 0}) == Contact::overlapping);
    CHECK(classify_segments({0, 0}, {1, 0}, {0, 1}, {1, 1}) == Contact::none);
    CHECK(crossing_parameter({0, 0}, {1, 1}, {0, 1}, {1, 0}) == doctest::Approx(0.5));
  }

  TEST_CASE("subtended angle jumps by 2 pi across the segment") {
    const Point a{0.0, 0.0}, b{1.0, 0.0};
    const double above = subtended_angle(a, b, {0.5, 1e-9});
    const double below = subtended_angle(a, b, {0.5, -1e-9});
    CHECK(std::abs(std::abs(above - below) - 2.0 * std::numbers::pi) < 1e-6);
    CHECK(std::abs(subtended_angle(a, b, {0.5, 0.5}) - std::numbers::pi / 2.0) < 1e-12);
    // Gradient against central differences.
    const Point x{0.3, 0.4};
    const Point g = subtended_angle_gradient(a, b, x);
    const double h = 1e-6;
    CHECK(g.x == doctest::Approx((subtended_angle(a, b, {x.x + h, x.y}) - subtended_angle(a, b, {x.x - h, x.y})) / (2 * h)).epsilon(1e-6));
    CHECK(g.y == doctest::Approx((subtended_angle(a, b, {x.x, x.y + h}) - subtended_angle(a, b, {x.x, x.y - h})) / (2 * h)).epsilon(1e-6));
  }

  TEST_CASE("polygon domain") {
    const Domain d = Domain::polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}});
    CHECK(d.area() == doctest::Approx(3.0));
    CHECK(d.contains({0.5, 1.5}));
    CHECK_FALSE(d.contains({1.5, 1.5}));
    CHECK_FALSE(d.contains_segment({0.5, 1.5}, {1.5, 0.5}));
    CHECK(d.contains_segment({0.5, 1.5}, {0.5, 0.5}));
    CHECK_THROWS_AS(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ContractError);
  }
}

TEST_SUITE("chains") {
  TEST_CASE("validation rejects bad chains") {
    CHECK_NOTHROW(validate_chain(kSquare, {{0.1, 0.1}, {0.5, 0.2}, {0.9, 0.9}}));
    CHECK_THROWS_AS(validate_chain(kSquare, {{0.1, 0.1}, {0.1, 0.1}}), ChainRejected);
    CHECK_THROWS_AS(validate_chain(kSquare, {{0.1, 0.1}, {1.5, 0.1}}), ChainRejected);
    // Self-intersection.
    CHECK_THROWS_AS(validate_chain(kSquare, {{0.1, 0.1}, {0.9, 0.9}, {0.9, 0.1}, {0.1, 0.9}}), ChainRejected);
    try {
      validate_chain(kSquare, {{0.1, 0.1}, {0.5, 0.5}, {1.2, 0.5}});
      FAIL("expected rejection");
    } catch (const ChainRejected& e) {
      CHECK(e.segment() == 1);
    }
  }

  TEST_CASE("arc-length parameterization") {
    const PolygonalChain c = validate_chain(kSquare, {{0.1, 0.1}, {0.4, 0.5}, {0.4, 0.9}});
    CHECK(c.length() == doctest::Approx(0.9));
    const Point p = c.at(0.5);
    CHECK(p.x == doctest::Approx(0.4));
    CHECK(p.y == doctest::Approx(0.5));
    CHECK(c.at(0.7).y == doctest::Approx(0.7));
    CHECK(c.segment_of(0.7) == 1);
    for (std::size_t i = 0; i < c.segment_count(); ++i) {
      CHECK(dot(c.foot(i), c.direction(i)) == doctest::Approx(0.0));
    }
  }

  TEST_CASE("wall crossings and reversal parity") {
    const JumpWall w = JumpWall::polyline({{0.5, 0.0}, {0.5, 1.0}}, 1.0);
    const PolygonalChain c = validate_chain(kSquare, {{0.2, 0.5}, {0.8, 0.5}, {0.8, 0.8}, {0.2, 0.8}});
    const auto xs = wall_crossings(c, w);
    REQUIRE(xs.size() == 2);
    // Wall runs upward: its left side is x < 0.5.
    CHECK(xs[0].sign == 1);
    CHECK(xs[1].sign == -1);
    CHECK(xs[0].t == doctest::Approx(0.3));
    const auto rs = wall_crossings(c.reversed(), w);
    REQUIRE(rs.size() == 2);
    CHECK(rs[0].sign == 1);
    CHECK(rs[1].sign == -1);
    CHECK(rs[0].t == doctest::Approx(c.length() - xs[1].t));
  }

  TEST_CASE("degenerate contact is rejected") {
    const JumpWall w = JumpWall::polyline({{0.5, 0.2}, {0.5, 0.8}}, 1.0);
    CHECK_THROWS_AS(wall_crossings(validate_chain(kSquare, {{0.2, 0.8}, {0.8, 0.8}}), w), ChainRejected);
    CHECK_THROWS_AS(wall_crossings(validate_chain(kSquare, {{0.5, 0.1}, {0.5, 0.9}}), w), ChainRejected);
    CHECK(wall_crossings(validate_chain(kSquare, {{0.2, 0.9}, {0.8, 0.9}}), w).empty());
  }

  TEST_CASE("wall validation") {
    CHECK_THROWS_AS(JumpWall::polyline({{0, 0}, {1, 1}}, 0.0).validate(), ContractError);
    CHECK_THROWS_AS(JumpWall::polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 1.0, true).validate(), ContractError);
    CHECK_THROWS_AS((CantorChannel{{0.0, 0.0}, 0.0, 1.0, 1.0}.validate()), ContractError);
    CHECK_THROWS_AS((CantorChannel{{1.0, 0.0}, 0.0, 1.0, 0.0}.validate()), ContractError);
  }
}
