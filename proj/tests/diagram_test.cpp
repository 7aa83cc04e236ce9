#include <doctest.h>

#include <numeric>
#include <random>

#include "branchkh/diagram.hpp"
#include "branchkh/generators.hpp"
#include "corpus.hpp"

using namespace branchkh;

namespace {
// Planar left-handed trefoil; used wherever a computation needs faces.
const char* kTrefoil = "X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)";
}

TEST_SUITE("diagram") {
  TEST_CASE("parse the textbook trefoil code") {
    Diagram d = parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)");
    CHECK(d.crossing_count() == 3);
    CHECK(d.edge_count() == 6);
    CHECK(validate(d).ok);
  }

  TEST_CASE("parse accepts brackets and a PD wrapper") {
    Diagram a = parse_pd(kTrefoil);
    Diagram b = parse_pd("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]");
    CHECK(a == b);
  }

  TEST_CASE("one-crossing kink") {
    Diagram d = parse_pd("X(1,1,2,2)");
    CHECK(d.crossing_count() == 1);
    CHECK(validate(d).ok);
    CHECK(component_count(d) == 1);
    CHECK(std::abs(writhe(d)) == 1);
  }

  TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_pd("X(1,2,3)"), DiagramError);
    CHECK_THROWS_AS(parse_pd(""), DiagramError);
    CHECK_THROWS_AS(parse_pd("   "), DiagramError);
    CHECK_THROWS_AS(parse_pd("X(1,2,3,a)"), DiagramError);
    CHECK_THROWS_AS(parse_pd("X(0,1,1,2)"), DiagramError);
    CHECK_THROWS_AS(parse_pd("X(1,2,3,4,5)"), DiagramError);
  }

  TEST_CASE("validate names a bad edge") {
    // Edge 5 occurs once, edge 6 three times.
    Diagram d(std::vector<std::array<int, 4>>{{1, 4, 2, 5}, {3, 6, 4, 1}, {6, 2, 6, 3}});
    ValidationReport r = validate(d);
    CHECK_FALSE(r.ok);
    bool names5 = false;
    for (const auto& p : r.problems)
      if (p.find("edge 5") != std::string::npos) names5 = true;
    CHECK(names5);
  }

  TEST_CASE("validate rejects a bad basepoint") {
    Diagram d = parse_pd(kTrefoil).with_basepoint(9);
    CHECK_FALSE(validate(d).ok);
  }

  TEST_CASE("empty diagram is the crossingless unknot") {
    Diagram d;
    ValidationReport r = validate(d);
    CHECK(r.ok);
    CHECK(r.crossingless_unknot);
    CHECK(component_count(d) == 1);
    CHECK(render(d) == "loops=1");
    CHECK(parse_pd("loops=1") == d);
    CHECK(component_count(parse_pd("loops=3")) == 3);
  }

  TEST_CASE("render round trip on generated diagrams") {
    std::vector<Diagram> ds = {torus_knot(2, 5), torus_knot(5, 9), torus_knot(3, 7),
                               tau(Slope(0, 1)), tau(Slope(1, 0)), tau(Slope(-3, 2)),
                               torus_link(4, 6), parse_pd("X(1,1,2,2) bp=2")};
    for (const auto& r : corpus::random_diagrams(30, 12, 7)) ds.push_back(r.d);
    for (const auto& d : ds) {
      Diagram back = parse_pd(render(d));
      CHECK(back == d);
      CHECK(back.is_oriented() == d.is_oriented());
    }
  }

  TEST_CASE("basepoint survives rendering") {
    Diagram d = parse_pd(std::string(kTrefoil) + " bp=4");
    REQUIRE(d.basepoint());
    CHECK(*d.basepoint() == 4);
    CHECK(render(d).find("bp=4") != std::string::npos);
  }

  TEST_CASE("writhe of torus knots and the trefoil") {
    CHECK(writhe(torus_knot(2, 3)) == 3);
    CHECK(writhe(torus_knot(2, 5)) == 5);
    CHECK(writhe(parse_pd(kTrefoil)) == -3);
  }

  TEST_CASE("mirror negates writhe and is an involution") {
    std::vector<Diagram> ds = {parse_pd(kTrefoil), torus_knot(2, 3), parse_pd("X(1,1,2,2)"),
                               torus_knot(3, 5), tau(Slope(1, 2))};
    for (const auto& r : corpus::random_diagrams(30, 12, 11)) ds.push_back(r.d);
    for (const auto& d : ds) {
      Diagram m = mirror(d);
      CHECK(writhe(m) == -writhe(d));
      CHECK(mirror(m) == d);
      CHECK(diagram_digest(mirror(m)) == diagram_digest(d));
    }
  }

  TEST_CASE("kink handedness swaps under mirror") {
    Diagram k = parse_pd("X(1,1,2,2)");
    CHECK(writhe(mirror(k)) == -writhe(k));
  }

  TEST_CASE("component count of torus links is gcd") {
    for (int p = 2; p <= 21; ++p) {
      for (int q = p + 1; q <= 21; ++q) {
        CHECK_MESSAGE(component_count(torus_link(p, q)) == std::gcd(p, q), "T(", p, ",", q, ")");
      }
    }
  }

  TEST_CASE("numerator closure of the zero tangle has two components") {
    CHECK(component_count(tangle::numerator(tangle::zero())) == 2);
    CHECK(component_count(tangle::denominator(tangle::zero())) == 1);
  }

  TEST_CASE("digest ignores crossing order and labels but sees mirror and basepoint") {
    std::mt19937 rng(3);
    Diagram d = parse_pd(kTrefoil);
    for (int i = 0; i < 10; ++i) CHECK(diagram_digest(corpus::scramble(d, rng)) == diagram_digest(d));
    Diagram t = torus_knot(3, 5);
    for (int i = 0; i < 10; ++i) CHECK(diagram_digest(corpus::scramble(t, rng)) == diagram_digest(t));
    CHECK(diagram_digest(mirror(d)) != diagram_digest(d));
    CHECK(diagram_digest(d.with_basepoint(1)) != diagram_digest(d));
    CHECK(diagram_digest(d).size() == 64);
  }

  TEST_CASE("permuted crossing lists share a digest") {
    Diagram a = parse_pd("X(1,4,2,5) X(3,6,4,1) X(5,2,6,3)");
    Diagram b = parse_pd("X(5,2,6,3) X(1,4,2,5) X(3,6,4,1)");
    CHECK(diagram_digest(a) == diagram_digest(b));
  }
}
