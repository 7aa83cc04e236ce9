#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "branchkh/generators.hpp"
#include "branchkh/invariants.hpp"
#include "corpus.hpp"

using namespace branchkh;

namespace {

int find(std::vector<int>& p, int x) {
  while (p[x] != x) x = p[x] = p[p[x]];
  return x;
}

// Kauffman bracket by summing over all 2^n states, with the crossingless
// unknot normalized to 1.
LaurentPoly state_sum_bracket(const Diagram& d) {
  int n = d.crossing_count();
  LaurentPoly delta = LaurentPoly::monomial(2, -1) + LaurentPoly::monomial(-2, -1);
  LaurentPoly out;
  for (uint32_t s = 0; s < (1u << n); ++s) {
    std::vector<int> p(static_cast<size_t>(d.edge_count() + 1));
    std::iota(p.begin(), p.end(), 0);
    int ones = 0;
    for (int c = 0; c < n; ++c) {
      auto e = d.crossings()[c].edges;
      if (s >> c & 1) {
        ++ones;
        p[find(p, e[0])] = find(p, e[3]);
        p[find(p, e[1])] = find(p, e[2]);
      } else {
        p[find(p, e[0])] = find(p, e[1]);
        p[find(p, e[2])] = find(p, e[3]);
      }
    }
    int loops = d.free_loops();
    for (int e = 1; e <= d.edge_count(); ++e) loops += find(p, e) == e;
    LaurentPoly term = LaurentPoly::monomial(n - 2 * ones);
    for (int i = 1; i < loops; ++i) term *= delta;
    out += term;
  }
  return out;
}

LaurentPoly invert(const LaurentPoly& p) {
  LaurentPoly out;
  for (auto [e, c] : p.terms()) out += LaurentPoly::monomial(-e, c);
  return out;
}

}  // namespace

TEST_SUITE("invariants") {
  TEST_CASE("determinant examples") {
    CHECK(determinant(torus_knot(2, 5)) == 5);
    CHECK(determinant(Diagram()) == 1);
    CHECK(determinant(parse_pd("X(1,1,2,2)")) == 1);
    CHECK(determinant(tau(Slope(0, 1))) == 0);
    CHECK(determinant(torus_knot(2, 3)) == 3);
    CHECK(determinant(torus_link(2, 2)) == 2);
    CHECK(determinant(torus_link(2, 0)) == 0);  // split
  }

  TEST_CASE("non-planar codes are rejected") {
    // Valid edge usage, but the corners do not close into n + 2 faces.
    CHECK_THROWS_AS(determinant(parse_pd("X(1,4,2,3) X(3,6,4,5) X(5,2,6,1)")), DiagramError);
  }

  TEST_CASE("bracket agrees with the state sum") {
    for (const auto& [name, d] : corpus::random_diagrams(40, 10, 7)) {
      CAPTURE(name);
      CHECK(kauffman_bracket(d) == state_sum_bracket(d));
    }
    CHECK(kauffman_bracket(torus_knot(2, 5)) == state_sum_bracket(torus_knot(2, 5)));
  }

  TEST_CASE("bracket does not depend on the processing order") {
    std::mt19937 rng(3);
    for (const auto& [name, d] : corpus::random_diagrams(20, 12, 11)) {
      std::vector<int> order(static_cast<size_t>(d.crossing_count()));
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      CAPTURE(name);
      CHECK(kauffman_bracket(d, 16, order) == kauffman_bracket(d));
    }
  }

  TEST_CASE("|J(i)| equals the Goeritz determinant up to 16 crossings") {
    for (const auto& [name, d] : corpus::oracle_corpus()) {
      CAPTURE(name);
      BigInt g = determinant(d);
      CHECK(BigInt(jones_determinant(d)) == g);
      CHECK(determinant(d, 1) == g);  // other shading
    }
  }

  TEST_CASE("mirror: same determinant, Jones inverted") {
    for (const auto& [name, d] : corpus::random_diagrams(20, 12, 5)) {
      CAPTURE(name);
      Diagram m = mirror(d);
      CHECK(determinant(m) == determinant(d));
      CHECK(jones_polynomial(m) == invert(jones_polynomial(d)));
    }
  }

  TEST_CASE("Jones skein relation on 2-braid closures") {
    // q^-2 V(L+) - q^2 V(L-) = (q^-1 - q) V(L0)
    auto v = [](int k) { return jones_polynomial(torus_link(2, k)); };
    for (int k = 2; k <= 12; ++k) {
      LaurentPoly lhs = v(k).shifted(-2) - v(k - 2).shifted(2);
      LaurentPoly rhs = v(k - 1).shifted(-1) - v(k - 1).shifted(1);
      CAPTURE(k);
      CHECK(lhs == rhs);
    }
  }

  TEST_CASE("kink: Jones is trivial") {
    CHECK(jones_polynomial(parse_pd("X(1,1,2,2)")) == LaurentPoly(1));
    CHECK(jones_polynomial(Diagram()) == LaurentPoly(1));
  }

  TEST_CASE("crossing guard") {
    Diagram big = tau(Slope(1, 1));
    REQUIRE(big.crossing_count() == 17);
    CHECK_THROWS_AS(kauffman_bracket(big), GuardExceeded);
    CHECK_THROWS_AS(jones_polynomial(big), GuardExceeded);
    CHECK(jones_determinant(big, 17) == 1);
  }

  TEST_CASE("greedy order is a permutation") {
    Diagram d = tau(Slope(0, 1));
    auto order = greedy_crossing_order(d);
    std::sort(order.begin(), order.end());
    std::vector<int> want(16);
    std::iota(want.begin(), want.end(), 0);
    CHECK(order == want);
  }
}
