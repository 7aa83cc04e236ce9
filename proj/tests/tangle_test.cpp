#include <doctest.h>

#include <numeric>

#include "branchkh/generators.hpp"
#include "branchkh/invariants.hpp"
#include "branchkh/tangle.hpp"
#include "corpus.hpp"

using namespace branchkh;

namespace {

// Exact evaluation written independently of evaluate(): fold from the
// innermost coefficient as a pair (numerator, denominator).
std::pair<int64_t, int64_t> fold(const TwistWord& w) {
  int64_t num = 1, den = 0;  // 1/0
  for (auto it = w.coefficients.rbegin(); it != w.coefficients.rend(); ++it) {
    // c + 1/(num/den) = (c*num + den)/num
    int64_t n2 = *it * num + den;
    den = num;
    num = n2;
  }
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

}  // namespace

TEST_SUITE("tangle") {
  TEST_CASE("slopes normalize") {
    CHECK(Slope(2, 4) == Slope(1, 2));
    CHECK(Slope(3, -6) == Slope(-1, 2));
    CHECK(Slope(-5, 0) == Slope::infinity());
    CHECK(Slope(0, -7) == Slope(0, 1));
    CHECK_THROWS_AS(Slope(0, 0), std::invalid_argument);
    CHECK(Slope::parse("-1/2") == Slope(-1, 2));
    CHECK(Slope::parse("3") == Slope(3, 1));
    CHECK(Slope::parse("1/0") == Slope::infinity());
    CHECK(Slope::parse("inf") == Slope::infinity());
    CHECK(Slope(-1, 2).str() == "-1/2");
    CHECK_THROWS(Slope::parse("1/2/3"));
    CHECK_THROWS(Slope::parse("x"));
  }

  TEST_CASE("continued fraction examples") {
    CHECK(continued_fraction(Slope::infinity()).coefficients.empty());
    CHECK(continued_fraction(Slope(3, 1)).coefficients == std::vector<int64_t>{3});
    TwistWord w = continued_fraction(Slope(8, 5));
    CHECK(fold(w) == std::pair<int64_t, int64_t>{8, 5});
    CHECK(evaluate(w) == Slope(8, 5));
  }

  TEST_CASE("continued fraction round trip for |r|, s <= 100") {
    int checked = 0;
    for (int64_t r = -100; r <= 100; ++r) {
      for (int64_t s = 0; s <= 100; ++s) {
        if (std::gcd(r < 0 ? -r : r, s) != 1) continue;
        Slope sl(r, s);
        TwistWord w = continued_fraction(sl);
        REQUIRE(evaluate(w) == sl);
        auto f = fold(w);
        REQUIRE(Slope(f.first, f.second) == sl);
        ++checked;
      }
    }
    CHECK(checked > 12000);
  }

  TEST_CASE("evaluate rejects a vanishing denominator") {
    // 1 + 1/0 has a zero denominator inside the expansion.
    CHECK_THROWS_AS(evaluate(TwistWord{{1, 0}}), std::domain_error);
  }

  TEST_CASE("base tangles") {
    CHECK(rational_tangle(Slope::infinity()).crossing_count() == 0);
    for (int n = -4; n <= 4; ++n) {
      CHECK(rational_tangle(Slope(n, 1)).crossing_count() == std::abs(n));
    }
    TangleTemplate half = rational_tangle(Slope(1, 2));
    CHECK(half.crossing_count() == 2);
    Diagram hopf = tangle::denominator(half);
    CHECK(determinant(tangle::numerator(half)) == 1);
    CHECK(component_count(hopf) == 2);
    CHECK(determinant(hopf) == 2);
  }

  TEST_CASE("closure determinants of rational tangles, |r|, s <= 20") {
    for (int64_t r = -20; r <= 20; ++r) {
      for (int64_t s = 0; s <= 20; ++s) {
        if (std::gcd(r < 0 ? -r : r, s) != 1) continue;
        TangleTemplate t = rational_tangle(Slope(r, s));
        REQUIRE_NOTHROW(check_template(t));
        CHECK_MESSAGE(determinant(tangle::numerator(t)) == (r < 0 ? -r : r), r, "/", s);
        CHECK_MESSAGE(determinant(tangle::denominator(t)) == s, r, "/", s);
      }
    }
  }

  TEST_CASE("mirror negates the fraction") {
    // det only sees |r|, so compare via the sum with a fixed tangle: the
    // numerator of R(a) + R(b) has determinant |a_r b_s + b_r a_s|.
    for (auto [r, s] : std::vector<std::pair<int, int>>{{2, 5}, {3, 7}, {-4, 9}}) {
      TangleTemplate m = tangle::mirror(rational_tangle(Slope(r, s)));
      TangleTemplate probe = rational_tangle(Slope(1, 1));
      int64_t expect = std::abs(-r * 1 + 1 * s);
      CHECK(determinant(tangle::numerator(tangle::sum(m, probe))) == expect);
    }
  }

  TEST_CASE("template end mismatch is reported") {
    TangleTemplate t = tangle::crossing(1);
    t.ends[0] = 99;
    CHECK_THROWS_AS(check_template(t), DiagramError);
    CHECK_THROWS_AS(attach_rational(t, Slope(1, 1)), DiagramError);
  }
}
