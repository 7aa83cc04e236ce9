#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "branchkh/diagram.hpp"

namespace branchkh {

// Reduced fraction r/s with s >= 0; 1/0 is the infinity slope.
class Slope {
 public:
  Slope(int64_t r, int64_t s);  // reduces; throws std::invalid_argument on 0/0

  static Slope infinity() { return Slope(1, 0); }
  static Slope parse(const std::string& text);  // "r/s", "r", "1/0", "inf"

  int64_t r() const { return r_; }
  int64_t s() const { return s_; }
  bool is_infinity() const { return s_ == 0; }
  std::string str() const;

  friend bool operator==(const Slope&, const Slope&) = default;

 private:
  int64_t r_;
  int64_t s_;
};

// Continued-fraction coefficients, outermost first: {c0, c1, ..., ck} stands
// for c0 + 1/(c1 + 1/(... + 1/ck)). The empty word is 1/0.
struct TwistWord {
  std::vector<int64_t> coefficients;
  friend bool operator==(const TwistWord&, const TwistWord&) = default;
};

TwistWord continued_fraction(const Slope& s);

// Exact evaluation of a twist word; throws std::domain_error on a zero
// denominator inside the expansion.
Slope evaluate(const TwistWord& w);

enum class End : uint8_t { NW = 0, NE = 1, SW = 2, SE = 3 };

// A four-ended tangle. Interior tuples list edges counterclockwise with the
// under strand in slots 0 and 2; strand directions are fixed only when the
// tangle is closed. `ends` holds the edge at each of NW, NE, SW, SE. An end
// edge is used once by the interior, except that an arc running straight
// between two ends carries a single label shared by both ends.
struct TangleTemplate {
  std::vector<std::array<int, 4>> interior;
  std::array<int, 4> ends{};
  int free_loops = 0;
  std::string name;

  int end(End e) const { return ends[static_cast<int>(e)]; }
  int crossing_count() const { return static_cast<int>(interior.size()); }
  int max_edge() const;
};

// Throws DiagramError when an edge is used the wrong number of times.
void check_template(const TangleTemplate& t);

namespace tangle {

TangleTemplate zero();      // [0]: arcs NW-NE and SW-SE
TangleTemplate infinity();  // [inf]: arcs NW-SW and NE-SE
TangleTemplate crossing(int sign);  // [+1] or [-1]

// Horizontal juxtaposition: a.NE-b.NW and a.SE-b.SW are joined.
TangleTemplate sum(const TangleTemplate& a, const TangleTemplate& b);
// Vertical stacking, a above b: a.SW-b.NW and a.SE-b.NE are joined.
TangleTemplate stack(const TangleTemplate& a, const TangleTemplate& b);
// Quarter turn counterclockwise (NE moves to NW).
TangleTemplate rotate(const TangleTemplate& t);
TangleTemplate mirror(const TangleTemplate& t);

// Adds |n| half-twists on the right (horizontal) or below (vertical).
TangleTemplate twist_horizontal(const TangleTemplate& t, int64_t n);
TangleTemplate twist_vertical(const TangleTemplate& t, int64_t n);

// Closures: numerator joins NW-NE and SW-SE; denominator joins NW-SW and
// NE-SE. The result is oriented and relabelled.
Diagram numerator(const TangleTemplate& t);
Diagram denominator(const TangleTemplate& t);

}  // namespace tangle

// Rational tangle whose numerator closure has determinant |r| and denominator
// closure determinant s. Built by alternating vertical and horizontal twist
// regions from the innermost coefficient, ending with a horizontal region.
TangleTemplate rational_tangle(const Slope& s);

}  // namespace branchkh
