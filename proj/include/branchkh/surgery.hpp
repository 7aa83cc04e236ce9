#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "branchkh/tangle.hpp"

namespace branchkh {

enum class SurgerySign : int8_t { Plus = 1, Minus = -1 };

// r*mu + s*lambda. Stored reduced with s >= 0, like tangle slopes.
using SurgerySlope = Slope;
using FibreSlope = Slope;

// Regular fibre of the Seifert fibration of the T(p,q) complement: pq*mu + lambda.
FibreSlope fibre_slope(int64_t p, int64_t q);

// |a.r * f.s - a.s * f.r|
int64_t slope_distance(const SurgerySlope& a, const FibreSlope& f);

// Cone orders of a Seifert base S^2(a,b,c), kept sorted so that comparison
// ignores order.
struct OrbifoldBase {
  std::array<int64_t, 3> orders{};

  OrbifoldBase(int64_t a, int64_t b, int64_t c);
  std::string str() const;  // "S2(2,5,9)"
  friend bool operator==(const OrbifoldBase&, const OrbifoldBase&) = default;
};

// Base of +/-1/n surgery on T(p,q): S^2(p, q, pqn -/+ 1). The third order is
// computed both from the formula and as a slope distance; a disagreement is
// a std::logic_error. Requires 0 < p < q coprime and n > 0.
OrbifoldBase base_orbifold(int64_t p, int64_t q, int64_t n, SurgerySign sign);

// Order of H1 of r/s surgery on a knot: |r|, with 0 meaning infinite.
int64_t h1_order(const SurgerySlope& s);

struct CorrespondenceRow {
  OrbifoldBase orbifold;
  int64_t torus_p = 0;  // branch set T(torus_p, torus_q)
  int64_t torus_q = 0;
  Slope tau_slope = Slope::infinity();
  int64_t expected_determinant = 0;

  std::string torus_name() const;
};

// One row of the two-branch-set table for +/-1/n surgery on T(2,q):
// S^2(2, q, 2qn -/+ 1), T(q, 2qn -/+ 1), tau(+/-1/n), det 1.
CorrespondenceRow correspondence_row(int64_t q, int64_t n, SurgerySign sign);

inline int sign_value(SurgerySign s) { return static_cast<int>(s); }
inline const char* sign_symbol(SurgerySign s) { return s == SurgerySign::Plus ? "+" : "-"; }

}  // namespace branchkh
