#pragma once

#include <vector>

#include "branchkh/diagram.hpp"
#include "branchkh/surgery.hpp"
#include "branchkh/tangle.hpp"

namespace branchkh {

// Closure of a braid on `strands` strands. Letters are +i for sigma_i and -i
// for its inverse, 1 <= i < strands. Strands that never cross become free
// loops.
Diagram braid_closure(int strands, const std::vector<int>& word);

// Closure of (sigma_1 ... sigma_{p-1})^q; any p >= 1, q >= 0.
Diagram torus_link(int p, int q);

// The positive (p,q) torus knot; requires 2 <= p < q and gcd(p,q) = 1.
// Throws std::invalid_argument otherwise.
Diagram torus_knot(int p, int q);

// Quotient tangle of the cinqfoil complement under its strong inversion, in
// the framing where the denominator closure is the unknot and the numerator
// closure has determinant zero. Static data.
const TangleTemplate& cinqfoil_template();

// tau(r/s): numerator closure of t + R(r/s).
Diagram attach_rational(const TangleTemplate& t, const Slope& s);

// attach_rational(cinqfoil_template(), s)
Diagram tau(const Slope& s);

// T(q, 2qn -/+ 1): branch set of the Seifert involution on +/-1/n surgery on
// T(2,q). Requires odd q > 1 and n > 0.
Diagram seifert_branch_set(int q, int n, SurgerySign sign);

}  // namespace branchkh
