#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "branchkh/diagram.hpp"
#include "branchkh/laurent.hpp"

namespace branchkh {

using BigInt = boost::multiprecision::cpp_int;

class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreduced Goeritz matrix for one checkerboard colour class. Rows are the
// faces of that colour; `pivot` is the face adjacent to edge 1, whose row and
// column are deleted before taking the determinant.
struct GoeritzMatrix {
  std::vector<std::vector<int64_t>> entries;
  int shading = 0;
  int pivot = 0;
};

// Faces are traced from the PD corners; requires a connected diagram with at
// least one crossing.
GoeritzMatrix goeritz_matrix(const Diagram& d, int shading = 0);

// |det| of the reduced Goeritz matrix (exact). Split and disconnected
// diagrams give 0; the crossingless unknot gives 1.
BigInt determinant(const Diagram& d, int shading = 0);

// Kauffman bracket in A, normalized so the crossingless unknot is 1. The
// 0-smoothing of X(a,b,c,d) joins a-b and c-d and carries weight A. Crossings
// are resolved in `order` (default: greedy by shared edges), memoizing on the
// boundary connectivity of the resolved part. Throws GuardExceeded above
// `max_crossings`.
LaurentPoly kauffman_bracket(const Diagram& d, int max_crossings = 16,
                             const std::optional<std::vector<int>>& order = std::nullopt);

// Jones polynomial in the Khovanov variable q (V(t) with t = q^2), i.e. the
// graded Euler characteristic of reduced Khovanov homology:
//   (-1)^{n-} q^{n+ - 2n-} * (A^{-n} <D>) with A^{-2} = -q.
LaurentPoly jones_polynomial(const Diagram& d, int max_crossings = 16);

// |J(i)|: the determinant through the bracket channel.
int64_t jones_determinant(const Diagram& d, int max_crossings = 16);

// Gaussian integer value of a Laurent polynomial at q = i: {re, im}.
std::pair<int64_t, int64_t> evaluate_at_i(const LaurentPoly& p);

// Greedy processing order: repeatedly pick the unprocessed crossing sharing
// the most edges with the processed set (ties: most edges shared with the
// crossing picked last, then lowest index).
std::vector<int> greedy_crossing_order(const Diagram& d);

}  // namespace branchkh
