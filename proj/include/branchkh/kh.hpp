#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "branchkh/diagram.hpp"
#include "branchkh/laurent.hpp"

namespace branchkh {

enum class Flavor { Reduced, Unreduced };

std::string flavor_name(Flavor f);
Flavor parse_flavor(const std::string& s);

// Chain complex over F2. Degree k of `gradings` holds the quantum gradings of
// the generators in homological degree min_degree + k; differential[k][g] is
// the sorted list of generators in degree k+1 hit by generator g.
struct GradedComplex {
  int min_degree = 0;
  std::vector<std::vector<int>> gradings;
  std::vector<std::vector<std::vector<int>>> differential;

  int64_t size() const;
};

struct KhRanks {
  std::map<std::pair<int, int>, int64_t> table;  // (i, j) -> rank, no zeros
  int64_t total = 0;

  void add(int i, int j, int64_t rank);
  friend bool operator==(const KhRanks&, const KhRanks&) = default;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Full cube of resolutions. Reduced mode keeps only generators whose
// basepoint circle is labelled x (basepoint edge defaults to 1). Throws
// GuardExceeded above `max_crossings`.
GradedComplex cube_complex(const Diagram& d, Flavor flavor, int max_crossings = 16);

// Checks d∘d = 0 and grading preservation (std::logic_error otherwise), then
// takes ranks blockwise in j.
KhRanks homology_ranks(const GradedComplex& c);

struct ScanOptions {
  int64_t max_generators = 4'000'000;
  // Verify d∘d = 0 on every complex after attaching a crossing (slow).
  bool check_dd = false;
  // Crossing order; default greedy_crossing_order.
  std::vector<int> order;
};

struct ScanStats {
  int64_t peak_generators = 0;
  int max_boundary = 0;
};

// Bar-Natan style scanning: attach crossings one at a time, deloop, and
// cancel isomorphisms after each step. Throws BudgetExceeded when an
// intermediate complex exceeds the ceiling.
KhRanks scan_ranks(const Diagram& d, Flavor flavor, const ScanOptions& opts = {},
                   ScanStats* stats = nullptr);

int64_t total_rank(const KhRanks& k);

// sum (-1)^i rank(i,j) q^j
LaurentPoly graded_euler(const KhRanks& k);

// {"table": [[i,j,rank],...], "total": N} plus any extra fields given.
std::string ranks_to_json(const KhRanks& k, const std::string& digest = "",
                          const std::string& flavor = "");
KhRanks ranks_from_json(const std::string& text);
// Aligned table, total on the last line.
std::string ranks_to_text(const KhRanks& k);

}  // namespace branchkh
