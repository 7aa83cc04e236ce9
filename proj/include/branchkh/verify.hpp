#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "branchkh/surgery.hpp"

namespace branchkh {

enum class ClaimKind { Equal, Unequal };
enum class ClaimStatus { Pass, Fail, Skipped };

// Equal claims pass when computed == expected. Unequal claims compare the
// ranks of two corresponding branch sets: `computed` is one rank, `expected`
// the partner's, and they pass when the two differ.
struct ClaimRecord {
  std::string description;
  int64_t expected = 0;
  std::optional<int64_t> computed;
  ClaimStatus status = ClaimStatus::Skipped;
  ClaimKind kind = ClaimKind::Equal;
  int tier = 1;
  std::string note;  // reason for a skip
  double seconds = 0;
};

struct VerifyOptions {
  int64_t max_generators = 4'000'000;
  int threads = 1;
};

std::string status_name(ClaimStatus s);

std::vector<ClaimRecord> reproduce_paper(int tier, const VerifyOptions& opts = {});

struct LesRow {
  int64_t n = 0;
  SurgerySign sign = SurgerySign::Plus;
  std::optional<int64_t> rank;        // rk tau(+/-1/n)
  int64_t closed_bound = 0;           // 16n -/+ 1
  std::optional<int64_t> recursive_bound;  // rk tau(+/-1/(n-1)) + rk tau(0); none at n = 1
  bool holds = false;
  bool equality = false;
  std::string note;
};

struct LesReport {
  int64_t tau0_rank = 0;
  std::vector<LesRow> rows;
  bool all_hold = false;
};

LesReport les_bound_check(int64_t n_max, const VerifyOptions& opts = {});

struct GrowthPoint {
  int64_t q = 0;
  std::optional<int64_t> rank;  // reduced rank of T(5,q)
  std::optional<int64_t> difference;  // from the previous computed entry
  std::string note;
};

std::vector<GrowthPoint> growth_probe(const std::vector<int64_t>& q_list,
                                      const VerifyOptions& opts = {});

}  // namespace branchkh
