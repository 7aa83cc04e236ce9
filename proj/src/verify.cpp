#include "branchkh/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <map>
#include <numeric>
#include <thread>

#include "branchkh/generators.hpp"
#include "branchkh/invariants.hpp"
#include "branchkh/kh.hpp"

namespace branchkh {

std::string status_name(ClaimStatus s) {
  switch (s) {
    case ClaimStatus::Pass:
      return "PASS";
    case ClaimStatus::Fail:
      return "FAIL";
    case ClaimStatus::Skipped:
      return "SKIP";
  }
  return "?";
}

namespace {

struct JobResult {
  std::optional<int64_t> value;
  bool budget = false;
  std::string error;
  double seconds = 0;
};

struct Job {
  std::string key;
  std::function<int64_t()> fn;
  JobResult result;
};

class JobSet {
 public:
  explicit JobSet(const VerifyOptions& opts) : opts_(opts) {}

  // Registers (once) the reduced rank of a diagram and returns its key.
  std::string rank(const std::string& key, std::function<Diagram()> make) {
    if (!index_.count(key)) {
      int64_t ceiling = opts_.max_generators;
      add(key, [make, ceiling] {
        ScanOptions so;
        so.max_generators = ceiling;
        return scan_ranks(make(), Flavor::Reduced, so).total;
      });
    }
    return key;
  }
  std::string det(const std::string& key, std::function<Diagram()> make) {
    if (!index_.count(key)) {
      add(key, [make] { return static_cast<int64_t>(determinant(make())); });
    }
    return key;
  }

  void run() {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (size_t i = next++; i < jobs_.size(); i = next++) {
        Job& j = jobs_[i];
        auto t0 = std::chrono::steady_clock::now();
        try {
          j.result.value = j.fn();
        } catch (const BudgetExceeded& e) {
          j.result.budget = true;
          j.result.error = e.what();
        } catch (const std::exception& e) {
          j.result.error = e.what();
        }
        j.result.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      }
    };
    int n = std::max(1, opts_.threads);
    if (n == 1) {
      worker();
      return;
    }
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const JobResult& operator[](const std::string& key) const { return jobs_[index_.at(key)].result; }

 private:
  void add(const std::string& key, std::function<int64_t()> fn) {
    index_[key] = jobs_.size();
    jobs_.push_back({key, std::move(fn), {}});
  }

  VerifyOptions opts_;
  std::vector<Job> jobs_;
  std::map<std::string, size_t> index_;
};

std::string tau_key(const Slope& s) { return "tau(" + s.str() + ")"; }

std::string rank_of_tau(JobSet& jobs, const Slope& s) {
  return jobs.rank("rk " + tau_key(s), [s] { return tau(s); });
}

std::string rank_of_torus(JobSet& jobs, int64_t p, int64_t q) {
  std::string name = "T(" + std::to_string(p) + "," + std::to_string(q) + ")";
  return jobs.rank("rk " + name, [p, q] {
    return torus_knot(static_cast<int>(p), static_cast<int>(q));
  });
}

// Published reduced ranks of the torus branch sets T(5, 10n -/+ 1).
int64_t published_torus_rank(int64_t n, SurgerySign sign) {
  int s = sign_value(sign);
  if (n == 1) return 65 - 8 * s;
  if (n == 2) return 257 - 16 * s;
  throw std::invalid_argument("no published rank for n = " + std::to_string(n));
}

// Closed form of the rank of tau(+/-1/n) attained in the published values.
int64_t tau_rank_bound(int64_t n, SurgerySign sign) { return 16 * n - sign_value(sign); }

struct PendingClaim {
  ClaimRecord record;
  std::string job;
  std::string partner;  // Unequal claims
};

void settle(PendingClaim& c, const JobSet& jobs) {
  const JobResult& r = jobs[c.job];
  ClaimRecord& rec = c.record;
  rec.seconds = r.seconds;
  auto fail_or_skip = [&](const JobResult& x) {
    rec.status = x.budget ? ClaimStatus::Skipped : ClaimStatus::Fail;
    rec.note = x.error;
  };
  if (!r.value) {
    fail_or_skip(r);
    return;
  }
  rec.computed = r.value;
  if (rec.kind == ClaimKind::Equal) {
    rec.status = *r.value == rec.expected ? ClaimStatus::Pass : ClaimStatus::Fail;
    return;
  }
  const JobResult& p = jobs[c.partner];
  if (!p.value) {
    fail_or_skip(p);
    return;
  }
  rec.expected = *p.value;
  rec.seconds += p.seconds;
  rec.status = *r.value != *p.value ? ClaimStatus::Pass : ClaimStatus::Fail;
}

}  // namespace

std::vector<ClaimRecord> reproduce_paper(int tier, const VerifyOptions& opts) {
  if (tier < 1 || tier > 3) throw std::invalid_argument("tier must be 1, 2 or 3");
  JobSet jobs(opts);
  std::vector<PendingClaim> claims;
  auto equal = [&](int t, std::string desc, int64_t expected, std::string job) {
    PendingClaim c;
    c.record.description = std::move(desc);
    c.record.expected = expected;
    c.record.tier = t;
    c.job = std::move(job);
    claims.push_back(std::move(c));
  };
  auto unequal = [&](int t, std::string desc, std::string job, std::string partner) {
    PendingClaim c;
    c.record.description = std::move(desc);
    c.record.kind = ClaimKind::Unequal;
    c.record.tier = t;
    c.job = std::move(job);
    c.partner = std::move(partner);
    claims.push_back(std::move(c));
  };

  const Slope zero(0, 1), inf = Slope::infinity();
  equal(1, "rank tau(0) = 16", 16, rank_of_tau(jobs, zero));
  for (auto sign : {SurgerySign::Plus, SurgerySign::Minus}) {
    Slope s(sign_value(sign), 1);
    int64_t e = tau_rank_bound(1, sign);
    equal(1, "rank " + tau_key(s) + " = " + std::to_string(e), e, rank_of_tau(jobs, s));
  }
  equal(1, "det tau(0) = 0", 0, jobs.det("det tau(0)", [zero] { return tau(zero); }));
  equal(1, "rank tau(1/0) = 1", 1, rank_of_tau(jobs, inf));

  // Branch-set pairs for +/-1/n surgery on T(2,5); n = 1 at tier 2, n = 2 at
  // tier 3 (tau(+/-1/2) themselves are cheap and belong to tier 2).
  for (int64_t n : {1, 2}) {
    for (auto sign : {SurgerySign::Plus, SurgerySign::Minus}) {
      CorrespondenceRow row = correspondence_row(5, n, sign);
      int pair_tier = n == 1 ? 2 : 3;
      if (n == 2 && tier >= 2) {
        int64_t e = tau_rank_bound(n, sign);
        equal(2, "rank " + tau_key(row.tau_slope) + " = " + std::to_string(e), e,
              rank_of_tau(jobs, row.tau_slope));
      }
      if (pair_tier > tier) continue;
      std::string tau_job = rank_of_tau(jobs, row.tau_slope);
      std::string torus_job = rank_of_torus(jobs, row.torus_p, row.torus_q);
      int64_t e = published_torus_rank(n, sign);
      equal(pair_tier, "rank " + row.torus_name() + " = " + std::to_string(e), e, torus_job);
      unequal(pair_tier,
              "rank " + row.torus_name() + " != rank " + tau_key(row.tau_slope) + " [" +
                  row.orbifold.str() + "]",
              torus_job, tau_job);
    }
  }

  jobs.run();
  std::vector<ClaimRecord> out;
  for (auto& c : claims) {
    settle(c, jobs);
    out.push_back(c.record);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ClaimRecord& a, const ClaimRecord& b) { return a.tier < b.tier; });
  return out;
}

LesReport les_bound_check(int64_t n_max, const VerifyOptions& opts) {
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  JobSet jobs(opts);
  std::string zero_job = rank_of_tau(jobs, Slope(0, 1));
  for (int64_t n = 1; n <= n_max; ++n)
    for (auto sign : {SurgerySign::Plus, SurgerySign::Minus})
      rank_of_tau(jobs, Slope(sign_value(sign), n));
  jobs.run();

  LesReport rep;
  const JobResult& z = jobs[zero_job];
  if (!z.value) throw std::runtime_error("rank of tau(0) unavailable: " + z.error);
  rep.tau0_rank = *z.value;
  rep.all_hold = true;
  for (int64_t n = 1; n <= n_max; ++n) {
    for (auto sign : {SurgerySign::Plus, SurgerySign::Minus}) {
      LesRow row;
      row.n = n;
      row.sign = sign;
      row.closed_bound = tau_rank_bound(n, sign);
      const JobResult& r = jobs[rank_of_tau(jobs, Slope(sign_value(sign), n))];
      if (!r.value) {
        row.note = r.error;
        rep.all_hold = false;
        rep.rows.push_back(row);
        continue;
      }
      row.rank = r.value;
      row.holds = *r.value <= row.closed_bound;
      if (n > 1) {
        const JobResult& prev = jobs[rank_of_tau(jobs, Slope(sign_value(sign), n - 1))];
        if (prev.value) {
          row.recursive_bound = *prev.value + rep.tau0_rank;
          row.holds = row.holds && *r.value <= *row.recursive_bound;
        }
      }
      row.equality = *r.value == row.closed_bound;
      rep.all_hold = rep.all_hold && row.holds;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::vector<GrowthPoint> growth_probe(const std::vector<int64_t>& q_list, const VerifyOptions& opts) {
  JobSet jobs(opts);
  std::vector<std::string> keys;
  std::vector<GrowthPoint> out;
  for (int64_t q : q_list) {
    GrowthPoint g;
    g.q = q;
    if (q <= 5 || std::gcd(q, int64_t{5}) != 1) {
      g.note = "T(5," + std::to_string(q) + ") is not a knot with 5 < q";
      keys.emplace_back();
    } else {
      keys.push_back(rank_of_torus(jobs, 5, q));
    }
    out.push_back(g);
  }
  jobs.run();
  std::optional<int64_t> prev;
  for (size_t i = 0; i < out.size(); ++i) {
    if (keys[i].empty()) continue;
    const JobResult& r = jobs[keys[i]];
    if (!r.value) {
      out[i].note = r.error;
      continue;
    }
    out[i].rank = r.value;
    if (prev) out[i].difference = *r.value - *prev;
    prev = r.value;
  }
  return out;
}

}  // namespace branchkh
