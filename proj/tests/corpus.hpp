#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "branchkh/diagram.hpp"
#include "branchkh/generators.hpp"
#include "branchkh/tangle.hpp"

namespace corpus {

using branchkh::Diagram;

struct Named {
  std::string name;
  Diagram d;
};

// Random edge relabelling and crossing order; the knot type, orientation and
// tuple rotation are unchanged.
inline Diagram scramble(const Diagram& d, std::mt19937& rng) {
  std::vector<int> perm(static_cast<size_t>(d.edge_count() + 1));
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin() + 1, perm.end(), rng);
  std::vector<std::array<int, 4>> pd;
  for (const auto& c : d.crossings()) {
    std::array<int, 4> t = c.edges;
    for (int& e : t) e = perm[e];
    pd.push_back(t);
  }
  std::shuffle(pd.begin(), pd.end(), rng);
  std::optional<int> bp;
  if (d.basepoint()) bp = perm[*d.basepoint()];
  return Diagram(pd, bp, d.free_loops(), d.name());
}

// Closures of random braid words on 2-4 strands with 1..max_crossings
// letters, relabelled at random. Deterministic for a given seed.
inline std::vector<Named> random_diagrams(int count, int max_crossings, unsigned seed = 20240611) {
  std::mt19937 rng(seed);
  std::vector<Named> out;
  while (static_cast<int>(out.size()) < count) {
    int strands = 2 + static_cast<int>(rng() % 3);
    int len = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_crossings));
    std::vector<int> word;
    std::string name = "braid" + std::to_string(strands) + "[";
    for (int i = 0; i < len; ++i) {
      int g = 1 + static_cast<int>(rng() % static_cast<unsigned>(strands - 1));
      int letter = (rng() % 2) ? g : -g;
      word.push_back(letter);
      name += (i ? "," : "") + std::to_string(letter);
    }
    name += "]";
    Diagram d = branchkh::braid_closure(strands, word);
    if (d.crossing_count() == 0) continue;
    out.push_back({name, scramble(d, rng)});
  }
  return out;
}

// rot(R(-1/2) + R(2/5)) without the framing twists.
inline branchkh::TangleTemplate cinqfoil_core() {
  using namespace branchkh;
  return tangle::rotate(tangle::sum(rational_tangle(Slope(-1, 2)), rational_tangle(Slope(2, 5))));
}

// tau(n) with the n half-twists merged into the template's framing twists,
// i.e. the numerator closure of core + [n - 10].
inline Diagram tau_integer_reduced(int n) {
  using namespace branchkh;
  return tangle::numerator(tangle::twist_horizontal(cinqfoil_core(), n - 10));
}

// Knot diagrams with at most 12 crossings plus tau(0) (16 crossings) and the
// 15-crossing diagram of tau(1).
inline std::vector<Named> oracle_corpus() {
  using namespace branchkh;
  std::vector<Named> out;
  for (int q = 3; q <= 11; q += 2) out.push_back({"T(2," + std::to_string(q) + ")", torus_knot(2, q)});
  out.push_back({"tau(0)", tau(Slope(0, 1))});
  out.push_back({"tau(1) reduced diagram", tau_integer_reduced(1)});
  for (auto& r : random_diagrams(50, 12)) out.push_back(r);
  return out;
}

}  // namespace corpus
