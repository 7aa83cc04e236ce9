#include "branchkh/generators.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace branchkh {

Diagram braid_closure(int strands, const std::vector<int>& word) {
  if (strands < 1) throw std::invalid_argument("braid needs at least one strand");
  std::vector<int> cur(static_cast<size_t>(strands));
  std::iota(cur.begin(), cur.end(), 1);
  int next = strands + 1;
  std::vector<std::array<int, 4>> pd;
  pd.reserve(word.size());
  for (int letter : word) {
    int i = letter > 0 ? letter : -letter;
    if (i < 1 || i >= strands) throw std::invalid_argument("braid letter out of range");
    int in_left = cur[i - 1], in_right = cur[i];
    int out_left = next++, out_right = next++;
    if (letter > 0) {
      // over: bottom-left -> top-right; under: bottom-right -> top-left
      pd.push_back({in_right, out_right, out_left, in_left});
    } else {
      // under: bottom-left -> top-right; over: bottom-right -> top-left
      pd.push_back({in_left, in_right, out_right, out_left});
    }
    cur[i - 1] = out_left;
    cur[i] = out_right;
  }
  // Close: the top edge at each position is the bottom edge at that position.
  int loops = 0;
  std::vector<int> rename(static_cast<size_t>(next), 0);
  std::iota(rename.begin(), rename.end(), 0);
  for (int k = 0; k < strands; ++k) {
    if (cur[k] == k + 1) {
      ++loops;
    } else {
      rename[cur[k]] = k + 1;
    }
  }
  for (auto& t : pd)
    for (int& e : t) e = rename[e];
  if (pd.empty()) return Diagram({}, std::nullopt, loops);
  // Labels may now have gaps; compact them.
  std::vector<int> used(static_cast<size_t>(next), 0);
  for (const auto& t : pd)
    for (int e : t) used[e] = 1;
  std::vector<int> compact(static_cast<size_t>(next), 0);
  int id = 1;
  for (int e = 1; e < next; ++e)
    if (used[e]) compact[e] = id++;
  for (auto& t : pd)
    for (int& e : t) e = compact[e];
  return Diagram::from_unoriented(pd, loops);
}

Diagram torus_link(int p, int q) {
  if (p < 1 || q < 0) throw std::invalid_argument("torus link needs p >= 1, q >= 0");
  std::vector<int> word;
  word.reserve(static_cast<size_t>(q) * static_cast<size_t>(p - 1));
  for (int r = 0; r < q; ++r)
    for (int i = 1; i < p; ++i) word.push_back(i);
  return braid_closure(p, word).with_name("T(" + std::to_string(p) + "," +
                                          std::to_string(q) + ")");
}

Diagram torus_knot(int p, int q) {
  if (p < 2 || q <= p) throw std::invalid_argument("torus knot needs 2 <= p < q");
  if (std::gcd(p, q) != 1) {
    throw std::invalid_argument("torus knot needs gcd(p,q) = 1, got (" +
                                std::to_string(p) + "," + std::to_string(q) + ")");
  }
  return torus_link(p, q);
}

const TangleTemplate& cinqfoil_template() {
  // rot(R(-1/2) + R(2/5)) followed by ten negative horizontal half-twists.
  // The two rational summands carry the cone points of orders 2 and 5; the
  // twists fix the framing so that the numerator closure has determinant 0.
  static const TangleTemplate t = [] {
    TangleTemplate tt;
    tt.interior = {
        {3, 4, 2, 1},     {5, 6, 4, 3},     {2, 7, 9, 8},     {8, 9, 11, 10},
        {7, 12, 13, 11},  {12, 6, 14, 13},  {5, 16, 15, 14},  {16, 18, 17, 15},
        {18, 20, 19, 17}, {20, 22, 21, 19}, {22, 24, 23, 21}, {24, 26, 25, 23},
        {26, 28, 27, 25}, {28, 30, 29, 27}, {30, 32, 31, 29}, {32, 34, 33, 31},
    };
    tt.ends = {10, 33, 1, 34};
    tt.name = "tau";
    return tt;
  }();
  return t;
}

Diagram attach_rational(const TangleTemplate& t, const Slope& s) {
  TangleTemplate whole = tangle::sum(t, rational_tangle(s));
  std::string base = t.name.empty() ? "tau" : t.name;
  whole.name = base + "(" + s.str() + ")";
  return tangle::numerator(whole);
}

Diagram tau(const Slope& s) { return attach_rational(cinqfoil_template(), s); }

Diagram seifert_branch_set(int q, int n, SurgerySign sign) {
  if (q <= 1 || q % 2 == 0) throw std::invalid_argument("seifert branch set needs odd q > 1");
  if (n <= 0) throw std::invalid_argument("seifert branch set needs n > 0");
  int second = 2 * q * n + (sign == SurgerySign::Plus ? -1 : 1);
  return torus_knot(q, second);
}

}  // namespace branchkh
