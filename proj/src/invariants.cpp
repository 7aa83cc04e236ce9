#include "branchkh/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace branchkh {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

bool diagram_connected(const Diagram& d) {
  int n = d.crossing_count();
  if (n == 0) return true;
  auto slots = d.edge_slots();
  UnionFind uf(n);
  for (int e = 1; e <= d.edge_count(); ++e) uf.unite(slots[e][0].crossing, slots[e][1].crossing);
  for (int x = 1; x < n; ++x)
    if (uf.find(x) != uf.find(0)) return false;
  return true;
}

void require_valid(const Diagram& d) {
  auto r = validate(d);
  if (!r.ok) throw DiagramError("invalid diagram: " + r.problems.front());
}

// Fraction-free Gaussian elimination.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
  size_t n = m.size();
  if (n == 0) return 1;
  BigInt sign = 1, prev = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      size_t swap = k + 1;
      while (swap < n && m[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(m[k], m[swap]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

}  // namespace

GoeritzMatrix goeritz_matrix(const Diagram& d, int shading) {
  require_valid(d);
  int n = d.crossing_count();
  if (n == 0 || !diagram_connected(d)) {
    throw DiagramError("Goeritz matrix needs a connected diagram with crossings");
  }
  auto slots = d.edge_slots();
  // Corner (x,k) lies between slots k and k+1 (counterclockwise).
  auto corner = [](int x, int k) { return 4 * x + ((k % 4) + 4) % 4; };
  UnionFind uf(4 * n);
  for (int e = 1; e <= d.edge_count(); ++e) {
    auto [s, t] = slots[e];
    uf.unite(corner(s.crossing, s.position), corner(t.crossing, t.position - 1));
    uf.unite(corner(t.crossing, t.position), corner(s.crossing, s.position - 1));
  }
  std::map<int, int> face_of_root;
  std::vector<int> face(static_cast<size_t>(4 * n));
  for (int c = 0; c < 4 * n; ++c) {
    auto [it, _] = face_of_root.emplace(uf.find(c), static_cast<int>(face_of_root.size()));
    face[c] = it->second;
  }
  int faces = static_cast<int>(face_of_root.size());
  if (faces != n + 2) {
    throw DiagramError("PD code is not planar: " + std::to_string(faces) + " faces for " +
                       std::to_string(n) + " crossings");
  }
  // Two-colour the faces: corners on either side of a slot differ.
  std::vector<std::vector<int>> adj(static_cast<size_t>(faces));
  for (int x = 0; x < n; ++x) {
    for (int k = 0; k < 4; ++k) {
      int a = face[corner(x, k)], b = face[corner(x, k - 1)];
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
  }
  std::vector<int> colour(static_cast<size_t>(faces), -1);
  colour[0] = 0;
  std::vector<int> queue{0};
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int f = queue[qi];
    for (int g : adj[f]) {
      if (colour[g] < 0) {
        colour[g] = 1 - colour[f];
        queue.push_back(g);
      } else if (colour[g] == colour[f]) {
        throw DiagramError("diagram faces are not two-colourable (non-planar PD?)");
      }
    }
  }
  // Pick the class so that shading 0 is the colour of corner (x0, 0) where
  // edge 1 sits at slot (x0, k0); normalizes independent of face numbering.
  auto [s1, t1] = slots[1];
  int ref = colour[face[corner(s1.crossing, s1.position)]];
  int want = shading == 0 ? ref : 1 - ref;
  std::vector<int> index(static_cast<size_t>(faces), -1);
  int m = 0;
  for (int f = 0; f < faces; ++f)
    if (colour[f] == want) index[f] = m++;
  GoeritzMatrix g;
  g.shading = shading;
  g.entries.assign(static_cast<size_t>(m), std::vector<int64_t>(static_cast<size_t>(m), 0));
  for (int x = 0; x < n; ++x) {
    // Shaded corners are {0,2} or {1,3}. The 0-smoothing (a-b, c-d) merges
    // corners 1 and 3.
    bool odd = colour[face[corner(x, 1)]] == want;
    int f1 = face[corner(x, odd ? 1 : 0)], f2 = face[corner(x, odd ? 3 : 2)];
    if (f1 == f2) continue;
    int64_t eta = odd ? 1 : -1;
    int i = index[f1], j = index[f2];
    g.entries[i][j] -= eta;
    g.entries[j][i] -= eta;
    g.entries[i][i] += eta;
    g.entries[j][j] += eta;
  }
  // Pivot: the shaded face beside edge 1.
  int fa = face[corner(s1.crossing, s1.position)];
  int fb = face[corner(s1.crossing, s1.position - 1)];
  g.pivot = index[colour[fa] == want ? fa : fb];
  return g;
}

BigInt determinant(const Diagram& d, int shading) {
  require_valid(d);
  if (d.crossing_count() == 0) return d.free_loops() == 1 ? 1 : 0;
  if (d.free_loops() > 0 || !diagram_connected(d)) return 0;
  GoeritzMatrix g = goeritz_matrix(d, shading);
  size_t m = g.entries.size();
  std::vector<std::vector<BigInt>> reduced;
  reduced.reserve(m);
  for (size_t i = 0; i < m; ++i) {
    if (static_cast<int>(i) == g.pivot) continue;
    std::vector<BigInt> row;
    row.reserve(m);
    for (size_t j = 0; j < m; ++j) {
      if (static_cast<int>(j) == g.pivot) continue;
      row.emplace_back(g.entries[i][j]);
    }
    reduced.push_back(std::move(row));
  }
  BigInt det = bareiss_determinant(std::move(reduced));
  return det < 0 ? BigInt(-det) : det;
}

std::vector<int> greedy_crossing_order(const Diagram& d) {
  int n = d.crossing_count();
  std::vector<int> order;
  if (n == 0) return order;
  const auto& cs = d.crossings();
  auto slots = d.edge_slots();
  std::vector<char> done(static_cast<size_t>(n), 0);
  auto neighbour = [&](int x, int k) {
    int e = cs[x].edges[k];
    const auto& occ = slots[e];
    return (occ[0].crossing == x && occ[0].position == k) ? occ[1].crossing : occ[0].crossing;
  };
  int last = 0;
  order.push_back(0);
  done[0] = 1;
  while (static_cast<int>(order.size()) < n) {
    int best = -1, best_shared = -1, best_local = -1;
    for (int x = 0; x < n; ++x) {
      if (done[x]) continue;
      int shared = 0, local = 0;
      for (int k = 0; k < 4; ++k) {
        int y = neighbour(x, k);
        if (y != x && done[y]) ++shared;
        if (y == last) ++local;
      }
      if (shared > best_shared || (shared == best_shared && local > best_local)) {
        best = x;
        best_shared = shared;
        best_local = local;
      }
    }
    done[best] = 1;
    order.push_back(best);
    last = best;
  }
  return order;
}

namespace {

// Boundary connectivity of a partially resolved diagram: sorted pairs of open
// edges joined by an arc, plus whether a closed loop has been seen (the first
// loop is normalized to 1).
struct BracketState {
  std::vector<std::pair<int, int>> arcs;
  bool seen_loop = false;
  auto operator<=>(const BracketState&) const = default;
};

}  // namespace

LaurentPoly kauffman_bracket(const Diagram& d, int max_crossings,
                             const std::optional<std::vector<int>>& order) {
  require_valid(d);
  int n = d.crossing_count();
  if (n > max_crossings) {
    throw GuardExceeded("Kauffman bracket guard: " + std::to_string(n) + " crossings > " +
                        std::to_string(max_crossings));
  }
  const LaurentPoly delta = LaurentPoly::monomial(2, -1) + LaurentPoly::monomial(-2, -1);
  auto seq = order ? *order : greedy_crossing_order(d);
  if (static_cast<int>(seq.size()) != n) throw std::invalid_argument("bad crossing order");
  const auto& cs = d.crossings();
  std::map<BracketState, LaurentPoly> states;
  states[BracketState{}] = LaurentPoly(1);
  for (int x : seq) {
    const auto& t = cs[x].edges;
    std::map<BracketState, LaurentPoly> next;
    for (const auto& [st, poly] : states) {
      for (int smoothing = 0; smoothing < 2; ++smoothing) {
        std::array<std::pair<int, int>, 2> arcs =
            smoothing == 0 ? std::array<std::pair<int, int>, 2>{{{t[0], t[1]}, {t[2], t[3]}}}
                           : std::array<std::pair<int, int>, 2>{{{t[0], t[3]}, {t[1], t[2]}}};
        // Graph on edge labels: old arcs between open edges, new arcs from
        // the smoothing. Degree-1 nodes are open after this step.
        std::map<int, std::vector<int>> adj;
        for (auto [a, b] : st.arcs) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
        for (auto [a, b] : arcs) {
          adj[a].push_back(b);
          adj[b].push_back(a);
        }
        BracketState ns;
        ns.seen_loop = st.seen_loop;
        int loops = 0;
        std::vector<int> nodes;
        for (const auto& [v, _] : adj) nodes.push_back(v);
        std::map<int, int> id;
        for (int i = 0; i < static_cast<int>(nodes.size()); ++i) id[nodes[i]] = i;
        // Half-edge list.
        std::vector<std::pair<int, int>> links;
        for (auto [a, b] : st.arcs) links.push_back({id[a], id[b]});
        for (auto [a, b] : arcs) links.push_back({id[a], id[b]});
        std::vector<std::vector<int>> inc(nodes.size());
        for (int l = 0; l < static_cast<int>(links.size()); ++l) {
          inc[links[l].first].push_back(l);
          inc[links[l].second].push_back(l);
        }
        std::vector<char> link_used(links.size(), 0);
        auto follow = [&](int v) {
          int cur = v;
          while (true) {
            int l = -1;
            for (int cand : inc[cur])
              if (!link_used[cand]) {
                l = cand;
                break;
              }
            if (l < 0) return cur;
            link_used[l] = 1;
            cur = links[l].first == cur ? links[l].second : links[l].first;
          }
        };
        for (int v = 0; v < static_cast<int>(nodes.size()); ++v) {
          if (inc[v].size() == 1 && !link_used[inc[v][0]]) {
            int w = follow(v);
            int a = nodes[v], b = nodes[w];
            ns.arcs.push_back({std::min(a, b), std::max(a, b)});
          }
        }
        for (int l = 0; l < static_cast<int>(links.size()); ++l) {
          if (!link_used[l]) {
            follow(links[l].first);
            ++loops;
          }
        }
        std::sort(ns.arcs.begin(), ns.arcs.end());
        LaurentPoly term = poly.shifted(smoothing == 0 ? 1 : -1);
        for (int i = 0; i < loops; ++i) {
          if (!ns.seen_loop) {
            ns.seen_loop = true;
          } else {
            term *= delta;
          }
        }
        next[ns] += term;
      }
    }
    states = std::move(next);
  }
  LaurentPoly total;
  for (const auto& [st, poly] : states) {
    LaurentPoly p = poly;
    int loops = d.free_loops();
    bool seen = st.seen_loop;
    for (int i = 0; i < loops; ++i) {
      if (!seen) {
        seen = true;
      } else {
        p *= delta;
      }
    }
    total += p;
  }
  return total;
}

LaurentPoly jones_polynomial(const Diagram& d, int max_crossings) {
  LaurentPoly bracket = kauffman_bracket(d, max_crossings);
  if (!d.crossings().empty() && !d.is_oriented()) {
    throw DiagramError("Jones polynomial needs an oriented diagram");
  }
  int n = d.crossing_count(), np = d.positive_count(), nm = d.negative_count();
  // A^{-n}<D> has only even exponents; A^{2m} -> (-q)^{-m}.
  LaurentPoly q_poly;
  for (const auto& [e, c] : bracket.terms()) {
    int k = e - n;
    if (k % 2 != 0) throw std::logic_error("bracket exponent parity violated");
    int m = k / 2;
    int64_t sign = (m % 2 == 0) ? 1 : -1;
    q_poly += LaurentPoly::monomial(-m, sign * c);
  }
  int64_t global = (nm % 2 == 0) ? 1 : -1;
  LaurentPoly out;
  for (const auto& [e, c] : q_poly.terms()) out += LaurentPoly::monomial(e + np - 2 * nm, global * c);
  return out;
}

std::pair<int64_t, int64_t> evaluate_at_i(const LaurentPoly& p) {
  int64_t re = 0, im = 0;
  for (const auto& [e, c] : p.terms()) {
    switch (((e % 4) + 4) % 4) {
      case 0: re += c; break;
      case 1: im += c; break;
      case 2: re -= c; break;
      case 3: im -= c; break;
    }
  }
  return {re, im};
}

int64_t jones_determinant(const Diagram& d, int max_crossings) {
  auto [re, im] = evaluate_at_i(jones_polynomial(d, max_crossings));
  int64_t sq = re * re + im * im;
  auto r = static_cast<int64_t>(std::llround(std::sqrt(static_cast<double>(sq))));
  while (r * r > sq) --r;
  while ((r + 1) * (r + 1) <= sq) ++r;
  if (r * r != sq) throw std::logic_error("|J(i)|^2 is not a perfect square");
  return r;
}

std::string LaurentPoly::str(const std::string& var) const {
  if (terms_.empty()) return "0";
  std::string s;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    int64_t mag = c < 0 ? -c : c;
    if (first) {
      if (c < 0) s += "-";
    } else {
      s += c < 0 ? " - " : " + ";
    }
    first = false;
    if (e == 0) {
      s += std::to_string(mag);
      continue;
    }
    if (mag != 1) s += std::to_string(mag) + "*";
    s += var;
    if (e != 1) s += "^" + std::to_string(e);
  }
  return s;
}

}  // namespace branchkh
