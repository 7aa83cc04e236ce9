#include "branchkh/kh.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <numeric>
#include <sstream>

#include "branchkh/invariants.hpp"

namespace branchkh {

std::string flavor_name(Flavor f) { return f == Flavor::Reduced ? "reduced" : "unreduced"; }

Flavor parse_flavor(const std::string& s) {
  if (s == "reduced") return Flavor::Reduced;
  if (s == "unreduced") return Flavor::Unreduced;
  throw std::invalid_argument("unknown flavor '" + s + "'");
}

int64_t GradedComplex::size() const {
  int64_t n = 0;
  for (const auto& g : gradings) n += static_cast<int64_t>(g.size());
  return n;
}

void KhRanks::add(int i, int j, int64_t rank) {
  if (rank == 0) return;
  auto& r = table[{i, j}];
  r += rank;
  total += rank;
  if (r == 0) table.erase({i, j});
}

int64_t total_rank(const KhRanks& k) {
  int64_t t = 0;
  for (const auto& [ij, r] : k.table) t += r;
  return t;
}

LaurentPoly graded_euler(const KhRanks& k) {
  LaurentPoly p;
  for (const auto& [ij, r] : k.table) {
    p += LaurentPoly::monomial(ij.second, (ij.first % 2 == 0) ? r : -r);
  }
  return p;
}

std::string ranks_to_json(const KhRanks& k, const std::string& digest, const std::string& flavor) {
  nlohmann::ordered_json j;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& [ij, r] : k.table) rows.push_back({ij.first, ij.second, r});
  j["table"] = rows;
  j["total"] = total_rank(k);
  if (!digest.empty()) j["diagram"] = digest;
  if (!flavor.empty()) j["flavor"] = flavor;
  return j.dump();
}

KhRanks ranks_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  KhRanks k;
  for (const auto& row : j.at("table")) {
    if (!row.is_array() || row.size() != 3) throw std::runtime_error("bad table row");
    int64_t r = row[2].get<int64_t>();
    if (r < 0) throw std::runtime_error("negative rank in table");
    k.add(row[0].get<int>(), row[1].get<int>(), r);
  }
  if (j.contains("total") && j["total"].get<int64_t>() != k.total) {
    throw std::runtime_error("total does not match table");
  }
  return k;
}

std::string ranks_to_text(const KhRanks& k) {
  std::ostringstream os;
  os << std::setw(5) << "i" << std::setw(6) << "j" << std::setw(8) << "rank" << "\n";
  for (const auto& [ij, r] : k.table) {
    os << std::setw(5) << ij.first << std::setw(6) << ij.second << std::setw(8) << r << "\n";
  }
  os << "total: " << total_rank(k) << "\n";
  return os.str();
}

// ---- cube of resolutions ----

namespace {

struct Resolution {
  std::vector<uint8_t> circle_of_edge;  // indexed by edge label
  std::vector<int> rep;                 // an edge on each edge-circle
  int edge_circles = 0;
  int circles = 0;  // including free loops
};

Resolution resolve(const Diagram& d, uint32_t v) {
  int n = d.crossing_count();
  int E = d.edge_count();
  std::vector<int> parent(static_cast<size_t>(E + 1));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (int k = 0; k < n; ++k) {
    const auto& t = d.crossings()[k].edges;
    if ((v >> k) & 1u) {
      unite(t[0], t[3]);
      unite(t[1], t[2]);
    } else {
      unite(t[0], t[1]);
      unite(t[2], t[3]);
    }
  }
  Resolution r;
  r.circle_of_edge.assign(static_cast<size_t>(E + 1), 0);
  std::vector<int> id(static_cast<size_t>(E + 1), -1);
  for (int e = 1; e <= E; ++e) {
    int root = find(e);
    if (id[root] < 0) {
      id[root] = r.edge_circles++;
      r.rep.push_back(e);
    }
    r.circle_of_edge[e] = static_cast<uint8_t>(id[root]);
  }
  r.circles = r.edge_circles + d.free_loops();
  return r;
}

// Removes bit b from m, shifting the higher bits down.
inline uint32_t drop_bit(uint32_t m, int b) {
  uint32_t low = m & ((1u << b) - 1u);
  return low | ((m >> (b + 1)) << b);
}

}  // namespace

GradedComplex cube_complex(const Diagram& d, Flavor flavor, int max_crossings) {
  int n = d.crossing_count();
  if (n > max_crossings) {
    throw GuardExceeded("cube oracle limited to " + std::to_string(max_crossings) +
                        " crossings, diagram has " + std::to_string(n));
  }
  if (!d.is_oriented()) throw DiagramError("cube_complex needs an oriented diagram");
  bool reduced = flavor == Flavor::Reduced;
  int bp = d.basepoint().value_or(1);
  if (reduced && n > 0 && (bp < 1 || bp > d.edge_count())) {
    throw DiagramError("basepoint edge " + std::to_string(bp) + " not in diagram");
  }
  int np = d.positive_count(), nm = d.negative_count();

  GradedComplex c;
  c.min_degree = -nm;
  if (n == 0) {
    // Free loops only; the basepoint (if reduced) sits on the first loop.
    int loops = d.free_loops();
    int free = reduced ? loops - 1 : loops;
    c.gradings.assign(1, {});
    c.differential.assign(1, {});
    for (uint32_t m = 0; m < (1u << free); ++m) {
      int q = free - 2 * std::popcount(m);
      c.gradings[0].push_back(q);
      c.differential[0].push_back({});
    }
    return c;
  }

  uint32_t V = 1u << n;
  std::vector<Resolution> res(V);
  for (uint32_t v = 0; v < V; ++v) res[v] = resolve(d, v);

  // Vertices in increasing order within each homological degree.
  std::vector<int64_t> offset(V);
  std::vector<int64_t> count_in_degree(static_cast<size_t>(n + 1), 0);
  auto gens_at = [&](uint32_t v) -> int64_t {
    int c0 = res[v].circles - (reduced ? 1 : 0);
    return int64_t{1} << c0;
  };
  for (uint32_t v = 0; v < V; ++v) {
    int k = std::popcount(v);
    offset[v] = count_in_degree[k];
    count_in_degree[k] += gens_at(v);
  }
  int64_t total = std::accumulate(count_in_degree.begin(), count_in_degree.end(), int64_t{0});
  if (total > (int64_t{1} << 30)) throw GuardExceeded("cube too large");

  c.gradings.resize(static_cast<size_t>(n + 1));
  c.differential.resize(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    c.gradings[k].resize(static_cast<size_t>(count_in_degree[k]));
    c.differential[k].resize(static_cast<size_t>(count_in_degree[k]));
  }

  auto index_of = [&](uint32_t v, uint32_t full_mask) -> int64_t {
    if (!reduced) return offset[v] + full_mask;
    return offset[v] + drop_bit(full_mask, res[v].circle_of_edge[bp]);
  };

  // Per cube edge out of v: where each untouched circle goes, and the
  // circles at the changing crossing.
  struct EdgeMap {
    uint32_t w;
    uint32_t untouched;  // mask of circles of v away from the crossing
    std::array<uint8_t, 32> image;
    int ca, cc;
    uint32_t z1, z2;  // merged circle, or the two halves of a split
  };
  std::vector<EdgeMap> edges;
  for (uint32_t v = 0; v < V; ++v) {
    const Resolution& r = res[v];
    int deg = std::popcount(v);
    int bpc = reduced ? r.circle_of_edge[bp] : -1;
    edges.clear();
    for (int k = 0; k < n && deg < n; ++k) {
      if ((v >> k) & 1u) continue;
      EdgeMap em{};
      em.w = v | (1u << k);
      const Resolution& s = res[em.w];
      const auto& t = d.crossings()[k].edges;
      em.ca = r.circle_of_edge[t[0]];
      em.cc = r.circle_of_edge[t[2]];
      for (int ci = 0; ci < r.edge_circles; ++ci) {
        em.image[ci] = s.circle_of_edge[r.rep[ci]];
      }
      for (int j = 0; j < d.free_loops(); ++j) {
        em.image[r.edge_circles + j] = static_cast<uint8_t>(s.edge_circles + j);
      }
      em.untouched = ((1u << r.circles) - 1u) & ~(1u << em.ca) & ~(1u << em.cc);
      em.z1 = 1u << s.circle_of_edge[t[0]];
      em.z2 = 1u << s.circle_of_edge[t[1]];
      edges.push_back(em);
    }
    for (uint32_t full = 0; full < (1u << r.circles); ++full) {
      if (reduced && !((full >> bpc) & 1u)) continue;
      int64_t g = index_of(v, full);
      int q = r.circles - 2 * std::popcount(full) + deg + np - 2 * nm + (reduced ? 1 : 0);
      c.gradings[deg][g] = q;
      if (deg == n) continue;
      std::vector<int>& out = c.differential[deg][g];
      out.reserve(edges.size() + 2);
      for (const EdgeMap& em : edges) {
        uint32_t base = 0;
        for (uint32_t m = full & em.untouched; m; m &= m - 1) {
          base |= 1u << em.image[std::countr_zero(m)];
        }
        bool xa = (full >> em.ca) & 1u;
        if (em.ca != em.cc) {
          bool xc = (full >> em.cc) & 1u;
          if (xa && xc) continue;
          out.push_back(static_cast<int>(index_of(em.w, base | ((xa || xc) ? em.z1 : 0u))));
        } else if (xa) {
          out.push_back(static_cast<int>(index_of(em.w, base | em.z1 | em.z2)));
        } else {
          out.push_back(static_cast<int>(index_of(em.w, base | em.z1)));
          out.push_back(static_cast<int>(index_of(em.w, base | em.z2)));
        }
      }
      // Distinct cube edges land in distinct vertices, so there are no
      // repeated targets to cancel.
      std::sort(out.begin(), out.end());
    }
  }
  return c;
}

// ---- ranks over F2 ----

namespace {

void xor_into(std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  a.swap(out);
}

void check_complex(const GradedComplex& c) {
  size_t D = c.gradings.size();
  if (c.differential.size() != D) throw std::logic_error("complex: degree count mismatch");
  for (size_t k = 0; k < D; ++k) {
    if (c.differential[k].size() != c.gradings[k].size()) {
      throw std::logic_error("complex: differential size mismatch");
    }
    for (size_t g = 0; g < c.gradings[k].size(); ++g) {
      for (int t : c.differential[k][g]) {
        if (k + 1 >= D || t < 0 || static_cast<size_t>(t) >= c.gradings[k + 1].size()) {
          throw std::logic_error("complex: differential target out of range");
        }
        if (c.gradings[k + 1][t] != c.gradings[k][g]) {
          throw std::logic_error("complex: differential does not preserve q");
        }
      }
    }
  }
  std::vector<char> parity;
  std::vector<int> touched;
  for (size_t k = 0; k + 2 < D; ++k) {
    parity.assign(c.gradings[k + 2].size(), 0);
    for (size_t g = 0; g < c.gradings[k].size(); ++g) {
      touched.clear();
      for (int t : c.differential[k][g]) {
        for (int u : c.differential[k + 1][t]) {
          if (!parity[u]) touched.push_back(u);
          parity[u] ^= 1;
        }
      }
      bool bad = false;
      for (int u : touched) {
        if (parity[u]) bad = true;
        parity[u] = 0;
      }
      if (bad) {
        throw std::logic_error("complex: d∘d != 0 at degree " +
                               std::to_string(c.min_degree + static_cast<int>(k)));
      }
    }
  }
}

// Rank of each q-block of one differential, by column reduction on the
// lowest (largest) row index. Columns flagged in `cleared` are known to
// reduce to zero (their generator is the pivot of an earlier differential)
// and are skipped. Returns the pivot rows found.
std::vector<char> block_ranks(const std::vector<std::vector<int>>& cols, const std::vector<int>& col_q,
                              size_t rows, const std::vector<char>& cleared,
                              std::map<int, int64_t>& ranks) {
  std::vector<int> pivot_owner(rows, -1);
  std::vector<char> is_pivot(rows, 0);
  std::vector<std::vector<int>> reduced(cols.size());
  for (size_t j = 0; j < cols.size(); ++j) {
    if (!cleared.empty() && cleared[j]) continue;
    if (cols[j].empty()) continue;
    std::vector<int> col = cols[j];
    while (!col.empty()) {
      int owner = pivot_owner[col.back()];
      if (owner < 0) break;
      xor_into(col, reduced[owner]);
    }
    if (!col.empty()) {
      pivot_owner[col.back()] = static_cast<int>(j);
      is_pivot[col.back()] = 1;
      reduced[j] = std::move(col);
      ++ranks[col_q[j]];
    }
  }
  return is_pivot;
}

}  // namespace

KhRanks homology_ranks(const GradedComplex& c) {
  check_complex(c);
  size_t D = c.gradings.size();
  std::vector<std::map<int, int64_t>> rk(D);
  std::vector<char> cleared;
  for (size_t k = 0; k + 1 < D; ++k) {
    cleared = block_ranks(c.differential[k], c.gradings[k], c.gradings[k + 1].size(), cleared, rk[k]);
  }
  KhRanks out;
  for (size_t k = 0; k < D; ++k) {
    std::map<int, int64_t> dim;
    for (int q : c.gradings[k]) ++dim[q];
    for (const auto& [q, n] : dim) {
      int64_t h = n;
      if (auto it = rk[k].find(q); it != rk[k].end()) h -= it->second;
      if (k > 0) {
        if (auto it = rk[k - 1].find(q); it != rk[k - 1].end()) h -= it->second;
      }
      out.add(c.min_degree + static_cast<int>(k), q, h);
    }
  }
  return out;
}

}  // namespace branchkh
