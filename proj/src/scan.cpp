// Scanning computation of Khovanov homology over F2 in Bar-Natan's
// cobordism category with h = t = 0.
//
// Objects are crossingless matchings on the boundary of the processed part of
// the diagram, with homological and quantum shifts. Boundary points are
// crossing slots (4 * crossing + position). A morphism between matchings A
// and B is an F2 sum of basis cobordisms: every circle of A ∪ B bounds its
// own disk, and a bit of the mask says that disk carries a dot. Gluing and
// composing produce connected surfaces that are put back into this basis by
// neck cutting:
//   genus > 0 or two dots      -> 0
//   one dot                    -> every boundary circle dotted
//   no dot, k boundary circles -> sum of the k ways of dotting all but one
//
// The basepoint edge is cut open: its two slots are never glued, so the
// final object is an arc. Reduced homology counts the surviving arcs (every
// remaining map is dotted, and a dot acts by zero on the marked circle);
// unreduced closes the arc and cancels once more.

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <queue>
#include <string>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

#include "branchkh/invariants.hpp"
#include "branchkh/kh.hpp"

namespace branchkh {

namespace {

using Mask = uint64_t;
using Morph = std::vector<Mask>;  // sorted

constexpr int kSrcLoopShift = 32;
constexpr int kTgtLoopShift = 48;
constexpr Mask kCircleBits = 0xFFFFFFFFull;

void toggle(Morph& m, Mask x) {
  auto it = std::lower_bound(m.begin(), m.end(), x);
  if (it != m.end() && *it == x) {
    m.erase(it);
  } else {
    m.insert(it, x);
  }
}

using Matching = std::vector<uint8_t>;  // partner by local point index

class MatchTable {
 public:
  int intern(const Matching& m) {
    std::string key(m.begin(), m.end());
    auto [it, inserted] = ids_.emplace(std::move(key), static_cast<int>(list_.size()));
    if (inserted) list_.push_back(m);
    return it->second;
  }
  const Matching& operator[](int id) const { return list_[id]; }
  int size() const { return static_cast<int>(list_.size()); }

 private:
  std::vector<Matching> list_;
  std::unordered_map<std::string, int> ids_;
};

struct Circles {
  std::vector<uint8_t> of_point;
  int count = 0;
};

Circles trace_circles(const Matching& a, const Matching& b) {
  Circles c;
  size_t w = a.size();
  c.of_point.assign(w, 0xFF);
  for (size_t p = 0; p < w; ++p) {
    if (c.of_point[p] != 0xFF) continue;
    uint8_t id = static_cast<uint8_t>(c.count++);
    size_t q = p;
    do {
      c.of_point[q] = id;
      size_t r = a[q];
      c.of_point[r] = id;
      q = b[r];
    } while (q != p);
  }
  return c;
}

// One connected piece of a glued surface.
struct Component {
  Mask first = 0;   // disks from the first morphism
  Mask second = 0;  // disks from the second morphism (composition only)
  Mask out = 0;     // boundary circles of the result
  int k = 0;
  bool dead = false;
};

// Expands a glued surface into the basis; results are XORed into `acc`.
void expand(const std::vector<Component>& comps, Mask m1, Mask m2, Morph& acc) {
  Morph terms{0};
  for (const auto& c : comps) {
    int dots = std::popcount(m1 & c.first) + std::popcount(m2 & c.second);
    if (dots >= 2 || c.dead) return;
    if (dots == 1) {
      for (auto& t : terms) t |= c.out;
    } else if (c.k == 0) {
      return;
    } else if (c.k >= 2) {
      Morph next;
      next.reserve(terms.size() * static_cast<size_t>(c.k));
      for (Mask t : terms) {
        for (Mask rest = c.out; rest; rest &= rest - 1) {
          Mask b = rest & (~rest + 1);
          next.push_back(t | (c.out & ~b));
        }
      }
      terms.swap(next);
    }
  }
  for (Mask t : terms) toggle(acc, t);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Builds components from disks, glued intervals, and result circles.
// `glued` lists disk pairs; `circle_disk[i]` is the disk owning result circle
// i, whose bit is `circle_bit[i]`.
std::vector<Component> build_components(int first_disks, int second_disks,
                                        const std::vector<std::pair<int, int>>& glued,
                                        const std::vector<int>& circle_disk,
                                        const std::vector<Mask>& circle_bit) {
  int disks = first_disks + second_disks;
  UnionFind uf(disks);
  for (auto [a, b] : glued) uf.unite(a, b);
  std::vector<int> slot(static_cast<size_t>(disks), -1);
  std::vector<Component> comps;
  std::vector<int> disk_count, glue_count;
  auto comp_of = [&](int disk) {
    int r = uf.find(disk);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
      disk_count.push_back(0);
      glue_count.push_back(0);
    }
    return slot[r];
  };
  for (int i = 0; i < disks; ++i) {
    int c = comp_of(i);
    ++disk_count[c];
    if (i < first_disks) {
      comps[c].first |= Mask{1} << i;
    } else {
      comps[c].second |= Mask{1} << (i - first_disks);
    }
  }
  for (auto [a, b] : glued) ++glue_count[comp_of(a)];
  for (size_t i = 0; i < circle_disk.size(); ++i) {
    int c = comp_of(circle_disk[i]);
    comps[c].out |= circle_bit[i];
    ++comps[c].k;
  }
  for (size_t c = 0; c < comps.size(); ++c) {
    int chi = disk_count[c] - glue_count[c];
    int twice_genus = 2 - comps[c].k - chi;
    if (twice_genus < 0 || twice_genus % 2 != 0) {
      throw std::logic_error("scan: inconsistent surface (chi " + std::to_string(chi) +
                             ", " + std::to_string(comps[c].k) + " boundary circles)");
    }
    comps[c].dead = twice_genus > 0;
  }
  return comps;
}

// Simplified complex over one boundary.
struct Complex {
  struct Obj {
    int match;
    int h;
    int q;
  };
  std::vector<Obj> objs;
  std::vector<char> alive;
  std::vector<std::unordered_map<int, Morph>> out;
  std::vector<std::unordered_set<int>> in;

  int add(int match, int h, int q) {
    objs.push_back({match, h, q});
    alive.push_back(1);
    out.emplace_back();
    in.emplace_back();
    return static_cast<int>(objs.size()) - 1;
  }
  // XOR `m` into the entry src -> tgt.
  void add_entry(int src, int tgt, const Morph& m) {
    if (m.empty()) return;
    auto [it, inserted] = out[src].try_emplace(tgt);
    if (inserted) {
      it->second = m;
      in[tgt].insert(src);
      return;
    }
    Morph merged;
    merged.reserve(it->second.size() + m.size());
    std::set_symmetric_difference(it->second.begin(), it->second.end(), m.begin(), m.end(),
                                  std::back_inserter(merged));
    if (merged.empty()) {
      out[src].erase(it);
      in[tgt].erase(src);
    } else {
      it->second.swap(merged);
    }
  }
  int64_t live_count() const {
    return std::count(alive.begin(), alive.end(), char{1});
  }
};

class Scanner {
 public:
  Scanner(const Diagram& d, Flavor flavor, const ScanOptions& opts, ScanStats* stats)
      : d_(d), flavor_(flavor), opts_(opts), stats_(stats) {}

  KhRanks run();

 private:
  // Gluing of one old matching with the local piece.
  struct Glue {
    int match = -1;
    int loops = 0;
    std::vector<int> arc_rep;   // per new local point
    std::vector<int> loop_rep;  // per loop
  };
  // Tensor of a morphism with the identity (or the saddle) of the piece.
  struct TensorRule {
    int src_match, tgt_match;
    int src_loops, tgt_loops;
    int circles;  // circles of src ∪ tgt, for the degree check
    std::vector<Component> comps;
  };

  void attach(int crossing);  // crossing < 0 closes the basepoint arc
  const Glue& glue(int match, int smoothing);
  const TensorRule& tensor_rule(int m1, int m2, int from, int to);
  const Circles& circles(const MatchTable& table, std::unordered_map<uint64_t, Circles>& cache,
                         int a, int b);
  const std::vector<Component>& compose_rule(int a, int b, int c);
  Morph compose(int a, int b, int c, const Morph& f, const Morph& g);
  void eliminate();
  void check_dd();
  int rep_disk(int rep, const Circles& cf, int from, int to) const;

  const Diagram& d_;
  Flavor flavor_;
  ScanOptions opts_;
  ScanStats* stats_;

  std::vector<std::array<Slot, 2>> edge_slots_;
  int bp_edge_ = 1;
  std::vector<int> bp_slots_;

  // Current state.
  std::vector<int> points_;  // sorted global slots
  MatchTable matches_;
  Complex cx_;
  std::unordered_map<uint64_t, Circles> circle_cache_;
  std::unordered_map<uint64_t, std::vector<Component>> compose_cache_;

  // Step scratch.
  int step_crossing_ = -1;
  int old_width_ = 0;
  std::vector<int> ident_;                    // combined index -> partner or -1
  std::vector<std::pair<int, int>> glued_;    // identified combined pairs
  std::vector<int> new_index_;                // combined index -> new local or -1
  std::vector<int> new_points_;
  MatchTable new_matches_;
  std::unordered_map<uint64_t, Glue> glue_cache_;
  std::unordered_map<uint64_t, TensorRule> rule_cache_;
  std::unordered_map<uint64_t, Circles> new_circle_cache_;
};

int slot_id(int crossing, int position) { return 4 * crossing + position; }

// Arcs of the two smoothings on slot positions.
constexpr std::array<std::array<int, 4>, 2> kSmoothing = {{{1, 0, 3, 2}, {3, 2, 1, 0}}};

int strip_of(int smoothing, int pos) {
  if (smoothing == 0) return pos < 2 ? 0 : 1;
  return (pos == 0 || pos == 3) ? 0 : 1;
}

const Circles& Scanner::circles(const MatchTable& table,
                                std::unordered_map<uint64_t, Circles>& cache, int a, int b) {
  uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  return cache.emplace(key, trace_circles(table[a], table[b])).first->second;
}

const Scanner::Glue& Scanner::glue(int match, int smoothing) {
  uint64_t key = static_cast<uint64_t>(match) * 2 + static_cast<uint64_t>(smoothing);
  auto it = glue_cache_.find(key);
  if (it != glue_cache_.end()) return it->second;

  const Matching& m = matches_[match];
  int w = old_width_;
  int total = w + (step_crossing_ >= 0 ? 4 : 0);
  std::vector<int> arc(static_cast<size_t>(total));
  for (int p = 0; p < w; ++p) arc[p] = m[p];
  if (step_crossing_ >= 0) {
    for (int pos = 0; pos < 4; ++pos) arc[w + pos] = w + kSmoothing[smoothing][pos];
  }
  auto rep_of = [&](int x) { return x < w ? x : -1 - (x - w); };

  Glue g;
  std::vector<char> seen(static_cast<size_t>(total), 0);
  Matching nm(new_points_.size());
  g.arc_rep.assign(new_points_.size(), 0);
  for (int x = 0; x < total; ++x) {
    if (new_index_[x] < 0 || seen[x]) continue;
    int rep = rep_of(x);
    int cur = x;
    int y;
    while (true) {
      seen[cur] = 1;
      y = arc[cur];
      seen[y] = 1;
      if (ident_[y] < 0) break;
      cur = ident_[y];
    }
    int a = new_index_[x], b = new_index_[y];
    nm[a] = static_cast<uint8_t>(b);
    nm[b] = static_cast<uint8_t>(a);
    g.arc_rep[a] = rep;
    g.arc_rep[b] = rep;
  }
  for (int x = 0; x < total; ++x) {
    if (seen[x]) continue;
    g.loop_rep.push_back(rep_of(x));
    int cur = x;
    while (!seen[cur]) {
      seen[cur] = 1;
      int y = arc[cur];
      seen[y] = 1;
      cur = ident_[y];
    }
  }
  g.loops = static_cast<int>(g.loop_rep.size());
  if (g.loops > 16) throw std::logic_error("scan: too many loops in one step");
  g.match = new_matches_.intern(nm);
  return glue_cache_.emplace(key, std::move(g)).first->second;
}

int Scanner::rep_disk(int rep, const Circles& cf, int from, int to) const {
  if (rep >= 0) return cf.of_point[rep];
  int pos = -1 - rep;
  return cf.count + (from == to ? strip_of(from, pos) : 0);
}

const Scanner::TensorRule& Scanner::tensor_rule(int m1, int m2, int from, int to) {
  uint64_t n = static_cast<uint64_t>(matches_.size());
  uint64_t key = ((static_cast<uint64_t>(m1) * n + static_cast<uint64_t>(m2)) * 4) +
                 static_cast<uint64_t>(from * 2 + to);
  auto it = rule_cache_.find(key);
  if (it != rule_cache_.end()) return it->second;

  const Circles& cf = circles(matches_, circle_cache_, m1, m2);
  const Glue& g1 = glue(m1, from);
  const Glue& g2 = glue(m2, to);
  int piece_disks = step_crossing_ < 0 ? 0 : (from == to ? 2 : 1);

  // Vertical segments over identified points.
  std::vector<std::pair<int, int>> glued;
  auto vertical_disk = [&](int x) {
    return x < old_width_ ? rep_disk(x, cf, from, to) : rep_disk(-1 - (x - old_width_), cf, from, to);
  };
  for (auto [x, y] : glued_) glued.emplace_back(vertical_disk(x), vertical_disk(y));

  TensorRule r;
  r.src_match = g1.match;
  r.tgt_match = g2.match;
  r.src_loops = g1.loops;
  r.tgt_loops = g2.loops;
  const Circles& cn = circles(new_matches_, new_circle_cache_, g1.match, g2.match);
  r.circles = cn.count;
  if (cn.count > 32) throw std::logic_error("scan: boundary too wide");

  std::vector<int> circle_disk(static_cast<size_t>(cn.count), -1);
  std::vector<Mask> circle_bit;
  for (size_t p = 0; p < cn.of_point.size(); ++p) {
    int c = cn.of_point[p];
    if (circle_disk[c] < 0) circle_disk[c] = rep_disk(g1.arc_rep[p], cf, from, to);
  }
  for (int c = 0; c < cn.count; ++c) circle_bit.push_back(Mask{1} << c);
  for (int j = 0; j < g1.loops; ++j) {
    circle_disk.push_back(rep_disk(g1.loop_rep[j], cf, from, to));
    circle_bit.push_back(Mask{1} << (kSrcLoopShift + j));
  }
  for (int j = 0; j < g2.loops; ++j) {
    circle_disk.push_back(rep_disk(g2.loop_rep[j], cf, from, to));
    circle_bit.push_back(Mask{1} << (kTgtLoopShift + j));
  }
  r.comps = build_components(cf.count + piece_disks, 0, glued, circle_disk, circle_bit);
  return rule_cache_.emplace(key, std::move(r)).first->second;
}

const std::vector<Component>& Scanner::compose_rule(int a, int b, int c) {
  uint64_t n = static_cast<uint64_t>(matches_.size());
  uint64_t key = (static_cast<uint64_t>(a) * n + static_cast<uint64_t>(b)) * n +
                 static_cast<uint64_t>(c);
  auto it = compose_cache_.find(key);
  if (it != compose_cache_.end()) return it->second;
  const Circles& ab = circles(matches_, circle_cache_, a, b);
  const Circles& bc = circles(matches_, circle_cache_, b, c);
  const Circles& ac = circles(matches_, circle_cache_, a, c);
  const Matching& mb = matches_[b];
  std::vector<std::pair<int, int>> glued;
  for (size_t p = 0; p < mb.size(); ++p) {
    if (static_cast<size_t>(mb[p]) < p) continue;
    glued.emplace_back(ab.of_point[p], ab.count + bc.of_point[p]);
  }
  std::vector<int> circle_disk(static_cast<size_t>(ac.count), -1);
  std::vector<Mask> circle_bit;
  for (size_t p = 0; p < ac.of_point.size(); ++p) {
    int k = ac.of_point[p];
    if (circle_disk[k] < 0) circle_disk[k] = ab.of_point[p];
  }
  for (int k = 0; k < ac.count; ++k) circle_bit.push_back(Mask{1} << k);
  auto comps = build_components(ab.count, bc.count, glued, circle_disk, circle_bit);
  return compose_cache_.emplace(key, std::move(comps)).first->second;
}

Morph Scanner::compose(int a, int b, int c, const Morph& f, const Morph& g) {
  const auto& comps = compose_rule(a, b, c);
  Morph acc;
  for (Mask mf : f)
    for (Mask mg : g) expand(comps, mf, mg, acc);
  return acc;
}

void Scanner::attach(int crossing) {
  step_crossing_ = crossing;
  old_width_ = static_cast<int>(points_.size());
  int w = old_width_;
  int total = w + (crossing >= 0 ? 4 : 0);

  // Combined index of each global slot currently in play.
  std::unordered_map<int, int> local;
  for (int p = 0; p < w; ++p) local[points_[p]] = p;
  if (crossing >= 0)
    for (int pos = 0; pos < 4; ++pos) local[slot_id(crossing, pos)] = w + pos;
  auto global_of = [&](int x) { return x < w ? points_[x] : slot_id(crossing, x - w); };

  ident_.assign(static_cast<size_t>(total), -1);
  glued_.clear();
  auto identify = [&](int x, int y) {
    if (ident_[x] >= 0 || ident_[y] >= 0) return;
    ident_[x] = y;
    ident_[y] = x;
    glued_.emplace_back(std::min(x, y), std::max(x, y));
  };
  if (crossing >= 0) {
    for (int pos = 0; pos < 4; ++pos) {
      int e = d_.crossings()[crossing].edges[pos];
      if (e == bp_edge_) continue;
      const auto& occ = edge_slots_[e];
      const Slot& other = (occ[0].crossing == crossing && occ[0].position == pos) ? occ[1] : occ[0];
      auto it = local.find(slot_id(other.crossing, other.position));
      if (it != local.end()) identify(w + pos, it->second);
    }
  } else {
    identify(local.at(bp_slots_[0]), local.at(bp_slots_[1]));
  }

  std::vector<std::pair<int, int>> survivors;  // (global slot, combined)
  for (int x = 0; x < total; ++x)
    if (ident_[x] < 0) survivors.emplace_back(global_of(x), x);
  std::sort(survivors.begin(), survivors.end());
  new_index_.assign(static_cast<size_t>(total), -1);
  new_points_.clear();
  for (auto [g, x] : survivors) {
    new_index_[x] = static_cast<int>(new_points_.size());
    new_points_.push_back(g);
  }
  if (new_points_.size() > 200) throw BudgetExceeded("scan: boundary too wide");

  new_matches_ = MatchTable();
  glue_cache_.clear();
  rule_cache_.clear();
  new_circle_cache_.clear();

  // New objects: each old object times each smoothing, delooped.
  int smoothings = crossing >= 0 ? 2 : 1;
  Complex nx;
  std::vector<std::array<int, 2>> base(cx_.objs.size(), {-1, -1});
  int64_t projected = 0;
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    for (int s = 0; s < smoothings; ++s) projected += int64_t{1} << glue(cx_.objs[x].match, s).loops;
  }
  if (projected > opts_.max_generators) {
    throw BudgetExceeded("scan: " + std::to_string(projected) +
                         " generators exceeds the ceiling of " +
                         std::to_string(opts_.max_generators));
  }
  if (stats_) stats_->peak_generators = std::max(stats_->peak_generators, projected);

  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    const auto& o = cx_.objs[x];
    for (int s = 0; s < smoothings; ++s) {
      const Glue& g = glue(o.match, s);
      base[x][s] = static_cast<int>(nx.objs.size());
      for (int u = 0; u < (1 << g.loops); ++u) {
        int shift = g.loops - 2 * std::popcount(static_cast<unsigned>(u));
        nx.add(g.match, o.h + s, o.q + s + shift);
      }
    }
  }
  int new_width = static_cast<int>(new_points_.size());
  auto route = [&](const TensorRule& r, int src_base, int tgt_base, const Morph& terms) {
    // Group by (source copy, target copy).
    std::map<std::pair<int, int>, Morph> grouped;
    Mask src_all = (Mask{1} << r.src_loops) - 1;
    for (Mask t : terms) {
      int sc = static_cast<int>(~(t >> kSrcLoopShift) & src_all);
      int tc = static_cast<int>((t >> kTgtLoopShift) & ((Mask{1} << r.tgt_loops) - 1));
      toggle(grouped[{sc, tc}], t & kCircleBits);
    }
    for (auto& [st, m] : grouped) {
      int src = src_base + st.first, tgt = tgt_base + st.second;
      for (Mask t : m) {
        int deg = r.circles - new_width / 2 - 2 * std::popcount(t);
        if (deg != nx.objs[src].q - nx.objs[tgt].q) {
          throw std::logic_error("scan: differential entry of wrong degree");
        }
      }
      nx.add_entry(src, tgt, m);
    }
  };

  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    std::vector<int> targets;
    for (const auto& [y, f] : cx_.out[x]) targets.push_back(y);
    std::sort(targets.begin(), targets.end());
    for (int y : targets) {
      const Morph& f = cx_.out[x].at(y);
      for (int s = 0; s < smoothings; ++s) {
        const TensorRule& r = tensor_rule(cx_.objs[x].match, cx_.objs[y].match, s, s);
        Morph terms;
        for (Mask m : f) expand(r.comps, m, 0, terms);
        route(r, base[x][s], base[y][s], terms);
      }
    }
    if (crossing >= 0) {
      const TensorRule& r = tensor_rule(cx_.objs[x].match, cx_.objs[x].match, 0, 1);
      Morph terms;
      expand(r.comps, 0, 0, terms);
      route(r, base[x][0], base[x][1], terms);
    }
  }

  points_ = new_points_;
  matches_ = std::move(new_matches_);
  new_matches_ = MatchTable();
  cx_ = std::move(nx);
  circle_cache_ = std::move(new_circle_cache_);
  new_circle_cache_.clear();
  compose_cache_.clear();
  glue_cache_.clear();
  rule_cache_.clear();

  if (opts_.check_dd) check_dd();
  eliminate();
  if (stats_) stats_->max_boundary = std::max(stats_->max_boundary, static_cast<int>(points_.size()));
}

void Scanner::check_dd() {
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    std::map<int, Morph> acc;
    for (const auto& [y, f] : cx_.out[x]) {
      for (const auto& [z, g] : cx_.out[y]) {
        Morph c = compose(cx_.objs[x].match, cx_.objs[y].match, cx_.objs[z].match, f, g);
        Morph& slot = acc[z];
        for (Mask t : c) toggle(slot, t);
      }
    }
    for (const auto& [z, m] : acc) {
      if (!m.empty()) throw std::logic_error("scan: d∘d != 0 after attaching a crossing");
    }
  }
}

void Scanner::eliminate() {
  using Cand = std::tuple<int64_t, int, int>;
  std::priority_queue<Cand, std::vector<Cand>, std::greater<>> heap;
  auto is_iso = [&](int x, int y) {
    if (!cx_.alive[x] || !cx_.alive[y]) return false;
    const auto& ox = cx_.objs[x];
    const auto& oy = cx_.objs[y];
    if (ox.match != oy.match || ox.q != oy.q) return false;
    auto it = cx_.out[x].find(y);
    return it != cx_.out[x].end() && it->second.size() == 1 && it->second[0] == 0;
  };
  auto cost = [&](int x, int y) {
    return static_cast<int64_t>(cx_.in[y].size() - 1) * static_cast<int64_t>(cx_.out[x].size() - 1);
  };
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    for (const auto& [y, f] : cx_.out[x]) {
      if (is_iso(static_cast<int>(x), y)) heap.emplace(cost(static_cast<int>(x), y), x, y);
    }
  }
  while (!heap.empty()) {
    auto [c, x, y] = heap.top();
    heap.pop();
    if (!is_iso(x, y)) continue;
    int64_t now = cost(x, y);
    if (now > c) {
      heap.emplace(now, x, y);
      continue;
    }
    std::vector<int> sources(cx_.in[y].begin(), cx_.in[y].end());
    std::vector<int> targets;
    for (const auto& [b, g] : cx_.out[x]) targets.push_back(b);
    std::sort(sources.begin(), sources.end());
    std::sort(targets.begin(), targets.end());
    int mx = cx_.objs[x].match;
    for (int a : sources) {
      if (a == x) continue;
      const Morph fa = cx_.out[a].at(y);
      for (int b : targets) {
        if (b == y) continue;
        const Morph& gb = cx_.out[x].at(b);
        Morph m = compose(cx_.objs[a].match, mx, cx_.objs[b].match, fa, gb);
        if (m.empty()) continue;
        cx_.add_entry(a, b, m);
        if (is_iso(a, b)) heap.emplace(cost(a, b), a, b);
      }
    }
    for (int v : {x, y}) {
      for (int a : std::vector<int>(cx_.in[v].begin(), cx_.in[v].end())) {
        cx_.out[a].erase(v);
      }
      for (const auto& [b, g] : cx_.out[v]) cx_.in[b].erase(v);
      cx_.out[v].clear();
      cx_.in[v].clear();
      cx_.alive[v] = 0;
    }
  }
  // Compact.
  Complex nx;
  std::vector<int> renum(cx_.objs.size(), -1);
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    renum[x] = nx.add(cx_.objs[x].match, cx_.objs[x].h, cx_.objs[x].q);
  }
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    for (auto& [y, f] : cx_.out[x]) {
      nx.out[renum[x]].emplace(renum[y], std::move(f));
      nx.in[renum[y]].insert(renum[x]);
    }
  }
  cx_ = std::move(nx);
}

KhRanks tensor_with_loops(const KhRanks& k, int loops) {
  KhRanks cur = k;
  for (int l = 0; l < loops; ++l) {
    KhRanks next;
    for (const auto& [ij, r] : cur.table) {
      next.add(ij.first, ij.second + 1, r);
      next.add(ij.first, ij.second - 1, r);
    }
    cur = next;
  }
  return cur;
}

KhRanks Scanner::run() {
  int n = d_.crossing_count();
  bool reduced = flavor_ == Flavor::Reduced;
  if (n == 0) {
    KhRanks k;
    k.add(0, 0, 1);
    return tensor_with_loops(k, d_.free_loops() - (reduced ? 1 : 0));
  }
  if (!d_.is_oriented()) throw DiagramError("scan_ranks needs an oriented diagram");
  bp_edge_ = d_.basepoint().value_or(1);
  if (bp_edge_ < 1 || bp_edge_ > d_.edge_count()) {
    throw DiagramError("basepoint edge " + std::to_string(bp_edge_) + " not in diagram");
  }
  edge_slots_ = d_.edge_slots();
  for (const Slot& s : edge_slots_[bp_edge_]) bp_slots_.push_back(slot_id(s.crossing, s.position));

  std::vector<int> order = opts_.order.empty() ? greedy_crossing_order(d_) : opts_.order;
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> expect(static_cast<size_t>(n));
    std::iota(expect.begin(), expect.end(), 0);
    if (sorted != expect) throw std::invalid_argument("scan: crossing order is not a permutation");
  }

  points_.clear();
  matches_ = MatchTable();
  matches_.intern({});
  cx_ = Complex();
  cx_.add(0, 0, 0);
  for (int k : order) attach(k);
  if (!reduced) attach(-1);

  int np = d_.positive_count(), nm = d_.negative_count();
  KhRanks out;
  for (size_t x = 0; x < cx_.objs.size(); ++x) {
    if (!cx_.alive[x]) continue;
    out.add(cx_.objs[x].h - nm, cx_.objs[x].q + np - 2 * nm, 1);
  }
  return tensor_with_loops(out, d_.free_loops());
}

}  // namespace

KhRanks scan_ranks(const Diagram& d, Flavor flavor, const ScanOptions& opts, ScanStats* stats) {
  Scanner s(d, flavor, opts, stats);
  return s.run();
}

}  // namespace branchkh
