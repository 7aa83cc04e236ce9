#include "branchkh/diagram.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <numeric>
#include <sstream>

namespace branchkh {

namespace {

bool edges_sound(const std::vector<Crossing>& cs, int edge_count) {
  std::vector<int> uses(static_cast<size_t>(edge_count) + 1, 0);
  for (const auto& c : cs) {
    for (int e : c.edges) {
      if (e < 1 || e > edge_count) return false;
      ++uses[e];
    }
  }
  for (int e = 1; e <= edge_count; ++e) {
    if (uses[e] != 2) return false;
  }
  return true;
}

std::vector<std::array<Slot, 2>> slots_of(const std::vector<Crossing>& cs,
                                          int edge_count) {
  std::vector<std::array<Slot, 2>> out(static_cast<size_t>(edge_count) + 1);
  std::vector<int> seen(static_cast<size_t>(edge_count) + 1, 0);
  for (int x = 0; x < static_cast<int>(cs.size()); ++x) {
    for (int p = 0; p < 4; ++p) {
      int e = cs[x].edges[p];
      if (e >= 1 && e <= edge_count && seen[e] < 2) out[e][seen[e]++] = {x, p};
    }
  }
  return out;
}

// A strand passing through one crossing, recorded by the slot it enters.
struct Pass {
  int crossing;
  int entry;
};

struct Walk {
  std::vector<int> edges;
  std::vector<Pass> passes;
};

// Walks the component containing `start`, leaving the slot `from` along the
// edge. Each step enters a crossing and exits through the opposite slot.
Walk walk_component(const std::vector<Crossing>& cs,
                    const std::vector<std::array<Slot, 2>>& slots, int start,
                    Slot from) {
  Walk w;
  int e = start;
  Slot leave = from;
  while (true) {
    w.edges.push_back(e);
    const auto& occ = slots[e];
    bool first_is_leave =
        occ[0].crossing == leave.crossing && occ[0].position == leave.position;
    Slot enter = first_is_leave ? occ[1] : occ[0];
    w.passes.push_back({enter.crossing, enter.position});
    int exit_pos = (enter.position + 2) % 4;
    leave = {enter.crossing, exit_pos};
    e = cs[enter.crossing].edges[exit_pos];
    if (e == start && leave.crossing == from.crossing &&
        leave.position == from.position) {
      break;
    }
  }
  return w;
}

// Orientation choice for one component. Returns true to keep the walk
// direction, false to reverse it, or nullopt if under passages disagree.
std::optional<bool> choose_direction(const Walk& w, bool require_slot0) {
  std::optional<bool> dir;
  for (const auto& p : w.passes) {
    if (p.entry == 0 || p.entry == 2) {
      bool fwd = p.entry == 0;
      if (!require_slot0) return fwd;
      if (dir && *dir != fwd) return std::nullopt;
      dir = fwd;
    }
  }
  if (dir) return dir;
  // Over-only component: follow increasing labels when they are consecutive.
  if (w.edges.size() >= 2) {
    int e = w.edges.front();
    if (w.edges[1] == e + 1) return true;
    if (w.edges.back() == e + 1) return false;
  }
  return true;
}

std::string to_hex(const unsigned char* data, size_t n) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) {
    s.push_back(digits[data[i] >> 4]);
    s.push_back(digits[data[i] & 15]);
  }
  return s;
}

}  // namespace

Diagram::Diagram(std::vector<std::array<int, 4>> pd,
                 std::optional<int> basepoint, int free_loops,
                 std::string name)
    : basepoint_(basepoint), free_loops_(free_loops), name_(std::move(name)) {
  crossings_.reserve(pd.size());
  for (const auto& t : pd) {
    crossings_.push_back({t, CrossingSign::Pending});
    for (int e : t) edge_count_ = std::max(edge_count_, e);
  }
  if (crossings_.empty() && free_loops_ == 0) free_loops_ = 1;
  trace_signs();
}

Diagram Diagram::with_signs(std::vector<Crossing> crossings,
                            std::optional<int> basepoint, int free_loops,
                            std::string name) {
  Diagram d;
  d.crossings_ = std::move(crossings);
  d.edge_count_ = 0;
  for (const auto& c : d.crossings_)
    for (int e : c.edges) d.edge_count_ = std::max(d.edge_count_, e);
  d.basepoint_ = basepoint;
  d.free_loops_ = free_loops;
  if (d.crossings_.empty() && d.free_loops_ == 0) d.free_loops_ = 1;
  d.name_ = std::move(name);
  d.oriented_ = std::all_of(d.crossings_.begin(), d.crossings_.end(),
                            [](const Crossing& c) {
                              return c.sign != CrossingSign::Pending;
                            });
  return d;
}

void Diagram::trace_signs() {
  oriented_ = false;
  if (!edges_sound(crossings_, edge_count_)) return;
  auto slots = slots_of(crossings_, edge_count_);
  std::vector<char> visited(static_cast<size_t>(edge_count_) + 1, 0);
  std::vector<CrossingSign> signs(crossings_.size(), CrossingSign::Pending);
  for (int e = 1; e <= edge_count_; ++e) {
    if (visited[e]) continue;
    Walk w = walk_component(crossings_, slots, e, slots[e][0]);
    for (int f : w.edges) visited[f] = 1;
    auto dir = choose_direction(w, true);
    if (!dir) return;
    for (const auto& p : w.passes) {
      int entry = *dir ? p.entry : (p.entry + 2) % 4;
      if (entry == 2) return;
      if (entry == 3) signs[p.crossing] = CrossingSign::Positive;
      if (entry == 1) signs[p.crossing] = CrossingSign::Negative;
    }
  }
  for (size_t i = 0; i < crossings_.size(); ++i) {
    if (signs[i] == CrossingSign::Pending) return;
  }
  for (size_t i = 0; i < crossings_.size(); ++i) crossings_[i].sign = signs[i];
  oriented_ = true;
}

Diagram Diagram::from_unoriented(const std::vector<std::array<int, 4>>& pd,
                                 int free_loops, std::string name) {
  std::vector<Crossing> cs;
  int edge_count = 0;
  for (const auto& t : pd) {
    cs.push_back({t, CrossingSign::Pending});
    for (int e : t) edge_count = std::max(edge_count, e);
  }
  if (!edges_sound(cs, edge_count)) {
    throw DiagramError("unoriented PD has an edge not used exactly twice");
  }
  auto slots = slots_of(cs, edge_count);
  std::vector<char> visited(static_cast<size_t>(edge_count) + 1, 0);
  std::vector<char> rotate(cs.size(), 0);
  std::vector<int> relabel(static_cast<size_t>(edge_count) + 1, 0);
  int next_label = 1;
  for (int e = 1; e <= edge_count; ++e) {
    if (visited[e]) continue;
    Walk w = walk_component(cs, slots, e, slots[e][0]);
    for (int f : w.edges) visited[f] = 1;
    bool fwd = *choose_direction(w, false);
    for (const auto& p : w.passes) {
      int entry = fwd ? p.entry : (p.entry + 2) % 4;
      if (entry == 2) rotate[p.crossing] = 1;
    }
    if (fwd) {
      for (int f : w.edges) relabel[f] = next_label++;
    } else {
      // Reversed walk visits the start edge first, then the rest backwards.
      relabel[w.edges[0]] = next_label++;
      for (size_t i = w.edges.size(); i-- > 1;) relabel[w.edges[i]] = next_label++;
    }
  }
  std::vector<std::array<int, 4>> out;
  out.reserve(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) {
    auto t = cs[i].edges;
    if (rotate[i]) t = {t[2], t[3], t[0], t[1]};
    for (int& x : t) x = relabel[x];
    out.push_back(t);
  }
  return Diagram(std::move(out), std::nullopt, free_loops, std::move(name));
}

int Diagram::positive_count() const {
  return static_cast<int>(std::count_if(
      crossings_.begin(), crossings_.end(),
      [](const Crossing& c) { return c.sign == CrossingSign::Positive; }));
}

int Diagram::negative_count() const {
  return static_cast<int>(std::count_if(
      crossings_.begin(), crossings_.end(),
      [](const Crossing& c) { return c.sign == CrossingSign::Negative; }));
}

std::vector<std::array<Slot, 2>> Diagram::edge_slots() const {
  return slots_of(crossings_, edge_count_);
}

Diagram Diagram::with_basepoint(std::optional<int> edge) const {
  Diagram d = *this;
  d.basepoint_ = edge;
  return d;
}

Diagram Diagram::with_name(std::string name) const {
  Diagram d = *this;
  d.name_ = std::move(name);
  return d;
}

ValidationReport validate(const Diagram& d) {
  ValidationReport r;
  const auto& cs = d.crossings();
  int n = d.edge_count();
  std::map<int, int> uses;
  for (const auto& c : cs) {
    for (int e : c.edges) ++uses[e];
  }
  for (const auto& [e, k] : uses) {
    if (e < 1) r.problems.push_back("edge " + std::to_string(e) + " is not a positive label");
  }
  for (int e = 1; e <= n; ++e) {
    int k = uses.count(e) ? uses[e] : 0;
    if (k != 2) {
      r.problems.push_back("edge " + std::to_string(e) + " appears " +
                           std::to_string(k) + " times (expected 2)");
    }
  }
  if (d.basepoint()) {
    int bp = *d.basepoint();
    if (bp < 1 || bp > n) {
      r.problems.push_back("basepoint " + std::to_string(bp) + " is not an edge");
    }
  }
  if (d.free_loops() < 0) r.problems.push_back("negative free loop count");
  if (r.problems.empty() && !cs.empty() && !d.is_oriented()) {
    r.problems.push_back("orientation tracing is inconsistent");
  }
  r.ok = r.problems.empty();
  r.crossingless_unknot = cs.empty() && d.free_loops() == 1;
  return r;
}

namespace {

class PdLexer {
 public:
  explicit PdLexer(std::string_view s) : s_(s) {}

  void skip() {
    while (i_ < s_.size() &&
           (std::isspace(static_cast<unsigned char>(s_[i_])) || s_[i_] == ',' ||
            s_[i_] == ';')) {
      ++i_;
    }
  }
  bool done() {
    skip();
    return i_ >= s_.size();
  }
  char peek() { return i_ < s_.size() ? s_[i_] : '\0'; }
  bool starts_with(std::string_view w) { return s_.substr(i_).starts_with(w); }
  void advance(size_t n) { i_ += n; }
  size_t pos() const { return i_; }

  int integer() {
    skip();
    int v = 0;
    auto [p, ec] = std::from_chars(s_.data() + i_, s_.data() + s_.size(), v);
    if (ec != std::errc()) fail("expected an integer");
    i_ = static_cast<size_t>(p - s_.data());
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw DiagramError("PD parse error at offset " + std::to_string(i_) + ": " + what);
  }

 private:
  std::string_view s_;
  size_t i_ = 0;
};

}  // namespace

Diagram parse_pd(std::string_view text) {
  PdLexer lx(text);
  std::vector<std::array<int, 4>> tuples;
  std::optional<int> bp;
  int loops = 0;
  bool any = false;
  int depth = 0;
  while (!lx.done()) {
    if (lx.starts_with("PD[") || lx.starts_with("PD(")) {
      lx.advance(3);
      ++depth;
      continue;
    }
    char c = lx.peek();
    if ((c == ']' || c == ')') && depth > 0) {
      lx.advance(1);
      --depth;
      continue;
    }
    if (lx.starts_with("bp=")) {
      lx.advance(3);
      bp = lx.integer();
      any = true;
      continue;
    }
    if (lx.starts_with("loops=")) {
      lx.advance(6);
      loops = lx.integer();
      if (loops < 0) lx.fail("negative loop count");
      any = true;
      continue;
    }
    if (c == 'X' || c == 'x') {
      lx.advance(1);
      char open = lx.peek();
      if (open != '(' && open != '[') lx.fail("expected '(' after X");
      char close = open == '(' ? ')' : ']';
      lx.advance(1);
      std::vector<int> vals;
      while (true) {
        lx.skip();
        if (lx.peek() == close) {
          lx.advance(1);
          break;
        }
        if (lx.peek() == '\0') lx.fail("unterminated tuple");
        vals.push_back(lx.integer());
      }
      if (vals.size() != 4) {
        lx.fail("tuple arity " + std::to_string(vals.size()) + " != 4");
      }
      for (int v : vals) {
        if (v < 1) lx.fail("edge labels must be positive");
      }
      tuples.push_back({vals[0], vals[1], vals[2], vals[3]});
      any = true;
      continue;
    }
    lx.fail(std::string("unexpected character '") + c + "'");
  }
  if (!any) throw DiagramError("PD parse error: empty input");
  if (depth != 0) throw DiagramError("PD parse error: unbalanced PD[ ]");
  if (tuples.empty() && loops == 0) {
    throw DiagramError("PD parse error: no crossings and no loops");
  }
  Diagram d(std::move(tuples), bp, loops);
  auto report = validate(d);
  if (!report.ok) {
    std::string msg = "invalid diagram:";
    for (const auto& p : report.problems) msg += " " + p + ";";
    throw DiagramError(msg);
  }
  return d;
}

std::string render(const Diagram& d) {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : d.crossings()) {
    if (!first) os << ' ';
    first = false;
    os << "X(" << c.edges[0] << ',' << c.edges[1] << ',' << c.edges[2] << ','
       << c.edges[3] << ')';
  }
  if (d.free_loops() > 0) {
    if (!first) os << ' ';
    first = false;
    os << "loops=" << d.free_loops();
  }
  if (d.basepoint()) os << (first ? "" : " ") << "bp=" << *d.basepoint();
  return os.str();
}

Diagram mirror(const Diagram& d) {
  if (!d.crossings().empty() && !d.is_oriented()) {
    throw DiagramError("mirror requires an oriented diagram");
  }
  std::vector<Crossing> out;
  out.reserve(d.crossings().size());
  for (const auto& c : d.crossings()) {
    const auto& t = c.edges;
    Crossing m;
    if (c.sign == CrossingSign::Positive) {
      // over strand runs t[3] -> t[1]; it becomes the under strand
      m.edges = {t[3], t[0], t[1], t[2]};
      m.sign = CrossingSign::Negative;
    } else {
      m.edges = {t[1], t[2], t[3], t[0]};
      m.sign = CrossingSign::Positive;
    }
    out.push_back(m);
  }
  return Diagram::with_signs(std::move(out), d.basepoint(), d.free_loops(),
                             d.name().empty() ? d.name() : "mirror(" + d.name() + ")");
}

int writhe(const Diagram& d) {
  if (!d.crossings().empty() && !d.is_oriented()) {
    throw DiagramError("orientation tracing is inconsistent; writhe undefined");
  }
  return d.positive_count() - d.negative_count();
}

std::vector<std::vector<int>> components(const Diagram& d) {
  std::vector<std::vector<int>> out;
  const auto& cs = d.crossings();
  int n = d.edge_count();
  if (!edges_sound(cs, n)) throw DiagramError("diagram edges are not sound");
  auto slots = slots_of(cs, n);
  std::vector<char> visited(static_cast<size_t>(n) + 1, 0);
  for (int e = 1; e <= n; ++e) {
    if (visited[e]) continue;
    // Start in the oriented direction: leave the slot that is the edge's tail.
    Slot from = slots[e][0];
    if (d.is_oriented()) {
      // Tail slots are exit positions: 2 for under, 1 for a positive over
      // strand, 3 for a negative one.
      auto is_tail = [&](const Slot& s) {
        const auto& c = cs[s.crossing];
        if (s.position == 2) return true;
        if (s.position == 1) return c.sign == CrossingSign::Positive;
        if (s.position == 3) return c.sign == CrossingSign::Negative;
        return false;
      };
      from = is_tail(slots[e][0]) ? slots[e][0] : slots[e][1];
    }
    Walk w = walk_component(cs, slots, e, from);
    for (int f : w.edges) visited[f] = 1;
    out.push_back(std::move(w.edges));
  }
  for (int i = 0; i < d.free_loops(); ++i) out.emplace_back();
  return out;
}

int component_count(const Diagram& d) {
  return static_cast<int>(components(d).size());
}

std::string canonical_form(const Diagram& d) {
  const auto& cs = d.crossings();
  int n = d.edge_count();
  std::string tail = " loops=" + std::to_string(d.free_loops());
  if (cs.empty()) {
    return "loops=" + std::to_string(d.free_loops()) + (d.basepoint() ? " bp" : "");
  }
  if (!d.is_oriented()) throw DiagramError("canonical form needs an oriented diagram");
  auto comps = components(d);
  comps.resize(comps.size() - static_cast<size_t>(d.free_loops()));
  // Position of each edge along its oriented component.
  std::vector<std::pair<int, int>> where(static_cast<size_t>(n) + 1);
  for (int k = 0; k < static_cast<int>(comps.size()); ++k) {
    for (int i = 0; i < static_cast<int>(comps[k].size()); ++i) where[comps[k][i]] = {k, i};
  }
  auto slots = slots_of(cs, n);
  // Head slot of an edge in the oriented direction: where it enters.
  auto head = [&](int e) {
    for (const auto& s : slots[e]) {
      const auto& c = cs[s.crossing];
      if (s.position == 0) return s;
      if (s.position == 3 && c.sign == CrossingSign::Positive) return s;
      if (s.position == 1 && c.sign == CrossingSign::Negative) return s;
    }
    return slots[e][1];
  };

  std::string best;
  int best_bp = 0;
  bool have = false;
  for (int start = 1; start <= n; ++start) {
    for (int reversed = 0; reversed < 2; ++reversed) {
      std::vector<int> label(static_cast<size_t>(n) + 1, 0);
      std::vector<int> order;  // old edges in new-label order
      int next = 1;
      auto take_component = [&](int e) {
        auto [k, i] = where[e];
        const auto& comp = comps[k];
        int len = static_cast<int>(comp.size());
        for (int step = 0; step < len; ++step) {
          int idx = reversed ? ((i - step) % len + len) % len : (i + step) % len;
          label[comp[idx]] = next++;
          order.push_back(comp[idx]);
        }
      };
      take_component(start);
      size_t scan = 0;
      while (next <= n) {
        int found = 0;
        for (; scan < order.size() && !found; ++scan) {
          int e = order[scan];
          Slot h = head(e);
          if (reversed) h = (slots[e][0].crossing == h.crossing &&
                             slots[e][0].position == h.position)
                                ? slots[e][1]
                                : slots[e][0];
          for (int k = 1; k < 4 && !found; ++k) {
            int f = cs[h.crossing].edges[(h.position + k) % 4];
            if (!label[f]) found = f;
          }
          if (found) break;
        }
        if (!found) {
          for (int e = 1; e <= n && !found; ++e)
            if (!label[e]) found = e;
        }
        take_component(found);
      }
      std::vector<std::string> tuples;
      tuples.reserve(cs.size());
      for (const auto& c : cs) {
        auto t = c.edges;
        if (reversed) t = {t[2], t[3], t[0], t[1]};
        tuples.push_back("X(" + std::to_string(label[t[0]]) + "," +
                         std::to_string(label[t[1]]) + "," +
                         std::to_string(label[t[2]]) + "," +
                         std::to_string(label[t[3]]) + ")");
      }
      std::sort(tuples.begin(), tuples.end());
      std::string s;
      for (const auto& t : tuples) s += t;
      int bp = d.basepoint() ? label[*d.basepoint()] : 0;
      if (!have || s < best || (s == best && bp < best_bp)) {
        best = std::move(s);
        best_bp = bp;
        have = true;
      }
    }
  }
  return best + tail + (d.basepoint() ? " bp=" + std::to_string(best_bp) : "");
}

std::string diagram_digest(const Diagram& d) {
  std::string s = canonical_form(d);
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(s.data(), s.size(), md, &len, EVP_sha256(), nullptr);
  return to_hex(md, len);
}

}  // namespace branchkh
