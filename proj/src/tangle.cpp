#include "branchkh/tangle.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace branchkh {

Slope::Slope(int64_t r, int64_t s) {
  if (r == 0 && s == 0) throw std::invalid_argument("slope 0/0 is undefined");
  if (s < 0) {
    r = -r;
    s = -s;
  }
  int64_t g = std::gcd(r < 0 ? -r : r, s);
  r_ = r / g;
  s_ = s / g;
  if (s_ == 0) r_ = 1;
}

Slope Slope::parse(const std::string& text) {
  if (text == "inf" || text == "infinity") return infinity();
  auto slash = text.find('/');
  try {
    size_t used = 0;
    if (slash == std::string::npos) {
      int64_t r = std::stoll(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return Slope(r, 1);
    }
    std::string a = text.substr(0, slash), b = text.substr(slash + 1);
    int64_t r = std::stoll(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    int64_t s = std::stoll(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return Slope(r, s);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed slope '" + text + "'");
  }
}

std::string Slope::str() const {
  return std::to_string(r_) + "/" + std::to_string(s_);
}

TwistWord continued_fraction(const Slope& s) {
  TwistWord w;
  if (s.is_infinity()) return w;
  // Euclid on |r|/s; negative slopes negate every coefficient so that the
  // twist regions all have the same handedness.
  int64_t sign = s.r() < 0 ? -1 : 1;
  int64_t num = s.r() * sign, den = s.s();
  while (true) {
    int64_t q = num / den;
    w.coefficients.push_back(sign * q);
    int64_t rem = num - q * den;
    if (rem == 0) break;
    num = den;
    den = rem;
  }
  return w;
}

Slope evaluate(const TwistWord& w) {
  if (w.coefficients.empty()) return Slope::infinity();
  // Fold from the innermost coefficient: value = c + 1/value.
  int64_t num = w.coefficients.back(), den = 1;
  for (size_t i = w.coefficients.size() - 1; i-- > 0;) {
    if (num == 0) throw std::domain_error("continued fraction divides by zero");
    int64_t c = w.coefficients[i];
    int64_t n2 = c * num + den;
    den = num;
    num = n2;
  }
  return Slope(num, den);
}

int TangleTemplate::max_edge() const {
  int m = 0;
  for (const auto& t : interior)
    for (int e : t) m = std::max(m, e);
  for (int e : ends) m = std::max(m, e);
  return m;
}

void check_template(const TangleTemplate& t) {
  std::map<int, int> uses;
  for (const auto& c : t.interior)
    for (int e : c) ++uses[e];
  for (int e : t.ends) ++uses[e];
  for (const auto& [e, k] : uses) {
    if (e < 1) throw DiagramError("tangle edge labels must be positive");
    if (k != 2) {
      throw DiagramError("tangle edge " + std::to_string(e) + " used " +
                         std::to_string(k) + " times");
    }
  }
  for (int e : t.ends) {
    int inside = 0;
    for (const auto& c : t.interior)
      for (int f : c) inside += f == e;
    int as_end = static_cast<int>(std::count(t.ends.begin(), t.ends.end(), e));
    if (!(inside == 1 && as_end == 1) && !(inside == 0 && as_end == 2)) {
      throw DiagramError("end labelling mismatch at edge " + std::to_string(e));
    }
  }
}

namespace tangle {

namespace {

TangleTemplate shifted(const TangleTemplate& t, int by) {
  TangleTemplate out = t;
  for (auto& c : out.interior)
    for (int& e : c) e += by;
  for (int& e : out.ends) e += by;
  return out;
}

void replace_edge(TangleTemplate& t, int from, int to) {
  for (auto& c : t.interior)
    for (int& e : c)
      if (e == from) e = to;
  for (int& e : t.ends)
    if (e == from) e = to;
}

// Joins the arcs ending at edges x and y. Joining an arc to itself closes a
// loop with no crossings.
void join(TangleTemplate& t, int x, int y, bool& closed_loop) {
  closed_loop = false;
  if (x == y) {
    closed_loop = true;
    return;
  }
  replace_edge(t, y, x);
}

TangleTemplate merged(const TangleTemplate& a, const TangleTemplate& b) {
  TangleTemplate bb = shifted(b, a.max_edge());
  TangleTemplate out;
  out.interior = a.interior;
  out.interior.insert(out.interior.end(), bb.interior.begin(), bb.interior.end());
  out.free_loops = a.free_loops + b.free_loops;
  out.ends = a.ends;
  // The caller rewires ends; keep b's shifted ends around in `name` slots.
  out.name = a.name;
  return out;
}

Diagram close(TangleTemplate t, End a1, End b1, End a2, End b2) {
  int loops = t.free_loops;
  int x1 = t.end(a1), y1 = t.end(b1);
  bool closed = false;
  join(t, x1, y1, closed);
  loops += closed;
  int x2 = t.end(a2), y2 = t.end(b2);
  // After the first join, ends may have been renamed.
  if (x2 == y1) x2 = x1;
  if (y2 == y1) y2 = x1;
  join(t, x2, y2, closed);
  loops += closed;
  // Compact labels before orienting.
  std::map<int, int> relabel;
  for (const auto& c : t.interior)
    for (int e : c) relabel.emplace(e, 0);
  int next = 1;
  for (auto& [e, v] : relabel) v = next++;
  std::vector<std::array<int, 4>> pd;
  pd.reserve(t.interior.size());
  for (auto c : t.interior) {
    for (int& e : c) e = relabel[e];
    pd.push_back(c);
  }
  return Diagram::from_unoriented(pd, loops, t.name);
}

}  // namespace

TangleTemplate zero() {
  TangleTemplate t;
  t.ends = {1, 1, 2, 2};
  t.name = "[0]";
  return t;
}

TangleTemplate infinity() {
  TangleTemplate t;
  t.ends = {1, 2, 1, 2};
  t.name = "[inf]";
  return t;
}

TangleTemplate crossing(int sign) {
  // Edges: NW=1, NE=2, SW=3, SE=4. Strands NW-SE and SW-NE. For +1 the
  // SW-NE strand is over, so the under strand is NW-SE.
  TangleTemplate t;
  t.ends = {1, 2, 3, 4};
  if (sign > 0) {
    // counterclockwise from NW: NW, SW, SE, NE
    t.interior = {{1, 3, 4, 2}};
    t.name = "[1]";
  } else {
    // under strand SW-NE; counterclockwise from SW: SW, SE, NE, NW
    t.interior = {{3, 4, 2, 1}};
    t.name = "[-1]";
  }
  return t;
}

TangleTemplate sum(const TangleTemplate& a, const TangleTemplate& b) {
  TangleTemplate bb = shifted(b, a.max_edge());
  TangleTemplate out = merged(a, b);
  // Attach bb's ends, then join a.NE-bb.NW and a.SE-bb.SW.
  out.ends = {a.end(End::NW), bb.end(End::NE), a.end(End::SW), bb.end(End::SE)};
  auto glue = [&](int x, int y) {
    if (x == y) return;
    replace_edge(out, y, x);
  };
  // Shared arcs may rename labels; resolve through the current end table.
  int a_ne = a.end(End::NE), a_se = a.end(End::SE);
  int b_nw = bb.end(End::NW), b_sw = bb.end(End::SW);
  // Track b_sw/a_se through the first rename.
  glue(a_ne, b_nw);
  if (b_sw == b_nw) b_sw = a_ne;
  if (a_se == b_nw) a_se = a_ne;
  if (a_se == b_sw) {
    ++out.free_loops;
  } else {
    glue(a_se, b_sw);
  }
  out.name = "(" + a.name + "+" + b.name + ")";
  return out;
}

TangleTemplate rotate(const TangleTemplate& t) {
  TangleTemplate out = t;
  out.ends = {t.end(End::NE), t.end(End::SE), t.end(End::NW), t.end(End::SW)};
  out.name = "rot" + t.name;
  return out;
}

TangleTemplate mirror(const TangleTemplate& t) {
  TangleTemplate out = t;
  for (auto& c : out.interior) c = {c[1], c[2], c[3], c[0]};
  out.name = "mirror" + t.name;
  return out;
}

TangleTemplate stack(const TangleTemplate& a, const TangleTemplate& b) {
  // Stacking is a sum conjugated by rotation: rotating counterclockwise puts
  // the top tangle on the left.
  TangleTemplate ra = rotate(a), rb = rotate(b);
  TangleTemplate s = sum(ra, rb);
  // Undo the quarter turn with three more.
  TangleTemplate out = rotate(rotate(rotate(s)));
  out.name = "(" + a.name + "*" + b.name + ")";
  return out;
}

TangleTemplate twist_horizontal(const TangleTemplate& t, int64_t n) {
  TangleTemplate out = t;
  for (int64_t i = 0; i < (n < 0 ? -n : n); ++i) out = sum(out, crossing(n > 0 ? 1 : -1));
  return out;
}

TangleTemplate twist_vertical(const TangleTemplate& t, int64_t n) {
  TangleTemplate out = t;
  for (int64_t i = 0; i < (n < 0 ? -n : n); ++i) out = stack(out, crossing(n > 0 ? 1 : -1));
  return out;
}

Diagram numerator(const TangleTemplate& t) {
  check_template(t);
  return close(t, End::NW, End::NE, End::SW, End::SE);
}

Diagram denominator(const TangleTemplate& t) {
  check_template(t);
  return close(t, End::NW, End::SW, End::NE, End::SE);
}

}  // namespace tangle

TangleTemplate rational_tangle(const Slope& s) {
  TwistWord w = continued_fraction(s);
  const auto& c = w.coefficients;
  size_t k = c.size();
  TangleTemplate t = k % 2 == 1 ? tangle::zero() : tangle::infinity();
  // Innermost coefficient first; the outermost region is horizontal.
  for (size_t i = k; i-- > 0;) {
    bool horizontal = (i % 2) == 0;
    t = horizontal ? tangle::twist_horizontal(t, c[i]) : tangle::twist_vertical(t, c[i]);
  }
  t.name = "R(" + s.str() + ")";
  return t;
}

}  // namespace branchkh
