#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace branchkh {

class DiagramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class CrossingSign : int8_t { Negative = -1, Pending = 0, Positive = 1 };

// One crossing of a planar diagram. Edges are listed counterclockwise starting
// from the incoming under-strand, so the under strand runs edges[0] -> edges[2]
// and the over strand joins edges[1] and edges[3].
struct Crossing {
  std::array<int, 4> edges{};
  CrossingSign sign = CrossingSign::Pending;

  friend bool operator==(const Crossing&, const Crossing&) = default;
};

// Where an edge end attaches: crossing index and slot (0..3).
struct Slot {
  int crossing = -1;
  int position = -1;
};

// A planar link diagram in PD form. Crossingless unknotted components that do
// not meet any crossing are counted by free_loops(); the empty crossing list
// with no free loops is normalized to the crossingless unknot.
//
// The constructor never throws: invalid data is kept so that validate() can
// report it. Signs are traced from the PD tuples when the edge structure is
// sound; if tracing is inconsistent the signs stay Pending.
class Diagram {
 public:
  Diagram() : Diagram(std::vector<std::array<int, 4>>{}) {}
  explicit Diagram(std::vector<std::array<int, 4>> pd,
                   std::optional<int> basepoint = std::nullopt,
                   int free_loops = 0, std::string name = {});

  // Keeps the supplied signs verbatim (used when the orientation is already
  // known, e.g. by mirror()).
  static Diagram with_signs(std::vector<Crossing> crossings,
                            std::optional<int> basepoint, int free_loops,
                            std::string name);

  // Builds a diagram from tuples whose under strand occupies slots 0 and 2 but
  // whose direction is not yet known. Each component is oriented (by its
  // first under passage in traversal order from its lowest edge) and tuples
  // are rotated so slot 0 is the incoming under strand. Edges are then
  // relabelled consecutively along the oriented components.
  static Diagram from_unoriented(const std::vector<std::array<int, 4>>& pd,
                                 int free_loops = 0, std::string name = {});

  const std::vector<Crossing>& crossings() const { return crossings_; }
  int crossing_count() const { return static_cast<int>(crossings_.size()); }
  int edge_count() const { return edge_count_; }
  std::optional<int> basepoint() const { return basepoint_; }
  int free_loops() const { return free_loops_; }
  const std::string& name() const { return name_; }

  bool is_oriented() const { return oriented_; }
  int positive_count() const;
  int negative_count() const;

  // The two slots where each edge attaches; index by edge id (1-based).
  // Only meaningful for diagrams that pass validate().
  std::vector<std::array<Slot, 2>> edge_slots() const;

  Diagram with_basepoint(std::optional<int> edge) const;
  Diagram with_name(std::string name) const;

  friend bool operator==(const Diagram& a, const Diagram& b) {
    return a.crossings_ == b.crossings_ && a.edge_count_ == b.edge_count_ &&
           a.basepoint_ == b.basepoint_ && a.free_loops_ == b.free_loops_;
  }

 private:
  void trace_signs();

  std::vector<Crossing> crossings_;
  int edge_count_ = 0;
  std::optional<int> basepoint_;
  int free_loops_ = 0;
  std::string name_;
  bool oriented_ = false;
};

struct ValidationReport {
  bool ok = true;
  bool crossingless_unknot = false;
  std::vector<std::string> problems;
};

ValidationReport validate(const Diagram& d);

// Parses "X(1,4,2,3) X(3,6,4,5) ..." with optional "bp=<edge>" and
// "loops=<k>" tokens. Square brackets are accepted in place of parentheses
// and an enclosing "PD[...]" is ignored. Throws DiagramError.
Diagram parse_pd(std::string_view text);

// Inverse of parse_pd.
std::string render(const Diagram& d);

// Switches every crossing; orientation and edge labels are preserved.
Diagram mirror(const Diagram& d);

// Throws DiagramError when signs could not be traced.
int writhe(const Diagram& d);

int component_count(const Diagram& d);

// Edge sequences of each component in traversal order (following the
// orientation when the diagram is oriented).
std::vector<std::vector<int>> components(const Diagram& d);

// Lexicographically minimal PD string over all relabelings induced by a
// starting edge and a global traversal direction, plus basepoint and loops.
std::string canonical_form(const Diagram& d);

// SHA-256 (hex) of canonical_form().
std::string diagram_digest(const Diagram& d);

}  // namespace branchkh
