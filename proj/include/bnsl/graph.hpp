#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

enum class MoveKind { AddArc, DeleteArc, ReverseArc };

struct Move {
  MoveKind kind;
  int from;
  int to;
};

bool operator==(const Move& a, const Move& b);

// The move that undoes m on the graph m was applied to.
Move inverse(const Move& m);

// Directed acyclic graph over nodes 0..N-1. Acyclicity is enforced on every
// mutation, so a Dag value is a DAG by construction.
class Dag {
 public:
  Dag() = default;
  explicit Dag(int node_count);

  // Builds the graph in one shot; validates acyclicity once.
  static Dag from_arcs(int node_count,
                       const std::vector<std::pair<int, int>>& arcs);

  int node_count() const { return n_; }
  int arc_count() const { return arc_count_; }

  bool has_arc(int from, int to) const;
  bool adjacent(int a, int b) const;
  std::vector<int> parents(int node) const;   // ascending
  std::vector<int> children(int node) const;  // ascending
  std::vector<std::pair<int, int>> arcs() const;

  // Directed reachability from `from` to `to` (true when from == to).
  bool path_exists(int from, int to) const;

  void add_arc(int from, int to);
  void remove_arc(int from, int to);

  friend bool operator==(const Dag& a, const Dag& b) {
    return a.n_ == b.n_ && a.adj_ == b.adj_;
  }

 private:
  int check_node(int v) const;

  int n_ = 0;
  int arc_count_ = 0;
  std::vector<std::uint8_t> adj_;  // adj_[from * n_ + to]
};

// Completed partially directed graph: the canonical representative of an
// equivalence class, with compelled arcs directed and reversible edges
// undirected.
class Cpdag {
 public:
  Cpdag() = default;
  explicit Cpdag(int node_count);

  int node_count() const { return n_; }

  void set_directed(int from, int to);
  void set_undirected(int a, int b);

  bool has_directed(int from, int to) const;
  bool has_undirected(int a, int b) const;
  bool adjacent(int a, int b) const;

  std::vector<std::pair<int, int>> directed_edges() const;
  std::vector<std::pair<int, int>> undirected_edges() const;  // first < second

  friend bool operator==(const Cpdag& a, const Cpdag& b) {
    return a.n_ == b.n_ && a.code_ == b.code_;
  }

 private:
  int n_ = 0;
  std::vector<std::uint8_t> code_;  // 0 none, 1 directed, 2 undirected
};

// Returns the modified graph; throws InvalidMove / CycleError.
Dag apply_move(const Dag& g, const Move& m);

// Kahn's algorithm, smallest node index first among the available nodes.
std::vector<int> topological_order(const Dag& g);

// Sorted triples (x, z, y), x < y, for each pattern x -> z <- y with x and y
// not adjacent.
std::vector<std::array<int, 3>> v_structures(const Dag& g);

Cpdag to_cpdag(const Dag& g);

bool same_equivalence_class(const Dag& g1, const Dag& g2);

// Structural Hamming distance between the equivalence classes of g1 and g2:
// one unit per node pair whose edge status (absent / undirected / direction)
// differs between the two patterns.
int shd(const Dag& g1, const Dag& g2);
int shd(const Cpdag& p1, const Cpdag& p2);

inline constexpr int kMaxEnumerationNodes = 6;

// Visits every labeled DAG on node_count nodes exactly once, in a fixed order.
void for_each_dag(int node_count, const std::function<void(const Dag&)>& fn);

std::vector<Dag> enumerate_dags(int node_count);

struct ArcProbability {
  std::int64_t dag_count = 0;
  std::int64_t forward_count = 0;  // DAGs carrying the arc 0 -> 1
  std::int64_t absent_count = 0;   // DAGs with no arc between 0 and 1

  double p_forward() const {
    return static_cast<double>(forward_count) / static_cast<double>(dag_count);
  }
  double p_absent() const {
    return static_cast<double>(absent_count) / static_cast<double>(dag_count);
  }
};

// Exact per-pair arc probabilities under the uniform distribution over all
// labeled DAGs, by enumeration. Any fixed ordered pair is equivalent by label
// symmetry; the pair (0, 1) is counted.
ArcProbability exact_arc_probability(int node_count);

struct NamedDag {
  Dag dag;
  std::vector<std::string> names;
};

// Text format: a `nodes <name> <name> ...` header line followed by one
// `<parent> -> <child>` line per arc.
std::string write_dag_text(const Dag& g, const std::vector<std::string>& names);
NamedDag read_dag_text(const std::string& text);

}  // namespace bnsl
