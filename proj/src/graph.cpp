#include "bnsl/graph.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace bnsl {

bool operator==(const Move& a, const Move& b) {
  return a.kind == b.kind && a.from == b.from && a.to == b.to;
}

Move inverse(const Move& m) {
  switch (m.kind) {
    case MoveKind::AddArc:
      return {MoveKind::DeleteArc, m.from, m.to};
    case MoveKind::DeleteArc:
      return {MoveKind::AddArc, m.from, m.to};
    case MoveKind::ReverseArc:
      return {MoveKind::ReverseArc, m.to, m.from};
  }
  throw InvalidMove("unknown move kind");
}

Dag::Dag(int node_count) : n_(node_count) {
  if (node_count < 0) throw DimensionError("negative node count");
  adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
}

int Dag::check_node(int v) const {
  if (v < 0 || v >= n_) throw DimensionError("node index out of range");
  return v;
}

bool Dag::has_arc(int from, int to) const {
  check_node(from);
  check_node(to);
  return adj_[static_cast<std::size_t>(from) * n_ + to] != 0;
}

bool Dag::adjacent(int a, int b) const {
  return has_arc(a, b) || has_arc(b, a);
}

std::vector<int> Dag::parents(int node) const {
  check_node(node);
  std::vector<int> out;
  for (int p = 0; p < n_; ++p)
    if (adj_[static_cast<std::size_t>(p) * n_ + node]) out.push_back(p);
  return out;
}

std::vector<int> Dag::children(int node) const {
  check_node(node);
  std::vector<int> out;
  for (int c = 0; c < n_; ++c)
    if (adj_[static_cast<std::size_t>(node) * n_ + c]) out.push_back(c);
  return out;
}

std::vector<std::pair<int, int>> Dag::arcs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(arc_count_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (adj_[static_cast<std::size_t>(i) * n_ + j]) out.emplace_back(i, j);
  return out;
}

bool Dag::path_exists(int from, int to) const {
  check_node(from);
  check_node(to);
  if (from == to) return true;
  std::vector<std::uint8_t> seen(n_, 0);
  std::vector<int> stack{from};
  seen[from] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int c = 0; c < n_; ++c) {
      if (!adj_[static_cast<std::size_t>(v) * n_ + c] || seen[c]) continue;
      if (c == to) return true;
      seen[c] = 1;
      stack.push_back(c);
    }
  }
  return false;
}

void Dag::add_arc(int from, int to) {
  check_node(from);
  check_node(to);
  if (from == to) throw InvalidMove("self loop");
  if (has_arc(from, to) || has_arc(to, from))
    throw InvalidMove("nodes already adjacent");
  if (path_exists(to, from)) throw CycleError("arc would create a cycle");
  adj_[static_cast<std::size_t>(from) * n_ + to] = 1;
  ++arc_count_;
}

void Dag::remove_arc(int from, int to) {
  if (!has_arc(from, to)) throw InvalidMove("arc not present");
  adj_[static_cast<std::size_t>(from) * n_ + to] = 0;
  --arc_count_;
}

Dag Dag::from_arcs(int node_count,
                   const std::vector<std::pair<int, int>>& arcs) {
  Dag g(node_count);
  for (const auto& [from, to] : arcs) {
    g.check_node(from);
    g.check_node(to);
    if (from == to) throw InvalidMove("self loop");
    auto& cell = g.adj_[static_cast<std::size_t>(from) * g.n_ + to];
    if (cell || g.adj_[static_cast<std::size_t>(to) * g.n_ + from])
      throw InvalidMove("nodes already adjacent");
    cell = 1;
    ++g.arc_count_;
  }
  // One Kahn pass validates the whole arc set.
  std::vector<int> indegree(node_count, 0);
  for (const auto& [from, to] : arcs) {
    (void)from;
    ++indegree[to];
  }
  std::vector<std::uint8_t> placed(node_count, 0);
  int placed_count = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int v = 0; v < node_count; ++v) {
      if (placed[v] || indegree[v] != 0) continue;
      placed[v] = 1;
      ++placed_count;
      progress = true;
      for (int c = 0; c < node_count; ++c)
        if (g.adj_[static_cast<std::size_t>(v) * node_count + c]) --indegree[c];
    }
  }
  if (placed_count != node_count) throw CycleError("arc set contains a cycle");
  return g;
}

Cpdag::Cpdag(int node_count) : n_(node_count) {
  if (node_count < 0) throw DimensionError("negative node count");
  code_.assign(static_cast<std::size_t>(n_) * n_, 0);
}

void Cpdag::set_directed(int from, int to) {
  code_[static_cast<std::size_t>(from) * n_ + to] = 1;
  code_[static_cast<std::size_t>(to) * n_ + from] = 0;
}

void Cpdag::set_undirected(int a, int b) {
  code_[static_cast<std::size_t>(a) * n_ + b] = 2;
  code_[static_cast<std::size_t>(b) * n_ + a] = 2;
}

bool Cpdag::has_directed(int from, int to) const {
  return code_[static_cast<std::size_t>(from) * n_ + to] == 1;
}

bool Cpdag::has_undirected(int a, int b) const {
  return code_[static_cast<std::size_t>(a) * n_ + b] == 2;
}

bool Cpdag::adjacent(int a, int b) const {
  return code_[static_cast<std::size_t>(a) * n_ + b] != 0 ||
         code_[static_cast<std::size_t>(b) * n_ + a] != 0;
}

std::vector<std::pair<int, int>> Cpdag::directed_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (has_directed(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<std::pair<int, int>> Cpdag::undirected_edges() const {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (has_undirected(i, j)) out.emplace_back(i, j);
  return out;
}

Dag apply_move(const Dag& g, const Move& m) {
  Dag out = g;
  switch (m.kind) {
    case MoveKind::AddArc:
      out.add_arc(m.from, m.to);
      return out;
    case MoveKind::DeleteArc:
      out.remove_arc(m.from, m.to);
      return out;
    case MoveKind::ReverseArc: {
      out.remove_arc(m.from, m.to);
      if (out.path_exists(m.from, m.to))
        throw CycleError("reversal would create a cycle");
      out.add_arc(m.to, m.from);
      return out;
    }
  }
  throw InvalidMove("unknown move kind");
}

std::vector<int> topological_order(const Dag& g) {
  const int n = g.node_count();
  std::vector<int> indegree(n, 0);
  for (const auto& [from, to] : g.arcs()) {
    (void)from;
    ++indegree[to];
  }
  std::vector<std::uint8_t> placed(n, 0);
  std::vector<int> order;
  order.reserve(n);
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (!placed[v] && indegree[v] == 0) {
        pick = v;
        break;
      }
    }
    if (pick < 0) throw CycleError("graph is not acyclic");
    placed[pick] = 1;
    order.push_back(pick);
    for (int c : g.children(pick)) --indegree[c];
  }
  return order;
}

std::vector<std::array<int, 3>> v_structures(const Dag& g) {
  std::vector<std::array<int, 3>> out;
  const int n = g.node_count();
  for (int z = 0; z < n; ++z) {
    const auto pa = g.parents(z);
    for (std::size_t a = 0; a < pa.size(); ++a)
      for (std::size_t b = a + 1; b < pa.size(); ++b)
        if (!g.adjacent(pa[a], pa[b])) out.push_back({pa[a], z, pa[b]});
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Orientation-propagation closure over a partially directed skeleton. The
// three rules preserve the v-structure set and acyclicity; iterating them to
// a fixed point after seeding the v-structures yields the compelled arcs.
void meek_closure(Cpdag& p) {
  const int n = p.node_count();
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (!p.has_undirected(a, b) || a == b) continue;
        // a -- b is a candidate for orientation as a -> b.

        // R1: some c -> a with c, b not adjacent.
        bool orient = false;
        for (int c = 0; c < n && !orient; ++c)
          if (p.has_directed(c, a) && c != b && !p.adjacent(c, b)) orient = true;

        // R2: a directed path a -> c -> b.
        for (int c = 0; c < n && !orient; ++c)
          if (p.has_directed(a, c) && p.has_directed(c, b)) orient = true;

        // R3: c -> b and d -> b with a -- c, a -- d and c, d not adjacent.
        for (int c = 0; c < n && !orient; ++c) {
          if (!p.has_directed(c, b) || !p.has_undirected(a, c)) continue;
          for (int d = c + 1; d < n && !orient; ++d)
            if (p.has_directed(d, b) && p.has_undirected(a, d) &&
                !p.adjacent(c, d))
              orient = true;
        }

        if (orient) {
          p.set_directed(a, b);
          changed = true;
        }
      }
    }
  }
}

}  // namespace

Cpdag to_cpdag(const Dag& g) {
  const int n = g.node_count();
  Cpdag p(n);
  for (const auto& [from, to] : g.arcs()) p.set_undirected(from, to);
  for (const auto& [x, z, y] : v_structures(g)) {
    p.set_directed(x, z);
    p.set_directed(y, z);
  }
  meek_closure(p);
  return p;
}

bool same_equivalence_class(const Dag& g1, const Dag& g2) {
  if (g1.node_count() != g2.node_count())
    throw DimensionError("node count mismatch");
  const int n = g1.node_count();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (g1.adjacent(i, j) != g2.adjacent(i, j)) return false;
  return v_structures(g1) == v_structures(g2);
}

int shd(const Cpdag& p1, const Cpdag& p2) {
  if (p1.node_count() != p2.node_count())
    throw DimensionError("node count mismatch");
  const int n = p1.node_count();
  int dist = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Status of the pair: 0 absent, 1 undirected, 2 i->j, 3 j->i.
      auto status = [&](const Cpdag& p) {
        if (p.has_undirected(i, j)) return 1;
        if (p.has_directed(i, j)) return 2;
        if (p.has_directed(j, i)) return 3;
        return 0;
      };
      if (status(p1) != status(p2)) ++dist;
    }
  }
  return dist;
}

int shd(const Dag& g1, const Dag& g2) {
  if (g1.node_count() != g2.node_count())
    throw DimensionError("node count mismatch");
  return shd(to_cpdag(g1), to_cpdag(g2));
}

void for_each_dag(int node_count, const std::function<void(const Dag&)>& fn) {
  if (node_count < 0) throw DimensionError("negative node count");
  if (node_count > kMaxEnumerationNodes)
    throw ResourceLimit("enumeration supports at most " +
                        std::to_string(kMaxEnumerationNodes) + " nodes");
  const int n = node_count;
  const int pairs = n * (n - 1) / 2;
  // Pair status digits: 0 no edge, 1 low -> high, 2 high -> low.
  std::vector<int> digit(pairs, 0);
  std::vector<std::pair<int, int>> pair_nodes;
  pair_nodes.reserve(pairs);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pair_nodes.emplace_back(i, j);

  std::vector<std::pair<int, int>> arcs;
  std::vector<int> indegree(n);
  std::vector<std::uint8_t> placed(n);
  while (true) {
    arcs.clear();
    std::fill(indegree.begin(), indegree.end(), 0);
    for (int k = 0; k < pairs; ++k) {
      if (digit[k] == 0) continue;
      const auto [lo, hi] = pair_nodes[k];
      if (digit[k] == 1)
        arcs.emplace_back(lo, hi);
      else
        arcs.emplace_back(hi, lo);
      ++indegree[arcs.back().second];
    }
    // Inline Kahn filter; the Dag is only materialised for acyclic
    // candidates (cyclic ones dominate for larger n).
    std::fill(placed.begin(), placed.end(), 0);
    int placed_count = 0;
    bool progress = true;
    while (progress) {
      progress = false;
      for (int v = 0; v < n; ++v) {
        if (placed[v] || indegree[v] != 0) continue;
        placed[v] = 1;
        ++placed_count;
        progress = true;
        for (const auto& [from, to] : arcs)
          if (from == v) --indegree[to];
      }
    }
    if (placed_count == n) fn(Dag::from_arcs(n, arcs));

    // Increment the base-3 counter.
    int k = 0;
    while (k < pairs && digit[k] == 2) digit[k++] = 0;
    if (k == pairs) break;
    ++digit[k];
  }
}

std::vector<Dag> enumerate_dags(int node_count) {
  std::vector<Dag> out;
  for_each_dag(node_count, [&](const Dag& g) { out.push_back(g); });
  return out;
}

ArcProbability exact_arc_probability(int node_count) {
  if (node_count < 2) throw DimensionError("need at least two nodes");
  ArcProbability acc;
  for_each_dag(node_count, [&](const Dag& g) {
    ++acc.dag_count;
    if (g.has_arc(0, 1)) ++acc.forward_count;
    if (!g.adjacent(0, 1)) ++acc.absent_count;
  });
  return acc;
}

std::string write_dag_text(const Dag& g,
                           const std::vector<std::string>& names) {
  if (static_cast<int>(names.size()) != g.node_count())
    throw DimensionError("name count does not match node count");
  std::ostringstream out;
  out << "nodes";
  for (const auto& name : names) out << ' ' << name;
  out << '\n';
  for (const auto& [from, to] : g.arcs())
    out << names[from] << " -> " << names[to] << '\n';
  return out.str();
}

NamedDag read_dag_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> names;
  std::unordered_map<std::string, int> index;
  int line_no = 0;
  bool header_seen = false;
  std::vector<std::pair<int, int>> arcs;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line
    if (tok == "#") continue;
    if (!header_seen) {
      if (tok != "nodes")
        throw ParseError("expected `nodes` header", line_no, 1);
      std::string name;
      while (ls >> name) {
        if (index.count(name))
          throw ParseError("duplicate node name `" + name + "`", line_no, 1);
        index[name] = static_cast<int>(names.size());
        names.push_back(name);
      }
      header_seen = true;
      continue;
    }
    std::string arrow, child;
    if (!(ls >> arrow >> child) || arrow != "->")
      throw ParseError("expected `<parent> -> <child>`", line_no, 1);
    std::string extra;
    if (ls >> extra) throw ParseError("trailing tokens", line_no, 1);
    auto pi = index.find(tok);
    auto ci = index.find(child);
    if (pi == index.end() || ci == index.end())
      throw ParseError("arc references undeclared node", line_no, 1);
    arcs.emplace_back(pi->second, ci->second);
  }
  if (!header_seen) throw ParseError("missing `nodes` header", 1, 1);
  Dag g(static_cast<int>(names.size()));
  for (const auto& [from, to] : arcs) g.add_arc(from, to);
  return {std::move(g), std::move(names)};
}

}  // namespace bnsl
