// Test-only reference computations, kept independent of the library's
// implementation paths: rising-factorial logs instead of lgamma, Robinson's
// recurrence for DAG counts, and consensus patterns from brute-force
// equivalence grouping.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace oracle {

// ln Gamma(a + n) - ln Gamma(a) as a plain sum of logs.
inline double log_rising(double a, std::int64_t n) {
  double total = 0.0;
  for (std::int64_t t = 0; t < n; ++t) total += std::log(a + static_cast<double>(t));
  return total;
}

// Bayesian-Dirichlet local score with one pseudo count per cell, summed over
// the rows with observations.
inline double bd_local(const std::vector<std::vector<std::int64_t>>& counts,
                       double cell_alpha) {
  double total = 0.0;
  const double r = counts.empty() ? 0.0 : static_cast<double>(counts[0].size());
  for (const auto& row : counts) {
    std::int64_t margin = 0;
    for (auto c : row) margin += c;
    if (margin == 0) continue;
    total -= log_rising(r * cell_alpha, margin);
    for (auto c : row) total += log_rising(cell_alpha, c);
  }
  return total;
}

// Labeled-DAG counts a(n) via the alternating recurrence
// a(n) = sum_k (-1)^(k+1) C(n,k) 2^(k(n-k)) a(n-k).
inline std::vector<std::int64_t> labeled_dag_counts(int up_to) {
  std::vector<std::int64_t> a(up_to + 1, 0);
  a[0] = 1;
  std::vector<std::vector<std::int64_t>> choose(up_to + 1,
                                                std::vector<std::int64_t>(up_to + 1, 0));
  for (int n = 0; n <= up_to; ++n) {
    choose[n][0] = 1;
    for (int k = 1; k <= n; ++k)
      choose[n][k] = choose[n - 1][k - 1] + (k <= n - 1 ? choose[n - 1][k] : 0);
  }
  for (int n = 1; n <= up_to; ++n) {
    std::int64_t total = 0;
    for (int k = 1; k <= n; ++k) {
      const std::int64_t term =
          choose[n][k] * (std::int64_t{1} << (k * (n - k))) * a[n - k];
      total += (k % 2 == 1) ? term : -term;
    }
    a[n] = total;
  }
  return a;
}

using Arc = std::pair<int, int>;
using ArcSet = std::set<Arc>;

inline ArcSet arcs_of(const bnsl::Dag& g) {
  const auto list = g.arcs();
  return ArcSet(list.begin(), list.end());
}

inline std::set<Arc> skeleton_of(const ArcSet& arcs) {
  std::set<Arc> out;
  for (const auto& [a, b] : arcs) out.insert({std::min(a, b), std::max(a, b)});
  return out;
}

inline std::set<std::array<int, 3>> v_structs_of(const ArcSet& arcs, int n) {
  std::set<std::array<int, 3>> out;
  auto adjacent = [&](int a, int b) {
    return arcs.count({a, b}) || arcs.count({b, a});
  };
  for (int z = 0; z < n; ++z) {
    std::vector<int> parents;
    for (int p = 0; p < n; ++p)
      if (arcs.count({p, z})) parents.push_back(p);
    for (std::size_t a = 0; a < parents.size(); ++a)
      for (std::size_t b = a + 1; b < parents.size(); ++b)
        if (!adjacent(parents[a], parents[b]))
          out.insert({parents[a], z, parents[b]});
  }
  return out;
}

struct ClassKey {
  std::set<Arc> skeleton;
  std::set<std::array<int, 3>> v_structs;
  bool operator<(const ClassKey& other) const {
    if (skeleton != other.skeleton) return skeleton < other.skeleton;
    return v_structs < other.v_structs;
  }
};

inline ClassKey class_key(const bnsl::Dag& g) {
  const auto arcs = arcs_of(g);
  return {skeleton_of(arcs), v_structs_of(arcs, g.node_count())};
}

// Consensus pattern of one equivalence class: an edge keeps its direction iff
// every member orients it the same way.
struct ConsensusPattern {
  std::set<Arc> directed;
  std::set<Arc> undirected;  // stored with first < second
};

inline ConsensusPattern consensus_of(const std::vector<bnsl::Dag>& members) {
  ConsensusPattern out;
  const auto skel = skeleton_of(arcs_of(members.front()));
  for (const auto& [a, b] : skel) {
    bool all_forward = true, all_backward = true;
    for (const auto& g : members) {
      if (!g.has_arc(a, b)) all_forward = false;
      if (!g.has_arc(b, a)) all_backward = false;
    }
    if (all_forward)
      out.directed.insert({a, b});
    else if (all_backward)
      out.directed.insert({b, a});
    else
      out.undirected.insert({a, b});
  }
  return out;
}

inline std::map<ClassKey, std::vector<bnsl::Dag>> group_by_class(
    const std::vector<bnsl::Dag>& dags) {
  std::map<ClassKey, std::vector<bnsl::Dag>> groups;
  for (const auto& g : dags) groups[class_key(g)].push_back(g);
  return groups;
}

// The seven-row two-variable dataset behind the worked score examples:
// level 0 of the first variable never occurs; the second variable splits 2/5.
inline bnsl::Dataset example_dataset() {
  std::vector<bnsl::VariableSchema> schema{{"X1", {"1", "2"}},
                                           {"X2", {"1", "2"}}};
  bnsl::DataMatrix rows(7, 2);
  rows << 1, 0,
          1, 0,
          1, 1,
          1, 1,
          1, 1,
          1, 1,
          1, 1;
  return bnsl::Dataset(std::move(schema), std::move(rows));
}

}  // namespace oracle
