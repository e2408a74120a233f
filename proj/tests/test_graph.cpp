#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "bnsl/graph.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

Dag make_dag(int n, const std::vector<std::pair<int, int>>& arcs) {
  return Dag::from_arcs(n, arcs);
}

}  // namespace

TEST_CASE("apply_move basics") {
  const Dag empty3(3);

  const Dag added = apply_move(empty3, {MoveKind::AddArc, 0, 1});
  CHECK(added.arcs() == std::vector<std::pair<int, int>>{{0, 1}});

  const Dag chain = make_dag(3, {{0, 1}, {1, 2}});
  CHECK_THROWS_AS(apply_move(chain, {MoveKind::AddArc, 2, 0}), CycleError);

  const Dag single = make_dag(2, {{0, 1}});
  const Dag reversed = apply_move(single, {MoveKind::ReverseArc, 0, 1});
  CHECK(reversed.arcs() == std::vector<std::pair<int, int>>{{1, 0}});

  CHECK_THROWS_AS(apply_move(single, {MoveKind::AddArc, 0, 1}), InvalidMove);
  CHECK_THROWS_AS(apply_move(single, {MoveKind::DeleteArc, 1, 0}), InvalidMove);
}

TEST_CASE("apply_move then inverse restores the arc set") {
  Rng rng(20240805);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 4;
    Dag g(n);
    for (int a = 0; a < 6; ++a) {
      const int from = static_cast<int>(rng.below(n));
      const int to = static_cast<int>(rng.below(n));
      if (from == to || g.adjacent(from, to) || g.path_exists(to, from))
        continue;
      g.add_arc(from, to);
    }
    // pick a random valid move
    std::vector<Move> valid;
    for (int from = 0; from < n; ++from)
      for (int to = 0; to < n; ++to) {
        if (from == to) continue;
        if (!g.adjacent(from, to) && !g.path_exists(to, from))
          valid.push_back({MoveKind::AddArc, from, to});
        if (g.has_arc(from, to)) {
          valid.push_back({MoveKind::DeleteArc, from, to});
          Dag probe = g;
          probe.remove_arc(from, to);
          if (!probe.path_exists(from, to))
            valid.push_back({MoveKind::ReverseArc, from, to});
        }
      }
    if (valid.empty()) continue;
    const Move m = valid[rng.below(valid.size())];
    const Dag round_trip = apply_move(apply_move(g, m), inverse(m));
    CHECK(round_trip == g);
  }
}

TEST_CASE("topological order is deterministic with index tie-break") {
  CHECK(topological_order(Dag(3)) == std::vector<int>{0, 1, 2});
  CHECK(topological_order(make_dag(3, {{2, 0}, {0, 1}})) ==
        std::vector<int>{2, 0, 1});
  CHECK(topological_order(make_dag(3, {{1, 0}, {2, 0}})) ==
        std::vector<int>{1, 2, 0});
}

TEST_CASE("cpdag of simple patterns") {
  // one arc: both orientations are equivalent
  const auto p1 = to_cpdag(make_dag(2, {{0, 1}}));
  CHECK(p1.directed_edges().empty());
  CHECK(p1.undirected_edges() == std::vector<std::pair<int, int>>{{0, 1}});

  // v-structure: both arcs compelled
  const auto p2 = to_cpdag(make_dag(3, {{0, 1}, {2, 1}}));
  CHECK(p2.undirected_edges().empty());
  CHECK(p2.directed_edges() ==
        std::vector<std::pair<int, int>>{{0, 1}, {2, 1}});

  // chain: no v-structure, all edges reversible
  const auto p3 = to_cpdag(make_dag(3, {{0, 1}, {1, 2}}));
  CHECK(p3.directed_edges().empty());
  CHECK(p3.undirected_edges() ==
        std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("enumeration counts match the recurrence") {
  const auto expected = oracle::labeled_dag_counts(5);
  for (int n = 0; n <= 5; ++n) {
    std::int64_t count = 0;
    for_each_dag(n, [&](const Dag&) { ++count; });
    CHECK(count == expected[n]);
  }
  CHECK(expected[2] == 3);
  CHECK(expected[3] == 25);
  CHECK(expected[4] == 543);
  CHECK(expected[5] == 29281);
  CHECK_THROWS_AS(enumerate_dags(7), ResourceLimit);
}

TEST_CASE("cpdag equals the brute-force consensus pattern for N <= 5") {
  for (int n = 2; n <= 5; ++n) {
    const auto dags = enumerate_dags(n);
    const auto groups = oracle::group_by_class(dags);
    std::set<std::pair<std::vector<std::pair<int, int>>,
                       std::vector<std::pair<int, int>>>>
        distinct_patterns;
    long long checked = 0;
    for (const auto& [key, members] : groups) {
      const auto consensus = oracle::consensus_of(members);
      for (const auto& g : members) {
        const auto pattern = to_cpdag(g);
        const auto directed = pattern.directed_edges();
        const auto undirected = pattern.undirected_edges();
        const bool same =
            oracle::ArcSet(directed.begin(), directed.end()) ==
                consensus.directed &&
            oracle::ArcSet(undirected.begin(), undirected.end()) ==
                consensus.undirected;
        CHECK(same);
        if (!same) return;
        distinct_patterns.insert({directed, undirected});
        ++checked;
      }
    }
    // one pattern per class, every DAG checked
    CHECK(distinct_patterns.size() == groups.size());
    CHECK(checked == static_cast<long long>(dags.size()));
  }
}

TEST_CASE("equivalence, cpdag equality and shd agree pairwise at N = 3") {
  const auto dags = enumerate_dags(3);
  for (const auto& g1 : dags) {
    for (const auto& g2 : dags) {
      const bool same = same_equivalence_class(g1, g2);
      CHECK(same == (to_cpdag(g1) == to_cpdag(g2)));
      CHECK(same == (shd(g1, g2) == 0));
      CHECK(shd(g1, g2) == shd(g2, g1));
    }
  }
}

TEST_CASE("equivalence class examples") {
  CHECK(same_equivalence_class(make_dag(3, {{0, 1}, {1, 2}}),
                               make_dag(3, {{2, 1}, {1, 0}})));
  CHECK_FALSE(same_equivalence_class(make_dag(3, {{0, 1}, {2, 1}}),
                                     make_dag(3, {{0, 1}, {1, 2}})));
  const auto g = make_dag(3, {{0, 2}});
  CHECK(same_equivalence_class(g, g));
  CHECK_THROWS_AS(same_equivalence_class(g, Dag(4)), DimensionError);
}

TEST_CASE("shd worked examples") {
  const auto chain = make_dag(3, {{0, 1}, {1, 2}});
  CHECK(shd(chain, chain) == 0);
  CHECK(shd(Dag(2), make_dag(2, {{0, 1}})) == 1);
  // chain vs v-structure: the classes differ on both pairs
  CHECK(shd(chain, make_dag(3, {{0, 1}, {2, 1}})) == 2);
}

TEST_CASE("exact arc probability by enumeration") {
  const auto p2 = exact_arc_probability(2);
  CHECK(p2.dag_count == 3);
  CHECK(p2.p_forward() == 1.0 / 3.0);
  CHECK(p2.p_absent() == 1.0 / 3.0);

  const auto p3 = exact_arc_probability(3);
  CHECK(p3.dag_count == 25);
  CHECK(p3.forward_count == 8);

  // label symmetry: backward count equals forward count
  for (int n = 2; n <= 4; ++n) {
    const auto p = exact_arc_probability(n);
    const auto backward = p.dag_count - p.forward_count - p.absent_count;
    CHECK(backward == p.forward_count);
    CHECK(2 * p.p_forward() + p.p_absent() == doctest::Approx(1.0).epsilon(1e-12));
  }

  // enumeration converges on the asymptotic formula as n grows
  double previous_error = 1.0;
  for (int n = 3; n <= 5; ++n) {
    const auto p = exact_arc_probability(n);
    const double approx = 0.25 + 0.25 / static_cast<double>(n - 1);
    const double error = std::abs(p.p_forward() - approx);
    CHECK(error < previous_error);
    previous_error = error;
  }
}

TEST_CASE("dag text round trip") {
  const auto g = make_dag(3, {{0, 1}, {2, 1}});
  const std::vector<std::string> names{"rain", "wet", "sprinkler"};
  const auto text = write_dag_text(g, names);
  const auto back = read_dag_text(text);
  CHECK(back.dag == g);
  CHECK(back.names == names);

  CHECK_THROWS_AS(read_dag_text("a -> b\n"), ParseError);
  CHECK_THROWS_AS(read_dag_text("nodes a b\na -> c\n"), ParseError);
  CHECK_THROWS_AS(read_dag_text("nodes a b\na -> b\nb -> a\n"), InvalidMove);
}
