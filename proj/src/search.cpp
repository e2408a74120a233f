#include "bnsl/search.hpp"

#include <cmath>
#include <limits>

namespace bnsl {

namespace {

struct Candidate {
  Move move;
  double delta;
};

// Best strictly-improving move, or nullopt. Enumeration order implements the
// documented tie-break: additions, then deletions, then reversals, each in
// (from, to) order; strict comparison keeps the first best.
std::optional<Candidate> best_move(const Dag& g, const Dataset& data,
                                   const ScoreConfig& cfg,
                                   const PriorSpec& prior,
                                   const SearchOptions& opts,
                                   LocalScoreCache& cache) {
  const int n = g.node_count();
  const int cap = opts.max_parents.value_or(n);
  std::optional<Candidate> best;

  auto consider = [&](const Move& m) {
    const double delta =
        score_delta(g, m, data, cfg, cache) + log_prior_ratio(prior, m);
    if (!best || delta > best->delta) best = Candidate{m, delta};
  };

  for (int from = 0; from < n; ++from)
    for (int to = 0; to < n; ++to) {
      if (from == to || g.adjacent(from, to)) continue;
      if (static_cast<int>(g.parents(to).size()) >= cap) continue;
      if (g.path_exists(to, from)) continue;  // would close a cycle
      consider({MoveKind::AddArc, from, to});
    }

  for (int from = 0; from < n; ++from)
    for (int to = 0; to < n; ++to) {
      if (!g.has_arc(from, to)) continue;
      consider({MoveKind::DeleteArc, from, to});
    }

  for (int from = 0; from < n; ++from)
    for (int to = 0; to < n; ++to) {
      if (!g.has_arc(from, to)) continue;
      if (static_cast<int>(g.parents(from).size()) >= cap) continue;
      Dag probe = g;
      probe.remove_arc(from, to);
      if (probe.path_exists(from, to)) continue;  // another path remains
      consider({MoveKind::ReverseArc, from, to});
    }

  if (best && best->delta > opts.epsilon) return best;
  return std::nullopt;
}

struct ClimbOutcome {
  Dag dag;
  SearchTrace trace;
  double total;
};

ClimbOutcome climb(Dag g, const Dataset& data, const ScoreConfig& cfg,
                   const PriorSpec& prior, const SearchOptions& opts,
                   std::int64_t max_iterations, LocalScoreCache& cache) {
  SearchTrace trace;
  double total =
      network_score(g, data, cfg, cache) + log_prior_relative(prior, g);
  trace.initial_total = total;

  bool improvable = true;
  while (static_cast<std::int64_t>(trace.steps.size()) < max_iterations) {
    const auto cand = best_move(g, data, cfg, prior, opts, cache);
    if (!cand) {
      improvable = false;
      break;
    }
    g = apply_move(g, cand->move);
    total += cand->delta;
    trace.steps.push_back({cand->move, cand->delta, total});
  }
  if (improvable) improvable = best_move(g, data, cfg, prior, opts, cache).has_value();
  trace.status =
      improvable ? SearchStatus::IterationCapped : SearchStatus::Converged;

  // Re-derive the final total from the cache so results compare bit-for-bit
  // with independently computed network scores.
  total = network_score(g, data, cfg, cache) + log_prior_relative(prior, g);
  return {std::move(g), std::move(trace), total};
}

void perturb(Dag& g, const SearchOptions& opts, Rng& rng) {
  const int n = g.node_count();
  if (n < 2) return;
  const int cap = opts.max_parents.value_or(n);
  // n attempted random additions; invalid draws are simply skipped.
  for (int attempt = 0; attempt < n; ++attempt) {
    const int from = static_cast<int>(rng.below(n));
    const int to = static_cast<int>(rng.below(n));
    if (from == to || g.adjacent(from, to)) continue;
    if (static_cast<int>(g.parents(to).size()) >= cap) continue;
    if (g.path_exists(to, from)) continue;
    g.add_arc(from, to);
  }
}

}  // namespace

SearchResult hill_climb(const Dataset& data, const ScoreConfig& cfg,
                        const PriorSpec& prior, const SearchOptions& opts) {
  const int n = data.variable_count();
  if (n < 1) throw DimensionError("dataset has no variables");
  const std::int64_t max_iterations =
      opts.max_iterations > 0 ? opts.max_iterations
                              : static_cast<std::int64_t>(10) * n * n;

  LocalScoreCache cache;
  auto best = climb(Dag(n), data, cfg, prior, opts, max_iterations, cache);

  for (int restart = 1; restart <= opts.restarts; ++restart) {
    Rng rng(Rng::derive(opts.seed, 0x7265u, static_cast<std::uint64_t>(restart)));
    Dag start = best.dag;
    perturb(start, opts, rng);
    auto res = climb(std::move(start), data, cfg, prior, opts, max_iterations,
                     cache);
    if (res.total > best.total) best = std::move(res);
  }

  best.trace.restarts_run = opts.restarts;
  return {std::move(best.dag), std::move(best.trace), best.total};
}

ExhaustiveResult exhaustive_map(const Dataset& data, const ScoreConfig& cfg,
                                const PriorSpec& prior) {
  const int n = data.variable_count();
  if (n < 1) throw DimensionError("dataset has no variables");
  if (n > kMaxExhaustiveNodes)
    throw ResourceLimit("exhaustive search supports at most " +
                        std::to_string(kMaxExhaustiveNodes) + " nodes");

  LocalScoreCache cache;
  std::optional<Dag> best;
  double best_total = -std::numeric_limits<double>::infinity();
  double second_total = -std::numeric_limits<double>::infinity();
  for_each_dag(n, [&](const Dag& g) {
    const double total =
        network_score(g, data, cfg, cache) + log_prior_relative(prior, g);
    if (!best || total > best_total) {
      second_total = best ? best_total : second_total;
      best = g;
      best_total = total;
    } else if (total > second_total) {
      second_total = total;
    }
  });

  ExhaustiveResult out{std::move(*best), best_total, 0.0};
  if (std::isfinite(second_total)) out.tie_gap = best_total - second_total;
  return out;
}

}  // namespace bnsl
