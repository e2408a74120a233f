#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bnsl/priors.hpp"
#include "bnsl/scores.hpp"

namespace bnsl {

struct SearchOptions {
  std::optional<int> max_parents;  // no cap when unset
  std::int64_t max_iterations = 0;  // accepted moves; 0 selects 10 * N^2
  double epsilon = 0.0;             // minimum accepted improvement, strict
  int restarts = 0;
  std::uint64_t seed = 0;           // drives restart perturbations only
};

struct TraceStep {
  Move move;
  double delta = 0.0;  // includes the log prior ratio
  double total = 0.0;  // running score + relative log prior
};

enum class SearchStatus { Converged, IterationCapped };

struct SearchTrace {
  double initial_total = 0.0;
  std::vector<TraceStep> steps;
  SearchStatus status = SearchStatus::Converged;
  int restarts_run = 0;
};

struct SearchResult {
  Dag dag;
  SearchTrace trace;  // trace of the climb that produced `dag`
  double total = 0.0;  // log score + log prior relative to the empty graph
};

// Greedy hill climbing over single-arc moves, starting from the empty graph.
// Each step applies the best move whose score delta plus log prior ratio
// strictly exceeds epsilon; ties are broken by move kind (add < delete <
// reverse), then from-index, then to-index, so runs are fully deterministic.
// Restarts perturb the incumbent with seeded random arc additions, re-climb
// and keep the best result.
SearchResult hill_climb(const Dataset& data, const ScoreConfig& cfg,
                        const PriorSpec& prior, const SearchOptions& opts = {});

struct ExhaustiveResult {
  Dag best;
  double best_total = 0.0;
  // Margin over the runner-up total; 0 when the optimum is tied.
  double tie_gap = 0.0;
};

inline constexpr int kMaxExhaustiveNodes = 5;

// Global maximiser of log score + relative log prior over every labeled DAG.
// Intended as a test oracle; throws ResourceLimit above kMaxExhaustiveNodes.
ExhaustiveResult exhaustive_map(const Dataset& data, const ScoreConfig& cfg,
                                const PriorSpec& prior);

}  // namespace bnsl
