#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bnsl/model.hpp"
#include "bnsl/search.hpp"

namespace bnsl {

// One scoring strategy: a score, a graph prior and (for the Dirichlet
// scores) an imaginary sample size. Parsed from `score[:prior[:alpha]]`,
// e.g. `bds:mu:1` or plain `bic`.
struct BenchCell {
  ScoreConfig score;
  PriorSpec prior;
  std::string id;
};

BenchCell parse_bench_cell(const std::string& text);

struct BenchmarkPlan {
  std::vector<double> ratios{0.1, 0.2, 0.5, 1.0, 2.0, 5.0};  // n / p
  int replicates = 20;
  std::int64_t test_size = 10000;
  std::vector<BenchCell> cells;
  std::uint64_t seed = 0;
  int max_parents = 8;
  std::int64_t min_training_rows = 10;  // clamp for degenerate ratios
  double fit_alpha = 1.0;               // parameter-learning pseudo mass
  int threads = 0;                      // 0 = hardware concurrency
};

struct BenchmarkRecord {
  int cell = 0;
  int ratio_index = 0;
  int replicate = 0;
  std::int64_t training_rows = 0;
  int shd_to_reference = 0;
  int arcs_learned = 0;
  double arcs_ratio = 0.0;     // arcs_learned / |A_ref|
  double predictive_ll = 0.0;  // on the fresh test sample
  double wall_seconds = 0.0;   // not written to result files
  bool failed = false;
  std::string error;
};

struct BenchmarkResults {
  BenchmarkPlan plan;
  int reference_arcs = 0;
  std::int64_t reference_parameters = 0;
  std::vector<BenchmarkRecord> records;  // fixed (ratio, replicate, cell) order

  // Mean over the non-failed replicates of one (cell, ratio) pair.
  std::optional<double> mean_shd(int cell, int ratio_index) const;
  std::optional<double> mean_arcs_ratio(int cell, int ratio_index) const;
  std::optional<double> mean_predictive_ll(int cell, int ratio_index) const;
};

// Samples training/test data from the reference network, learns one DAG per
// cell and replicate, and evaluates it. Replicate seeds are derived from the
// master seed by fixed splitting, so results are a pure function of the plan.
BenchmarkResults run_benchmark(const DiscreteBn& reference,
                               const BenchmarkPlan& plan);

// Writes raw.csv plus shd.md / arcs.md / loglik.md into out_dir. Output is
// byte-stable for a fixed plan; wall-clock times are deliberately omitted.
void emit_tables(const BenchmarkResults& results, const std::string& out_dir);

std::string raw_csv(const BenchmarkResults& results);

}  // namespace bnsl
