#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

enum class ScoreKind { Bic, Bdeu, Bds, K2 };

std::string to_string(ScoreKind kind);
std::optional<ScoreKind> parse_score_kind(const std::string& text);

struct ScoreConfig {
  ScoreKind kind = ScoreKind::Bdeu;
  double alpha = 1.0;  // imaginary sample size; ignored by BIC and K2
};

// Log marginal likelihood of one node given its parents, Dirichlet pseudo
// counts alpha / (r * q) per cell. Parent configurations with no observations
// contribute exactly zero.
double log_bdeu_local(const ContingencyTable& t, double alpha);

// Same family, but the pseudo count mass is spread only over the observed
// parent configurations: alpha / (r * q_obs) per cell, zero elsewhere.
double log_bds_local(const ContingencyTable& t, double alpha);

// Pseudo count 1 per cell.
double log_k2_local(const ContingencyTable& t);

// Penalised multinomial log likelihood with (r - 1) * q free parameters;
// higher is better, matching the log-marginal-likelihood sign convention.
double log_bic_local(const ContingencyTable& t, std::int64_t sample_size);

// Total Dirichlet mass the score actually places on observed cells. For the
// sparse variant this is alpha whenever anything was observed: the per-cell
// mass alpha/(r*q_obs) is summed over exactly r*q_obs cells.
double effective_imaginary_sample_size(ScoreKind kind,
                                       const ContingencyTable& t,
                                       double alpha);

double local_score(const Dataset& data, int child,
                   const std::vector<int>& parents, const ScoreConfig& cfg);

// Store for local scores keyed by (child, parent set). Parent order does not
// matter; keys are canonicalised by sorting. One cache serves exactly one
// (dataset, config) pair; confine it to a single search run or guard it
// externally when sharing.
class LocalScoreCache {
 public:
  std::optional<double> lookup(int child, std::span<const int> parents) const;
  void insert(int child, std::span<const int> parents, double value);
  std::size_t size() const { return entries_.size(); }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<int>& key) const;
  };
  static std::vector<int> make_key(int child, std::span<const int> parents);
  std::unordered_map<std::vector<int>, double, KeyHash> entries_;
};

double cached_local_score(const Dataset& data, const ScoreConfig& cfg,
                          int child, const std::vector<int>& parents,
                          LocalScoreCache& cache);

double network_score(const Dag& g, const Dataset& data, const ScoreConfig& cfg,
                     LocalScoreCache& cache);

// Score difference of applying m to g, re-scoring only the endpoints whose
// parent sets change.
double score_delta(const Dag& g, const Move& m, const Dataset& data,
                   const ScoreConfig& cfg, LocalScoreCache& cache);

}  // namespace bnsl
