#include "bnsl/scores.hpp"

#include <algorithm>
#include <cmath>

namespace bnsl {

std::string to_string(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::Bic: return "bic";
    case ScoreKind::Bdeu: return "bdeu";
    case ScoreKind::Bds: return "bds";
    case ScoreKind::K2: return "k2";
  }
  return "?";
}

std::optional<ScoreKind> parse_score_kind(const std::string& text) {
  if (text == "bic") return ScoreKind::Bic;
  if (text == "bdeu") return ScoreKind::Bdeu;
  if (text == "bds") return ScoreKind::Bds;
  if (text == "k2") return ScoreKind::K2;
  return std::nullopt;
}

namespace {

// Sum over observed parent configurations of
//   lgamma(r*a) - lgamma(r*a + n_j) + sum_k [lgamma(a + n_jk) - lgamma(a)]
// with per-cell pseudo count a. Rows with n_j = 0 cancel term by term, so the
// loop skips them and the result is exact for empty rows.
double log_bd_observed_rows(const ContingencyTable& t, double cell_alpha) {
  const double r = static_cast<double>(t.cardinality);
  const double lg_row = std::lgamma(r * cell_alpha);
  const double lg_cell = std::lgamma(cell_alpha);
  double total = 0.0;
  for (Eigen::Index j = 0; j < t.counts.rows(); ++j) {
    const auto n_j = t.margins(j);
    if (n_j == 0) continue;
    total += lg_row - std::lgamma(r * cell_alpha + static_cast<double>(n_j));
    for (Eigen::Index k = 0; k < t.counts.cols(); ++k) {
      const auto n_jk = t.counts(j, k);
      if (n_jk == 0) continue;  // lgamma(a + 0) - lgamma(a) = 0
      total += std::lgamma(cell_alpha + static_cast<double>(n_jk)) - lg_cell;
    }
  }
  return total;
}

void require_positive_alpha(double alpha) {
  if (!(alpha > 0.0)) throw DimensionError("alpha must be positive");
}

}  // namespace

double log_bdeu_local(const ContingencyTable& t, double alpha) {
  require_positive_alpha(alpha);
  const double cell_alpha =
      alpha / (static_cast<double>(t.cardinality) *
               static_cast<double>(t.config_count));
  return log_bd_observed_rows(t, cell_alpha);
}

double log_bds_local(const ContingencyTable& t, double alpha) {
  require_positive_alpha(alpha);
  if (t.observed_config_count == 0) return 0.0;
  const double cell_alpha =
      alpha / (static_cast<double>(t.cardinality) *
               static_cast<double>(t.observed_config_count));
  return log_bd_observed_rows(t, cell_alpha);
}

double log_k2_local(const ContingencyTable& t) {
  return log_bd_observed_rows(t, 1.0);
}

double log_bic_local(const ContingencyTable& t, std::int64_t sample_size) {
  double loglik = 0.0;
  for (Eigen::Index j = 0; j < t.counts.rows(); ++j) {
    const auto n_j = t.margins(j);
    if (n_j == 0) continue;
    for (Eigen::Index k = 0; k < t.counts.cols(); ++k) {
      const auto n_jk = t.counts(j, k);
      if (n_jk == 0) continue;
      loglik += static_cast<double>(n_jk) *
                std::log(static_cast<double>(n_jk) / static_cast<double>(n_j));
    }
  }
  double penalty = 0.0;
  if (sample_size >= 1) {
    const double dims = static_cast<double>(t.cardinality - 1) *
                        static_cast<double>(t.config_count);
    penalty = 0.5 * dims * std::log(static_cast<double>(sample_size));
  }
  return loglik - penalty;
}

double effective_imaginary_sample_size(ScoreKind kind,
                                       const ContingencyTable& t,
                                       double alpha) {
  switch (kind) {
    case ScoreKind::Bdeu:
      // q_obs of the q rows carry mass, alpha/q each.
      return alpha * static_cast<double>(t.observed_config_count) /
             static_cast<double>(t.config_count);
    case ScoreKind::Bds:
      // alpha/(r*q_obs) per cell over r*q_obs cells: the factors cancel
      // algebraically, so the mass is alpha whenever anything was observed.
      return t.observed_config_count > 0 ? alpha : 0.0;
    case ScoreKind::K2:
      return static_cast<double>(t.cardinality) *
             static_cast<double>(t.observed_config_count);
    case ScoreKind::Bic:
      return 0.0;
  }
  return 0.0;
}

double local_score(const Dataset& data, int child,
                   const std::vector<int>& parents, const ScoreConfig& cfg) {
  const auto t = count_contingency(data, child, parents);
  switch (cfg.kind) {
    case ScoreKind::Bic: return log_bic_local(t, data.row_count());
    case ScoreKind::Bdeu: return log_bdeu_local(t, cfg.alpha);
    case ScoreKind::Bds: return log_bds_local(t, cfg.alpha);
    case ScoreKind::K2: return log_k2_local(t);
  }
  throw DimensionError("unknown score kind");
}

std::size_t LocalScoreCache::KeyHash::operator()(
    const std::vector<int>& key) const {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (int v : key) {
    h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<int> LocalScoreCache::make_key(int child,
                                           std::span<const int> parents) {
  std::vector<int> key;
  key.reserve(parents.size() + 1);
  key.push_back(child);
  key.insert(key.end(), parents.begin(), parents.end());
  std::sort(key.begin() + 1, key.end());
  return key;
}

std::optional<double> LocalScoreCache::lookup(
    int child, std::span<const int> parents) const {
  auto it = entries_.find(make_key(child, parents));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void LocalScoreCache::insert(int child, std::span<const int> parents,
                             double value) {
  entries_.emplace(make_key(child, parents), value);
}

double cached_local_score(const Dataset& data, const ScoreConfig& cfg,
                          int child, const std::vector<int>& parents,
                          LocalScoreCache& cache) {
  if (auto hit = cache.lookup(child, parents)) return *hit;
  const double value = local_score(data, child, parents, cfg);
  cache.insert(child, parents, value);
  return value;
}

double network_score(const Dag& g, const Dataset& data, const ScoreConfig& cfg,
                     LocalScoreCache& cache) {
  if (g.node_count() != data.variable_count())
    throw DimensionError("graph and dataset disagree on variable count");
  double total = 0.0;
  for (int i = 0; i < g.node_count(); ++i)
    total += cached_local_score(data, cfg, i, g.parents(i), cache);
  return total;
}

double score_delta(const Dag& g, const Move& m, const Dataset& data,
                   const ScoreConfig& cfg, LocalScoreCache& cache) {
  if (g.node_count() != data.variable_count())
    throw DimensionError("graph and dataset disagree on variable count");

  auto without = [](std::vector<int> v, int x) {
    v.erase(std::remove(v.begin(), v.end(), x), v.end());
    return v;
  };
  auto with = [](std::vector<int> v, int x) {
    v.push_back(x);
    return v;
  };
  auto rescore = [&](int child, const std::vector<int>& old_parents,
                     const std::vector<int>& new_parents) {
    return cached_local_score(data, cfg, child, new_parents, cache) -
           cached_local_score(data, cfg, child, old_parents, cache);
  };

  switch (m.kind) {
    case MoveKind::AddArc: {
      if (g.adjacent(m.from, m.to)) throw InvalidMove("nodes already adjacent");
      const auto pa = g.parents(m.to);
      return rescore(m.to, pa, with(pa, m.from));
    }
    case MoveKind::DeleteArc: {
      if (!g.has_arc(m.from, m.to)) throw InvalidMove("arc not present");
      const auto pa = g.parents(m.to);
      return rescore(m.to, pa, without(pa, m.from));
    }
    case MoveKind::ReverseArc: {
      if (!g.has_arc(m.from, m.to)) throw InvalidMove("arc not present");
      const auto pa_to = g.parents(m.to);
      const auto pa_from = g.parents(m.from);
      return rescore(m.to, pa_to, without(pa_to, m.from)) +
             rescore(m.from, pa_from, with(pa_from, m.to));
    }
  }
  throw InvalidMove("unknown move kind");
}

}  // namespace bnsl
