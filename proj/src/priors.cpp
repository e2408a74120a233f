#include "bnsl/priors.hpp"

#include <numbers>

namespace bnsl {

std::string to_string(PriorKind kind) {
  return kind == PriorKind::U ? "u" : "mu";
}

std::optional<PriorKind> parse_prior_kind(const std::string& text) {
  if (text == "u") return PriorKind::U;
  if (text == "mu") return PriorKind::Mu;
  return std::nullopt;
}

double log_prior_ratio(const PriorSpec& prior, const Move& m) {
  if (prior.kind == PriorKind::U) return 0.0;
  switch (m.kind) {
    case MoveKind::AddArc: return -std::numbers::ln2;
    case MoveKind::DeleteArc: return std::numbers::ln2;
    case MoveKind::ReverseArc: return 0.0;
  }
  return 0.0;
}

double log_prior_relative(const PriorSpec& prior, const Dag& g) {
  if (prior.kind == PriorKind::U) return 0.0;
  return -static_cast<double>(g.arc_count()) * std::numbers::ln2;
}

std::pair<double, double> u_marginal_approx(int node_count) {
  if (node_count < 2) throw DimensionError("need at least two nodes");
  const double denom = static_cast<double>(node_count - 1);
  return {0.25 + 0.25 / denom, 0.5 - 0.5 / denom};
}

}  // namespace bnsl
