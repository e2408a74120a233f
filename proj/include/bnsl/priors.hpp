#pragma once

#include <optional>
#include <string>
#include <utility>

#include "bnsl/graph.hpp"

namespace bnsl {

// U: uniform over DAGs, every move ratio is 1. Mu: independent per-arc prior
// with P(i->j) = P(j->i) = 1/4 and P(no edge) = 1/2, so only the arc count
// matters and every ratio is a power of 2.
enum class PriorKind { U, Mu };

std::string to_string(PriorKind kind);
std::optional<PriorKind> parse_prior_kind(const std::string& text);

struct PriorSpec {
  PriorKind kind = PriorKind::U;
};

// Log of P(G') / P(G) where G' = m applied to G. Exact and O(1) for both
// priors: 0 for U; -ln 2 / +ln 2 / 0 for add / delete / reverse under Mu.
double log_prior_ratio(const PriorSpec& prior, const Move& m);

// Log prior of g relative to the empty graph on the same nodes:
// -|A| * ln 2 under Mu, 0 under U.
double log_prior_relative(const PriorSpec& prior, const Dag& g);

// Marginal arc probabilities implied by the uniform-over-DAGs prior,
// (p_forward, p_absent) = (1/4 + 1/(4(N-1)), 1/2 - 1/(2(N-1))).
std::pair<double, double> u_marginal_approx(int node_count);

}  // namespace bnsl
