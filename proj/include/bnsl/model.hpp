#pragma once

#include <cstdint>
#include <vector>

#include "bnsl/dataset.hpp"
#include "bnsl/graph.hpp"

namespace bnsl {

// Conditional probability table of one node: row j is the mixed-radix parent
// configuration (first parent most significant), column k the child state.
struct Cpt {
  int child = -1;
  std::vector<int> parents;
  ProbMatrix table;  // q x r, rows sum to 1
};

// A DAG plus one CPT per node. Immutable after construction; construction
// validates the CPTs against the DAG and schema.
class DiscreteBn {
 public:
  DiscreteBn(Dag dag, std::vector<VariableSchema> schema,
             std::vector<Cpt> cpts);

  int node_count() const { return dag_.node_count(); }
  const Dag& dag() const { return dag_; }
  const std::vector<VariableSchema>& schema() const { return schema_; }
  const VariableSchema& variable(int i) const { return schema_.at(i); }
  const Cpt& cpt(int node) const { return cpts_.at(node); }

 private:
  Dag dag_;
  std::vector<VariableSchema> schema_;
  std::vector<Cpt> cpts_;
};

// How the Dirichlet pseudo counts of the fit are allocated: TotalMass spreads
// an imaginary sample of size alpha as alpha/(r*q) per cell; PerCell puts
// alpha in every cell directly.
enum class FitScheme { TotalMass, PerCell };

// Posterior-mean point estimates; rows with no observations fall back to the
// uniform distribution. alpha must be positive.
DiscreteBn fit_parameters(const Dag& g, const Dataset& data, double alpha,
                          FitScheme scheme = FitScheme::TotalMass);

// n independent rows drawn in topological order; the seed fully determines
// the output.
Dataset forward_sample(const DiscreteBn& bn, std::int64_t n,
                       std::uint64_t seed);

double log_likelihood(const DiscreteBn& bn, const Dataset& data);

std::int64_t n_parameters(const Dag& g,
                          const std::vector<VariableSchema>& schema);
std::int64_t n_parameters(const DiscreteBn& bn);

}  // namespace bnsl
