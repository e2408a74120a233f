#include "bnsl/model.hpp"

#include <cmath>

namespace bnsl {

namespace {

std::int64_t config_count(const std::vector<int>& parents,
                          const std::vector<VariableSchema>& schema) {
  std::int64_t q = 1;
  for (int p : parents) q *= schema.at(p).cardinality();
  return q;
}

}  // namespace

DiscreteBn::DiscreteBn(Dag dag, std::vector<VariableSchema> schema,
                       std::vector<Cpt> cpts)
    : dag_(std::move(dag)), schema_(std::move(schema)), cpts_(std::move(cpts)) {
  const int n = dag_.node_count();
  if (static_cast<int>(schema_.size()) != n ||
      static_cast<int>(cpts_.size()) != n)
    throw DimensionError("schema/CPT count does not match node count");
  for (int i = 0; i < n; ++i) {
    const Cpt& c = cpts_[i];
    if (c.child != i) throw DimensionError("CPT stored under wrong node");
    if (c.parents != dag_.parents(i))
      throw DimensionError("CPT parents do not match graph parents");
    const auto q = config_count(c.parents, schema_);
    if (c.table.rows() != q || c.table.cols() != schema_[i].cardinality())
      throw DimensionError("CPT shape does not match cardinalities");
    for (Eigen::Index j = 0; j < c.table.rows(); ++j) {
      const double row_sum = c.table.row(j).sum();
      if (std::abs(row_sum - 1.0) > 1e-6)
        throw InvalidDistribution("CPT row of `" + schema_[i].name +
                                  "` sums to " + std::to_string(row_sum));
      if ((c.table.row(j).array() < 0.0).any() ||
          (c.table.row(j).array() > 1.0).any())
        throw InvalidDistribution("CPT entry outside [0, 1]");
    }
  }
}

DiscreteBn fit_parameters(const Dag& g, const Dataset& data, double alpha,
                          FitScheme scheme) {
  if (g.node_count() != data.variable_count())
    throw DimensionError("graph and dataset disagree on variable count");
  if (!(alpha > 0.0)) throw DimensionError("alpha must be positive");

  std::vector<Cpt> cpts;
  cpts.reserve(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) {
    const auto t = count_contingency(data, i, g.parents(i));
    const double r = static_cast<double>(t.cardinality);
    const double q = static_cast<double>(t.config_count);
    const double cell = scheme == FitScheme::TotalMass ? alpha / (r * q)
                                                       : alpha;
    Cpt c;
    c.child = i;
    c.parents = t.parents;
    c.table = ((t.counts.cast<double>().array() + cell).colwise() /
               (t.margins.cast<double>().array() + cell * r))
                  .matrix();
    cpts.push_back(std::move(c));
  }
  return DiscreteBn(g, data.schema(), std::move(cpts));
}

Dataset forward_sample(const DiscreteBn& bn, std::int64_t n,
                       std::uint64_t seed) {
  if (n < 0) throw DimensionError("negative sample size");
  const int nvars = bn.node_count();
  const auto order = topological_order(bn.dag());
  Rng rng(seed);

  DataMatrix rows(n, nvars);
  for (std::int64_t t = 0; t < n; ++t) {
    for (int node : order) {
      const Cpt& c = bn.cpt(node);
      std::int64_t j = 0;
      for (int p : c.parents)
        j = j * bn.variable(p).cardinality() + rows(t, p);
      const double u = rng.next_double();
      double cum = 0.0;
      int value = c.table.cols() - 1;  // guard against rounding shortfall
      for (Eigen::Index k = 0; k < c.table.cols(); ++k) {
        cum += c.table(j, k);
        if (u < cum) {
          value = static_cast<int>(k);
          break;
        }
      }
      rows(t, node) = value;
    }
  }
  return Dataset(bn.schema(), std::move(rows));
}

double log_likelihood(const DiscreteBn& bn, const Dataset& data) {
  if (bn.node_count() != data.variable_count())
    throw DimensionError("network and dataset disagree on variable count");
  for (int i = 0; i < bn.node_count(); ++i)
    if (!(bn.variable(i) == data.variable(i)))
      throw DimensionError("schema mismatch at variable `" +
                           data.variable(i).name + "`");

  double total = 0.0;
  for (std::int64_t t = 0; t < data.row_count(); ++t) {
    for (int i = 0; i < bn.node_count(); ++i) {
      const Cpt& c = bn.cpt(i);
      std::int64_t j = 0;
      for (int p : c.parents)
        j = j * bn.variable(p).cardinality() + data.value(t, p);
      total += std::log(c.table(j, data.value(t, i)));
    }
  }
  return total;
}

std::int64_t n_parameters(const Dag& g,
                          const std::vector<VariableSchema>& schema) {
  if (g.node_count() != static_cast<int>(schema.size()))
    throw DimensionError("graph and schema disagree on variable count");
  std::int64_t total = 0;
  for (int i = 0; i < g.node_count(); ++i)
    total += static_cast<std::int64_t>(schema[i].cardinality() - 1) *
             config_count(g.parents(i), schema);
  return total;
}

std::int64_t n_parameters(const DiscreteBn& bn) {
  return n_parameters(bn.dag(), bn.schema());
}

}  // namespace bnsl
