#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bnsl/model.hpp"
#include "oracles.hpp"

using namespace bnsl;

namespace {

std::vector<VariableSchema> binary_schema(int n) {
  std::vector<VariableSchema> schema;
  for (int i = 0; i < n; ++i)
    schema.push_back({"v" + std::to_string(i), {"0", "1"}});
  return schema;
}

DiscreteBn independent_fair_coins(int n) {
  std::vector<Cpt> cpts;
  for (int i = 0; i < n; ++i) {
    ProbMatrix table(1, 2);
    table << 0.5, 0.5;
    cpts.push_back({i, {}, table});
  }
  return DiscreteBn(Dag(n), binary_schema(n), std::move(cpts));
}

}  // namespace

TEST_CASE("posterior-mean fit on the worked example") {
  const auto data = oracle::example_dataset();
  const auto bn = fit_parameters(Dag(2), data, 1.0);

  // (0 + 1/2) / (7 + 1) and (7 + 1/2) / (7 + 1)
  CHECK(bn.cpt(0).table(0, 0) == 0.0625);
  CHECK(bn.cpt(0).table(0, 1) == 0.9375);
  CHECK(bn.cpt(1).table(0, 0) == doctest::Approx(2.5 / 8.0).epsilon(1e-15));
  CHECK(bn.cpt(1).table(0, 1) == doctest::Approx(5.5 / 8.0).epsilon(1e-15));
}

TEST_CASE("unobserved parent configurations fall back to uniform") {
  const auto data = oracle::example_dataset();
  const auto g = Dag::from_arcs(2, {{0, 1}});
  for (auto scheme : {FitScheme::TotalMass, FitScheme::PerCell}) {
    const auto bn = fit_parameters(g, data, 1.0, scheme);
    CHECK(bn.cpt(1).table(0, 0) == 0.5);  // X1 = level 0 never occurs
    CHECK(bn.cpt(1).table(0, 1) == 0.5);
  }
}

TEST_CASE("vanishing alpha recovers maximum-likelihood proportions") {
  const auto data = oracle::example_dataset();
  const auto bn = fit_parameters(Dag(2), data, 1e-12);
  CHECK(bn.cpt(1).table(0, 0) == doctest::Approx(2.0 / 7.0).epsilon(1e-9));
  CHECK(bn.cpt(1).table(0, 1) == doctest::Approx(5.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("fitted rows are normalised and strictly positive") {
  Rng rng(17);
  std::vector<VariableSchema> schema{{"a", {"0", "1", "2"}},
                                     {"b", {"0", "1"}},
                                     {"c", {"0", "1"}}};
  DataMatrix rows(30, 3);
  for (int t = 0; t < 30; ++t)
    for (int i = 0; i < 3; ++i)
      rows(t, i) = static_cast<int>(rng.below(schema[i].cardinality()));
  const Dataset data(schema, rows);
  const auto g = Dag::from_arcs(3, {{0, 2}, {1, 2}});
  for (auto scheme : {FitScheme::TotalMass, FitScheme::PerCell}) {
    const auto bn = fit_parameters(g, data, 1.0, scheme);
    for (int i = 0; i < 3; ++i) {
      const auto& table = bn.cpt(i).table;
      for (Eigen::Index j = 0; j < table.rows(); ++j) {
        CHECK(std::abs(table.row(j).sum() - 1.0) <= 1e-12);
        CHECK((table.row(j).array() > 0.0).all());
      }
    }
  }
}

TEST_CASE("forward sampling determinism and degenerate cases") {
  const auto coins = independent_fair_coins(2);

  const auto empty = forward_sample(coins, 0, 9);
  CHECK(empty.row_count() == 0);
  CHECK(empty.schema() == coins.schema());

  const auto a = forward_sample(coins, 50, 1234);
  const auto b = forward_sample(coins, 50, 1234);
  CHECK(a.rows() == b.rows());
  const auto c = forward_sample(coins, 50, 1235);
  CHECK(a.rows() != c.rows());

  // point-mass tables force one configuration
  ProbMatrix root(1, 2), leaf(2, 2);
  root << 0.0, 1.0;
  leaf << 1.0, 0.0, 0.0, 1.0;  // copies the parent
  const DiscreteBn forced(Dag::from_arcs(2, {{0, 1}}), binary_schema(2),
                          {{0, {}, root}, {1, {0}, leaf}});
  const auto forced_rows = forward_sample(forced, 20, 7);
  for (int t = 0; t < 20; ++t) {
    CHECK(forced_rows.value(t, 0) == 1);
    CHECK(forced_rows.value(t, 1) == 1);
  }
}

TEST_CASE("fair-coin sample matches its distribution at n = 10000") {
  const auto coins = independent_fair_coins(2);
  const auto data = forward_sample(coins, 10000, 20240808);

  const auto t = count_contingency(data, 0, {1});
  const double n00 = static_cast<double>(t.counts(0, 0));
  const double n01 = static_cast<double>(t.counts(0, 1));
  const double n10 = static_cast<double>(t.counts(1, 0));
  const double n11 = static_cast<double>(t.counts(1, 1));
  const double n = 10000.0;

  // marginals within four standard errors of one half
  CHECK(std::abs((n00 + n01) / n - 0.5) < 0.02);
  CHECK(std::abs((n00 + n10) / n - 0.5) < 0.02);

  // chi-square independence statistic below the 0.999 quantile (df = 1)
  const double row0 = n00 + n01, row1 = n10 + n11;
  const double col0 = n00 + n10, col1 = n01 + n11;
  const double chi2 =
      n * std::pow(n00 * n11 - n01 * n10, 2) / (row0 * row1 * col0 * col1);
  CHECK(chi2 < 10.828);
}

TEST_CASE("sampled frequencies recover every cpt cell within five sigma") {
  ProbMatrix root(1, 3), leaf(3, 2);
  root << 0.2, 0.5, 0.3;
  leaf << 0.9, 0.1, 0.4, 0.6, 0.15, 0.85;
  const DiscreteBn bn(
      Dag::from_arcs(2, {{0, 1}}),
      {{"cause", {"a", "b", "c"}}, {"effect", {"0", "1"}}},
      {{0, {}, root}, {1, {0}, leaf}});

  const std::int64_t n = 10000;
  const auto data = forward_sample(bn, n, 5150);
  const auto joint = count_contingency(data, 1, {0});

  for (int j = 0; j < 3; ++j) {
    const double margin = static_cast<double>(joint.margins(j));
    const double p_margin = root(0, j);
    const double se_margin =
        std::sqrt(p_margin * (1 - p_margin) * static_cast<double>(n));
    CHECK(std::abs(margin - p_margin * static_cast<double>(n)) <
          5.0 * se_margin);
    for (int k = 0; k < 2; ++k) {
      const double p = leaf(j, k);
      const double se = std::sqrt(p * (1 - p) * margin);
      CHECK(std::abs(static_cast<double>(joint.counts(j, k)) - p * margin) <=
            5.0 * se + 1e-9);
    }
  }
}

TEST_CASE("log likelihood identities") {
  const auto coins = independent_fair_coins(3);
  const auto data = forward_sample(coins, 500, 99);
  CHECK(log_likelihood(coins, data) ==
        doctest::Approx(-500.0 * 3.0 * std::numbers::ln2).epsilon(1e-9));

  // a point-mass network explains its forced row with probability one
  ProbMatrix point(1, 2);
  point << 0.0, 1.0;
  const DiscreteBn forced(Dag(1), binary_schema(1), {{0, {}, point}});
  DataMatrix row(1, 1);
  row << 1;
  CHECK(log_likelihood(forced, Dataset(binary_schema(1), row)) == 0.0);

  // composition with the fitted example
  const auto example = oracle::example_dataset();
  const auto fitted = fit_parameters(Dag(2), example, 1.0);
  const double expected = 7.0 * std::log(0.9375) +
                          2.0 * std::log(2.5 / 8.0) + 5.0 * std::log(5.5 / 8.0);
  CHECK(log_likelihood(fitted, example) ==
        doctest::Approx(expected).epsilon(1e-12));

  // per-node decomposition
  double by_parts = 0.0;
  for (int i = 0; i < 2; ++i) {
    const auto t = count_contingency(example, i, {});
    for (Eigen::Index k = 0; k < t.counts.cols(); ++k)
      if (t.counts(0, k) > 0)
        by_parts += static_cast<double>(t.counts(0, k)) *
                    std::log(fitted.cpt(i).table(0, k));
  }
  CHECK(log_likelihood(fitted, example) ==
        doctest::Approx(by_parts).epsilon(1e-12));
}

TEST_CASE("parameter counts") {
  CHECK(n_parameters(Dag(5), binary_schema(5)) == 5);

  // eight-node network shaped like the classic chest-clinic example
  const auto g = Dag::from_arcs(8, {{0, 1},   // asia -> tub
                                    {2, 3},   // smoke -> lung
                                    {2, 4},   // smoke -> bronc
                                    {3, 5},   // lung -> either
                                    {1, 5},   // tub -> either
                                    {5, 6},   // either -> xray
                                    {5, 7},   // either -> dysp
                                    {4, 7}}); // bronc -> dysp
  CHECK(n_parameters(g, binary_schema(8)) == 18);

  // chain of three three-level nodes
  std::vector<VariableSchema> ternary;
  for (int i = 0; i < 3; ++i)
    ternary.push_back({"t" + std::to_string(i), {"0", "1", "2"}});
  CHECK(n_parameters(Dag::from_arcs(3, {{0, 1}, {1, 2}}), ternary) == 14);

  // uniform cardinalities: equivalent orientations share the count
  CHECK(n_parameters(Dag::from_arcs(2, {{0, 1}}), binary_schema(2)) ==
        n_parameters(Dag::from_arcs(2, {{1, 0}}), binary_schema(2)));
}

TEST_CASE("schema mismatches are rejected") {
  const auto coins = independent_fair_coins(2);
  std::vector<VariableSchema> other{{"v0", {"0", "1"}}, {"w1", {"0", "1"}}};
  CHECK_THROWS_AS(log_likelihood(coins, Dataset(other, DataMatrix(0, 2))),
                  DimensionError);
}
