// Command-line front end: learn / score / sample / shd / cpdag / loglik /
// benchmark / enumerate. Thin adapters over the library; all diagnostics go
// to stderr, results to stdout or the requested files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>

#include "bnsl/bench.hpp"
#include "bnsl/netio.hpp"

namespace {

using namespace bnsl;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open `" + path + "`");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& given) {
  if (given) return *given;
  std::random_device rd;
  const std::uint64_t seed =
      (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed " << seed << "\n";  // rerun with --seed to reproduce
  return seed;
}

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

ScoreKind require_score_kind(const std::string& text) {
  const auto kind = parse_score_kind(text);
  if (!kind)
    throw CLI::ValidationError("--score", "unknown score `" + text + "`");
  return *kind;
}

PriorKind require_prior_kind(const std::string& text) {
  const auto kind = parse_prior_kind(text);
  if (!kind)
    throw CLI::ValidationError("--prior", "unknown prior `" + text + "`");
  return *kind;
}

// Renumbers the named DAG's nodes to the column order of `names`; the name
// sets must match exactly.
Dag align_to(const NamedDag& named, const std::vector<std::string>& names) {
  if (named.names.size() != names.size())
    throw DimensionError("graph and dataset disagree on variable count");
  std::unordered_map<std::string, int> target;
  for (std::size_t i = 0; i < names.size(); ++i)
    target[names[i]] = static_cast<int>(i);
  std::vector<int> remap(named.names.size());
  for (std::size_t i = 0; i < named.names.size(); ++i) {
    auto it = target.find(named.names[i]);
    if (it == target.end())
      throw DimensionError("graph node `" + named.names[i] +
                           "` is not a dataset variable");
    remap[i] = it->second;
  }
  std::vector<std::pair<int, int>> arcs;
  for (const auto& [from, to] : named.dag.arcs())
    arcs.emplace_back(remap[from], remap[to]);
  return Dag::from_arcs(static_cast<int>(names.size()), arcs);
}

std::vector<std::string> dataset_names(const Dataset& data) {
  std::vector<std::string> names;
  names.reserve(data.variable_count());
  for (const auto& var : data.schema()) names.push_back(var.name);
  return names;
}

// Single-level variables are legal but inert; worth a note on stderr.
void warn_degenerate_variables(const Dataset& data) {
  for (const auto& var : data.schema())
    if (var.cardinality() == 1)
      std::cerr << "warning: variable `" << var.name
                << "` has a single level\n";
}

struct CommonLearnFlags {
  std::string data_path;
  std::string schema_path;
  std::string score = "bdeu";
  std::string prior = "u";
  double alpha = 1.0;
};

int cmd_learn(const CommonLearnFlags& flags, std::optional<int> max_parents,
              int restarts, const std::optional<std::uint64_t>& seed,
              const std::string& trace_path, const std::string& out_path) {
  ScoreConfig cfg{require_score_kind(flags.score), flags.alpha};
  PriorSpec prior{require_prior_kind(flags.prior)};

  const auto data =
      flags.schema_path.empty()
          ? load_csv(flags.data_path)
          : load_csv(flags.data_path, std::optional(flags.schema_path));
  warn_degenerate_variables(data);

  SearchOptions opts;
  opts.max_parents = max_parents;
  opts.restarts = restarts;
  opts.seed = restarts > 0 ? resolve_seed(seed) : seed.value_or(0);

  const auto result = hill_climb(data, cfg, prior, opts);

  const auto text = write_dag_text(result.dag, dataset_names(data));
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw FormatError("cannot write `" + out_path + "`");
    out << text;
  }

  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw FormatError("cannot write `" + trace_path + "`");
    out << "step,move,from,to,delta,total\n";
    const auto& names = data.schema();
    for (std::size_t k = 0; k < result.trace.steps.size(); ++k) {
      const auto& step = result.trace.steps[k];
      const char* kind = step.move.kind == MoveKind::AddArc      ? "add"
                         : step.move.kind == MoveKind::DeleteArc ? "delete"
                                                                 : "reverse";
      out << k + 1 << ',' << kind << ',' << names[step.move.from].name << ','
          << names[step.move.to].name << ',' << format_score(step.delta) << ','
          << format_score(step.total) << '\n';
    }
    out << "# status: "
        << (result.trace.status == SearchStatus::Converged ? "converged"
                                                           : "iteration-capped")
        << ", final total " << format_score(result.total) << '\n';
  }
  return kExitOk;
}

int cmd_score(const CommonLearnFlags& flags, const std::string& dag_path) {
  ScoreConfig cfg{require_score_kind(flags.score), flags.alpha};

  const auto data =
      flags.schema_path.empty()
          ? load_csv(flags.data_path)
          : load_csv(flags.data_path, std::optional(flags.schema_path));
  warn_degenerate_variables(data);
  const auto named = read_dag_text(slurp(dag_path));
  const auto g = align_to(named, dataset_names(data));
  LocalScoreCache cache;
  double total = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    const auto parents = g.parents(i);
    const double value = cached_local_score(data, cfg, i, parents, cache);
    total += value;
    std::cout << "node " << data.variable(i).name << " parents";
    if (parents.empty()) std::cout << " -";
    for (int p : parents) std::cout << ' ' << data.variable(p).name;
    std::cout << " score " << format_score(value) << '\n';
  }
  std::cout << "total " << format_score(total) << '\n';
  return kExitOk;
}

int cmd_sample(const std::string& net_path, std::int64_t n,
               const std::optional<std::uint64_t>& seed,
               const std::string& out_path) {
  const auto bn = read_network_file(net_path);
  const auto data = forward_sample(bn, n, resolve_seed(seed));
  if (out_path.empty())
    std::cout << to_csv(data);
  else
    write_csv(data, out_path);
  return kExitOk;
}

int cmd_shd(const std::string& a_path, const std::string& b_path) {
  const auto a = read_dag_text(slurp(a_path));
  const auto b = read_dag_text(slurp(b_path));
  std::cout << shd(a.dag, align_to(b, a.names)) << '\n';
  return kExitOk;
}

int cmd_cpdag(const std::string& dag_path) {
  const auto named = read_dag_text(slurp(dag_path));
  const auto pattern = to_cpdag(named.dag);
  std::cout << "nodes";
  for (const auto& name : named.names) std::cout << ' ' << name;
  std::cout << '\n';
  for (const auto& [from, to] : pattern.directed_edges())
    std::cout << named.names[from] << " -> " << named.names[to] << '\n';
  for (const auto& [a, b] : pattern.undirected_edges())
    std::cout << named.names[a] << " -- " << named.names[b] << '\n';
  return kExitOk;
}

int cmd_loglik(const std::string& net_path, const std::string& data_path) {
  const auto bn = read_network_file(net_path);
  const auto data = load_csv_with_schema(data_path, bn.schema());
  std::cout << format_score(log_likelihood(bn, data)) << '\n';
  return kExitOk;
}

int cmd_benchmark(const std::string& net_path, const std::string& ratios,
                  int replicates, const std::string& cells,
                  std::int64_t test_size,
                  const std::optional<std::uint64_t>& seed,
                  const std::string& out_dir, int max_parents, int threads) {
  const auto reference = read_network_file(net_path);

  BenchmarkPlan plan;
  plan.ratios.clear();
  std::istringstream rs(ratios);
  std::string part;
  while (std::getline(rs, part, ',')) {
    char* end = nullptr;
    const double r = std::strtod(part.c_str(), &end);
    if (end == part.c_str() || *end != '\0' || !(r > 0))
      throw FormatError("bad ratio `" + part + "`");
    plan.ratios.push_back(r);
  }
  std::istringstream cs(cells);
  while (std::getline(cs, part, ','))
    plan.cells.push_back(parse_bench_cell(part));
  plan.replicates = replicates;
  plan.test_size = test_size;
  plan.seed = resolve_seed(seed);
  plan.max_parents = max_parents;
  plan.threads = threads;

  const auto results = run_benchmark(reference, plan);
  emit_tables(results, out_dir);
  std::cout << "wrote " << out_dir << "/raw.csv, shd.md, arcs.md, loglik.md\n";
  return kExitOk;
}

int cmd_enumerate(int n, bool arc_prob) {
  if (arc_prob) {
    const auto prob = exact_arc_probability(n);
    std::cout << "dags " << prob.dag_count << '\n';
    std::cout << "p_forward " << prob.forward_count << '/' << prob.dag_count
              << " = " << format_score(prob.p_forward()) << '\n';
    std::cout << "p_absent " << prob.absent_count << '/' << prob.dag_count
              << " = " << format_score(prob.p_absent()) << '\n';
  } else {
    std::int64_t count = 0;
    for_each_dag(n, [&](const Dag&) { ++count; });
    std::cout << "dags " << count << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Score-based structure learning for discrete Bayesian networks"};
  app.require_subcommand(1);

  CommonLearnFlags learn_flags;
  std::optional<int> learn_max_parents;
  int learn_restarts = 0;
  std::optional<std::uint64_t> learn_seed;
  std::string learn_trace, learn_out;
  auto* learn = app.add_subcommand("learn", "Hill-climb a DAG from CSV data");
  learn->add_option("--data", learn_flags.data_path, "training CSV")
      ->required();
  learn->add_option("--schema", learn_flags.schema_path,
                    "schema file fixing level sets");
  learn->add_option("--score", learn_flags.score, "bic|bdeu|bds|k2");
  learn->add_option("--prior", learn_flags.prior, "u|mu");
  learn->add_option("--alpha", learn_flags.alpha, "imaginary sample size");
  learn->add_option("--max-parents", learn_max_parents, "parent-count cap");
  learn->add_option("--restarts", learn_restarts, "random restarts");
  learn->add_option("--seed", learn_seed, "seed for restart perturbations");
  learn->add_option("--trace", learn_trace, "write per-move trace CSV here");
  learn->add_option("--out", learn_out, "write the DAG here (default stdout)");

  CommonLearnFlags score_flags;
  std::string score_dag;
  auto* score = app.add_subcommand("score", "Score a DAG against CSV data");
  score->add_option("--dag", score_dag, "DAG text file")->required();
  score->add_option("--data", score_flags.data_path, "CSV data")->required();
  score->add_option("--schema", score_flags.schema_path, "schema file");
  score->add_option("--score", score_flags.score, "bic|bdeu|bds|k2");
  score->add_option("--alpha", score_flags.alpha, "imaginary sample size");

  std::string sample_net, sample_out;
  std::int64_t sample_n = 0;
  std::optional<std::uint64_t> sample_seed;
  auto* sample = app.add_subcommand("sample", "Forward-sample a network");
  sample->add_option("--net", sample_net, "network file (.bif or native)")
      ->required();
  sample->add_option("--n", sample_n, "rows to draw")->required();
  sample->add_option("--seed", sample_seed, "RNG seed");
  sample->add_option("--out", sample_out, "output CSV (default stdout)");

  std::string shd_a, shd_b;
  auto* shd_cmd = app.add_subcommand("shd", "Structural Hamming distance");
  shd_cmd->add_option("--a", shd_a, "first DAG text file")->required();
  shd_cmd->add_option("--b", shd_b, "second DAG text file")->required();

  std::string cpdag_dag;
  auto* cpdag_cmd =
      app.add_subcommand("cpdag", "Print the equivalence-class pattern");
  cpdag_cmd->add_option("--dag", cpdag_dag, "DAG text file")->required();

  std::string loglik_net, loglik_data;
  auto* loglik =
      app.add_subcommand("loglik", "Log-likelihood of data under a network");
  loglik->add_option("--net", loglik_net, "network file")->required();
  loglik->add_option("--data", loglik_data, "CSV data")->required();

  std::string bench_net, bench_ratios = "0.1,0.2,0.5,1,2,5";
  std::string bench_cells = "bdeu:u:1,bds:mu:1,bic";
  std::string bench_out;
  int bench_replicates = 20, bench_max_parents = 8, bench_threads = 0;
  std::int64_t bench_test_size = 10000;
  std::optional<std::uint64_t> bench_seed;
  auto* bench = app.add_subcommand(
      "benchmark", "Sample/learn/evaluate grid over score-prior cells");
  bench->add_option("--net", bench_net, "reference network file")->required();
  bench->add_option("--ratios", bench_ratios, "comma list of n/p ratios");
  bench->add_option("--replicates", bench_replicates, "replicates per ratio");
  bench->add_option("--cells", bench_cells,
                    "comma list of score[:prior[:alpha]]");
  bench->add_option("--test-size", bench_test_size, "test rows per replicate");
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_option("--out", bench_out, "output directory")->required();
  bench->add_option("--max-parents", bench_max_parents, "parent-count cap");
  bench->add_option("--threads", bench_threads,
                    "worker threads (0 = hardware)");

  int enum_n = 0;
  bool enum_arc_prob = false;
  auto* enumerate =
      app.add_subcommand("enumerate", "Count labeled DAGs exhaustively");
  enumerate->add_option("--n", enum_n, "node count")->required();
  enumerate->add_flag("--arc-prob", enum_arc_prob,
                      "also report exact per-pair arc probabilities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the diagnostic to stderr
    return kExitUsage;
  }

  try {
    if (learn->parsed())
      return cmd_learn(learn_flags, learn_max_parents, learn_restarts,
                       learn_seed, learn_trace, learn_out);
    if (score->parsed()) return cmd_score(score_flags, score_dag);
    if (sample->parsed())
      return cmd_sample(sample_net, sample_n, sample_seed, sample_out);
    if (shd_cmd->parsed()) return cmd_shd(shd_a, shd_b);
    if (cpdag_cmd->parsed()) return cmd_cpdag(cpdag_dag);
    if (loglik->parsed()) return cmd_loglik(loglik_net, loglik_data);
    if (bench->parsed())
      return cmd_benchmark(bench_net, bench_ratios, bench_replicates,
                           bench_cells, bench_test_size, bench_seed, bench_out,
                           bench_max_parents, bench_threads);
    if (enumerate->parsed()) return cmd_enumerate(enum_n, enum_arc_prob);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
