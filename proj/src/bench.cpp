#include "bnsl/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace bnsl {

BenchCell parse_bench_cell(const std::string& text) {
  std::vector<std::string> parts;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.empty() || parts.size() > 3)
    throw FormatError("cell `" + text + "` is not score[:prior[:alpha]]");

  BenchCell cell;
  const auto kind = parse_score_kind(parts[0]);
  if (!kind) throw FormatError("unknown score `" + parts[0] + "`");
  cell.score.kind = *kind;
  if (parts.size() > 1) {
    const auto prior = parse_prior_kind(parts[1]);
    if (!prior) throw FormatError("unknown prior `" + parts[1] + "`");
    cell.prior.kind = *prior;
  }
  if (parts.size() > 2) {
    char* end = nullptr;
    cell.score.alpha = std::strtod(parts[2].c_str(), &end);
    if (end == parts[2].c_str() || *end != '\0' || !(cell.score.alpha > 0))
      throw FormatError("bad alpha `" + parts[2] + "`");
  }
  std::ostringstream id;
  id << to_string(cell.prior.kind) << '+' << to_string(cell.score.kind);
  if (cell.score.kind == ScoreKind::Bdeu || cell.score.kind == ScoreKind::Bds)
    id << ':' << cell.score.alpha;
  cell.id = id.str();
  return cell;
}

namespace {

constexpr std::uint64_t kTrainTag = 0x7472;
constexpr std::uint64_t kTestTag = 0x7465;
constexpr std::uint64_t kSearchTag = 0x7363;

std::int64_t training_rows(const BenchmarkPlan& plan, double ratio,
                           std::int64_t p) {
  const auto n = static_cast<std::int64_t>(
      std::llround(ratio * static_cast<double>(p)));
  return std::max(n, plan.min_training_rows);
}

BenchmarkRecord run_one(const DiscreteBn& reference, const BenchmarkPlan& plan,
                        int cell_idx, int ratio_idx, int replicate,
                        const Dataset& training, const Dataset& test) {
  const auto t0 = std::chrono::steady_clock::now();
  BenchmarkRecord rec;
  rec.cell = cell_idx;
  rec.ratio_index = ratio_idx;
  rec.replicate = replicate;
  rec.training_rows = training.row_count();
  try {
    const BenchCell& cell = plan.cells[cell_idx];
    SearchOptions opts;
    opts.max_parents = plan.max_parents;
    opts.seed = Rng::derive(plan.seed, kSearchTag,
                            (static_cast<std::uint64_t>(ratio_idx) << 32) |
                                static_cast<std::uint64_t>(replicate),
                            static_cast<std::uint64_t>(cell_idx));
    const auto learned = hill_climb(training, cell.score, cell.prior, opts);

    rec.shd_to_reference = shd(learned.dag, reference.dag());
    rec.arcs_learned = learned.dag.arc_count();
    rec.arcs_ratio = reference.dag().arc_count() > 0
                         ? static_cast<double>(rec.arcs_learned) /
                               static_cast<double>(reference.dag().arc_count())
                         : static_cast<double>(rec.arcs_learned);
    const auto fitted = fit_parameters(learned.dag, training, plan.fit_alpha);
    rec.predictive_ll = log_likelihood(fitted, test);
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

BenchmarkResults run_benchmark(const DiscreteBn& reference,
                               const BenchmarkPlan& plan) {
  if (plan.replicates < 1) throw DimensionError("need at least one replicate");
  if (plan.cells.empty()) throw DimensionError("no cells to run");
  if (plan.ratios.empty()) throw DimensionError("no ratios to run");
  for (double r : plan.ratios)
    if (!(r > 0)) throw DimensionError("ratios must be positive");

  BenchmarkResults results;
  results.plan = plan;
  results.reference_arcs = reference.dag().arc_count();
  results.reference_parameters = n_parameters(reference);
  if (results.reference_parameters <= 0)
    throw DimensionError("reference network has no parameters");

  const int ncells = static_cast<int>(plan.cells.size());
  const int nratios = static_cast<int>(plan.ratios.size());
  results.records.resize(static_cast<std::size_t>(ncells) * nratios *
                         plan.replicates);

  struct Task {
    int ratio_idx;
    int replicate;
    int cell_idx;
    std::size_t slot;
  };
  std::vector<Task> tasks;
  tasks.reserve(results.records.size());
  std::size_t slot = 0;
  for (int ri = 0; ri < nratios; ++ri)
    for (int rep = 0; rep < plan.replicates; ++rep)
      for (int ci = 0; ci < ncells; ++ci)
        tasks.push_back({ri, rep, ci, slot++});

  auto run_task = [&](const Task& task) {
    const std::uint64_t pair_tag =
        (static_cast<std::uint64_t>(task.ratio_idx) << 32) |
        static_cast<std::uint64_t>(task.replicate);
    // Training and test draws are shared by every cell of a (ratio,
    // replicate) pair: the seeds depend only on the pair.
    const auto train = forward_sample(
        reference,
        training_rows(plan, plan.ratios[task.ratio_idx],
                      results.reference_parameters),
        Rng::derive(plan.seed, kTrainTag, pair_tag));
    const auto test = forward_sample(reference, plan.test_size,
                                     Rng::derive(plan.seed, kTestTag, pair_tag));
    results.records[task.slot] = run_one(reference, plan, task.cell_idx,
                                         task.ratio_idx, task.replicate, train,
                                         test);
  };

  unsigned threads = plan.threads > 0
                         ? static_cast<unsigned>(plan.threads)
                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, tasks.size());
  if (threads <= 1) {
    for (const auto& task : tasks) run_task(task);
  } else {
    // Tasks are independent and write to disjoint slots; results stay in
    // plan order regardless of scheduling.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        while (true) {
          const std::size_t k = next.fetch_add(1);
          if (k >= tasks.size()) return;
          run_task(tasks[k]);
        }
      });
    for (auto& worker : pool) worker.join();
  }
  return results;
}

namespace {

std::optional<double> mean_of(const BenchmarkResults& results, int cell,
                              int ratio_index,
                              double (*value)(const BenchmarkRecord&)) {
  double sum = 0.0;
  int count = 0;
  for (const auto& rec : results.records) {
    if (rec.cell != cell || rec.ratio_index != ratio_index || rec.failed)
      continue;
    sum += value(rec);
    ++count;
  }
  if (count == 0) return std::nullopt;
  return sum / count;
}

std::string format_double(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string format_ratio(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::string markdown_table(const BenchmarkResults& results,
                           const std::string& metric,
                           std::optional<double> (BenchmarkResults::*mean)(
                               int, int) const,
                           int decimals) {
  std::ostringstream out;
  out << "# Mean " << metric << " by n/p ratio\n\n";
  out << "| n/p |";
  for (const auto& cell : results.plan.cells) out << ' ' << cell.id << " |";
  out << "\n|---|";
  for (std::size_t c = 0; c < results.plan.cells.size(); ++c) out << "---|";
  out << '\n';
  for (int ri = 0; ri < static_cast<int>(results.plan.ratios.size()); ++ri) {
    out << "| " << format_ratio(results.plan.ratios[ri]) << " |";
    for (int ci = 0; ci < static_cast<int>(results.plan.cells.size()); ++ci) {
      const auto v = (results.*mean)(ci, ri);
      out << ' ' << (v ? format_double(*v, decimals) : std::string("err"))
          << " |";
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

std::optional<double> BenchmarkResults::mean_shd(int cell,
                                                 int ratio_index) const {
  return mean_of(*this, cell, ratio_index, [](const BenchmarkRecord& r) {
    return static_cast<double>(r.shd_to_reference);
  });
}

std::optional<double> BenchmarkResults::mean_arcs_ratio(int cell,
                                                        int ratio_index) const {
  return mean_of(*this, cell, ratio_index,
                 [](const BenchmarkRecord& r) { return r.arcs_ratio; });
}

std::optional<double> BenchmarkResults::mean_predictive_ll(
    int cell, int ratio_index) const {
  return mean_of(*this, cell, ratio_index,
                 [](const BenchmarkRecord& r) { return r.predictive_ll; });
}

std::string raw_csv(const BenchmarkResults& results) {
  std::ostringstream out;
  out << "cell,ratio,replicate,training_rows,shd,arcs_learned,arcs_ratio,"
         "predictive_ll,status\n";
  for (const auto& rec : results.records) {
    out << results.plan.cells[rec.cell].id << ','
        << format_ratio(results.plan.ratios[rec.ratio_index]) << ','
        << rec.replicate << ',' << rec.training_rows << ',';
    if (rec.failed) {
      out << ",,,,error\n";
      continue;
    }
    char buf[64];
    out << rec.shd_to_reference << ',' << rec.arcs_learned << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", rec.arcs_ratio);
    out << buf << ',';
    std::snprintf(buf, sizeof(buf), "%.6f", rec.predictive_ll);
    out << buf << ",ok\n";
  }
  return out.str();
}

void emit_tables(const BenchmarkResults& results, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw FormatError("cannot create `" + out_dir + "`");

  auto write_file = [&](const std::string& name, const std::string& body) {
    const auto path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write `" + path.string() + "`");
    out << body;
  };

  write_file("raw.csv", raw_csv(results));
  write_file("shd.md", markdown_table(results, "SHD to the reference DAG",
                                      &BenchmarkResults::mean_shd, 4));
  write_file("arcs.md",
             markdown_table(results,
                            "learned arcs / reference arcs (1 is ideal)",
                            &BenchmarkResults::mean_arcs_ratio, 4));
  write_file("loglik.md",
             markdown_table(results, "predictive log-likelihood",
                            &BenchmarkResults::mean_predictive_ll, 4));
}

}  // namespace bnsl
