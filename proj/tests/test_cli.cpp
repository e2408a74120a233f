#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bnsl/model.hpp"
#include "bnsl/netio.hpp"
#include "bnsl/scores.hpp"

using namespace bnsl;

namespace {

std::string cli_path() {
  if (const char* env = std::getenv("BNSL_CLI")) return env;
  std::error_code ec;
  const auto self = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    const auto guess = self.parent_path().parent_path() / "tools" / "bnsl";
    if (std::filesystem::exists(guess, ec)) return guess.string();
  }
  return "../tools/bnsl";
}

struct CliResult {
  int exit_code;
  std::string out;
};

CliResult run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string write_temp(const std::string& name, const std::string& body) {
  std::ofstream out(name, std::ios::binary);
  REQUIRE(out.good());
  out << body;
  return name;
}

const std::string kFixtureNet = std::string(BNSL_FIXTURE_DIR) + "/asia.bif";

}  // namespace

TEST_CASE("shd of a graph with itself prints zero") {
  const auto dag = write_temp("cli_g1.dag", "nodes a b c\na -> b\nc -> b\n");
  const auto result = run("shd --a " + dag + " --b " + dag);
  CHECK(result.exit_code == 0);
  CHECK(result.out == "0\n");
  std::remove(dag.c_str());
}

TEST_CASE("node names rather than positions define the comparison") {
  const auto g1 = write_temp("cli_n1.dag", "nodes a b\na -> b\n");
  const auto g2 = write_temp("cli_n2.dag", "nodes b a\na -> b\n");
  const auto result = run("shd --a " + g1 + " --b " + g2);
  CHECK(result.exit_code == 0);
  CHECK(result.out == "0\n");
  std::remove(g1.c_str());
  std::remove(g2.c_str());
}

TEST_CASE("usage errors exit with status one") {
  CHECK(run("learn").exit_code == 1);
  CHECK(run("nonsense").exit_code == 1);
  CHECK(run("learn --data x.csv --score wat").exit_code == 1);
}

TEST_CASE("data errors exit with status two") {
  CHECK(run("loglik --net missing.bif --data also_missing.csv").exit_code == 2);
  const auto bad = write_temp("cli_bad.csv", "a,b\nx,\n");
  CHECK(run("learn --data " + bad).exit_code == 2);
  std::remove(bad.c_str());
}

TEST_CASE("enumerate reports counts and exact arc probabilities") {
  const auto result = run("enumerate --n 3 --arc-prob");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("dags 25") != std::string::npos);
  CHECK(result.out.find("p_forward 8/25") != std::string::npos);
}

TEST_CASE("cpdag prints compelled and reversible edges") {
  const auto dag = write_temp("cli_v.dag", "nodes x z y\nx -> z\ny -> z\n");
  const auto result = run("cpdag --dag " + dag);
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("x -> z") != std::string::npos);
  CHECK(result.out.find("y -> z") != std::string::npos);
  CHECK(result.out.find("--") == std::string::npos);
  std::remove(dag.c_str());
}

TEST_CASE("score breakdown matches the library") {
  // sample a small dataset first
  const auto sampled = run("sample --net " + kFixtureNet +
                           " --n 100 --seed 5 --out cli_sample.csv");
  REQUIRE(sampled.exit_code == 0);

  const auto dag =
      write_temp("cli_asia.dag",
                 "nodes asia tub smoke lung bronc either xray dysp\n"
                 "smoke -> lung\nsmoke -> bronc\n");
  const auto result =
      run("score --dag " + dag + " --data cli_sample.csv --score bdeu --alpha 1");
  CHECK(result.exit_code == 0);
  CHECK(result.out.find("total ") != std::string::npos);
  CHECK(std::count(result.out.begin(), result.out.end(), '\n') == 9);

  // recompute the total through the library on the same bytes
  const auto data = load_csv("cli_sample.csv");
  std::istringstream lines(result.out);
  std::string line, last;
  while (std::getline(lines, line)) last = line;
  const double printed_total = std::strtod(last.c_str() + 6, nullptr);

  LocalScoreCache cache;
  std::vector<std::string> names;
  for (const auto& var : data.schema()) names.push_back(var.name);
  auto dag_indexed = Dag(8);
  const auto find = [&](const std::string& name) {
    return static_cast<int>(std::find(names.begin(), names.end(), name) -
                            names.begin());
  };
  dag_indexed.add_arc(find("smoke"), find("lung"));
  dag_indexed.add_arc(find("smoke"), find("bronc"));
  const double expected =
      network_score(dag_indexed, data, {ScoreKind::Bdeu, 1.0}, cache);
  CHECK(printed_total == doctest::Approx(expected).epsilon(1e-9));

  std::remove("cli_sample.csv");
  std::remove(dag.c_str());
}

TEST_CASE("loglik agrees with the library") {
  const auto sampled = run("sample --net " + kFixtureNet +
                           " --n 50 --seed 9 --out cli_ll.csv");
  REQUIRE(sampled.exit_code == 0);
  const auto result = run("loglik --net " + kFixtureNet + " --data cli_ll.csv");
  CHECK(result.exit_code == 0);

  const auto bn = read_bif_file(kFixtureNet);
  const auto data = load_csv_with_schema("cli_ll.csv", bn.schema());
  const double expected = log_likelihood(bn, data);
  CHECK(std::strtod(result.out.c_str(), nullptr) ==
        doctest::Approx(expected).epsilon(1e-9));
  std::remove("cli_ll.csv");
}

TEST_CASE("learn emits a parsable graph") {
  const auto sampled = run("sample --net " + kFixtureNet +
                           " --n 400 --seed 77 --out cli_learn.csv");
  REQUIRE(sampled.exit_code == 0);
  const auto result =
      run("learn --data cli_learn.csv --score bds --prior mu --alpha 1");
  CHECK(result.exit_code == 0);
  const auto named = read_dag_text(result.out);
  CHECK(named.dag.node_count() == 8);
  CHECK(named.names.front() == "asia");
  std::remove("cli_learn.csv");
}
