#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reqtest/builtin_specs.hpp"
#include "reqtest/spec_io.hpp"

namespace {

struct Result {
  int code;
  std::string out;
};

Result sh(const std::string& args) {
  const std::string cmd = std::string(REQTEST_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

const std::string kSpecs = std::string(REQTEST_SOURCE_DIR) + "/specs/";

}  // namespace

TEST_CASE("validate exit codes") {
  CHECK(sh("validate fig1").code == 1);
  const Result raw = sh("validate " + kSpecs + "fig1.spec");
  CHECK(raw.code == 1);
  CHECK(raw.out.find("incomplete at o") != std::string::npos);
  CHECK(sh("validate " + kSpecs + "fig1.spec --complete").code == 0);
  CHECK(sh("validate " + kSpecs + "fig1.json --complete").code == 0);
  CHECK(sh("validate /no/such/file.spec").code == 2);
  CHECK(sh("validate passageway").code == 0);
}

TEST_CASE("analyze") {
  const Result r = sh("analyze --spec fig1 --objective o --game");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["layers"] == nlohmann::json::parse(R"([["o"],["s1"],["s0"]])"));
  CHECK(j["sink"] == nlohmann::json::parse(R"(["t"])"));
  CHECK(j["game"]["W"][0] == nlohmann::json::parse(R"(["o"])"));
  CHECK(j["game"]["st_greedy"]["s0"]["inputs"] == nlohmann::json::parse(R"(["{a}"])"));
  CHECK(j["game"]["st_greedy"]["s1"]["inputs"] == nlohmann::json::parse(R"(["{b}","{c}"])"));
  CHECK(sh("analyze --spec fig1 --objective nope").code == 2);

  const std::string empty = tmp("reqtest_empty_objective.spec");
  std::ofstream(empty) << "inputs: i\noutputs: o\nstates:\n  s in initial\n  m out\ntransitions:\n  s -> m [true]\n"
                          "  m -> s [true]\nobjectives:\n  none =\n";
  const Result e = sh("analyze --spec " + empty);
  REQUIRE(e.code == 0);
  const auto ej = nlohmann::json::parse(e.out);
  CHECK(ej["layers"] == nlohmann::json::parse("[[]]"));
  CHECK(ej["sink"] == nlohmann::json::parse(R"(["s"])"));
}

TEST_CASE("run exit codes") {
  CHECK(sh("run --spec fig1 --sut builtin:i1 --algo uniform --attempts 2 --runs 200 --K 8").code == 0);
  CHECK(sh("run --spec fig1 --sut builtin:fig6 --algo greedy --attempts 2 --runs 50 --K 8").code == 0);
  CHECK(sh("run --spec passageway3 --sut builtin:passageway3 --algo uniform --attempts 1 --runs 5 --K 3").code == 1);
  CHECK(sh("run --spec fig1 --sut builtin:carriage --algo uniform").code == 2);
  CHECK(sh("run --spec fig1 --sut builtin:i1 --algo bogus").code == 2);
  CHECK(sh("run --spec fig1 --sut builtin:i1 --epsilon 2").code == 2);
  CHECK(sh("run --spec fig1 --sut 'exec:exit 0' --attempts 1 --runs 5").code == 3);
  CHECK(sh(std::string("run --spec fig1 --sut 'exec:") + REQTEST_SUT_PATH + " i1' --attempts 1 --runs 200 --K 8").code == 0);
}

TEST_CASE("reports are reproducible and self-consistent") {
  const std::string base = "run --spec passageway3 --sut builtin:passageway3-bug --algo greedy-mcts --K 60 --runs 400 "
                           "--attempts 6 --seed 7 --report ";
  REQUIRE(sh(base + tmp("reqtest_r1.json")).code == 0);
  REQUIRE(sh(base + tmp("reqtest_r2.json") + " --jobs 4").code == 0);
  const std::string a = slurp(tmp("reqtest_r1.json"));
  CHECK(a == slurp(tmp("reqtest_r2.json")));

  const auto j = nlohmann::json::parse(a);
  const auto& row = j["campaigns"][0];
  int successes = 0;
  double runs = 0;
  for (const auto& att : row["attempts"])
    if (att["success"].get<bool>()) {
      ++successes;
      runs += att["runs_used"].get<int>();
    }
  CHECK(row["summary"]["successes"] == successes);
  CHECK(row["summary"]["success_rate"].get<double>() == doctest::Approx(100.0 * successes / 6));
  if (successes) CHECK(row["summary"]["average_runs"].get<double>() == doctest::Approx(runs / successes));
  CHECK_FALSE(row.contains("wall_time_ms"));
}

TEST_CASE("experiment matrix") {
  const Result r = sh("experiment --spec passageway3 --sut builtin:passageway3-bug --K 60 --runs 300 --attempts 2");
  CHECK(r.code == 0);
  for (const char* label : {"UniformTC", "eps-GreedyTC", "Basic MCTS", "MCTS + greedy roll-out",
                            "MCTS + greedy tree & roll-out"})
    CHECK(r.out.find(label) != std::string::npos);
}

TEST_CASE("bundled spec files are in sync") {
  for (const std::string& n : reqtest::builtin_spec_names()) {
    INFO(n);
    CHECK(slurp(kSpecs + n + ".spec") == sh("export-spec " + n).out);
    CHECK(slurp(kSpecs + n + ".json") == sh("export-spec " + n + " --json").out);
    CHECK(reqtest::load_spec_file(kSpecs + n + ".spec") == reqtest::resolve_spec(n));
    CHECK(reqtest::load_spec_file(kSpecs + n + ".json") == reqtest::resolve_spec(n));
  }
}
