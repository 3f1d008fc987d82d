#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <string>

#ifndef BSGAL_CLI_PATH
#error "BSGAL_CLI_PATH must point at the command-line binary"
#endif

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(BSGAL_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult result;
  std::array<char, 4096> buffer{};
  std::size_t got = 0;
  while ((got = fread(buffer.data(), 1, buffer.size(), pipe)) > 0)
    result.output.append(buffer.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("cells command") {
  const RunResult res = run_cli("cells A2 --word 1,2,1");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "poincare: [1,3,3,1]"));
  CHECK(contains(res.output, "111"));
  CHECK(contains(res.output, "{3,2,1}"));
}

TEST_CASE("cells rejects non-reduced words with exit 3") {
  const RunResult res = run_cli("cells A2 --word 1,1");
  CHECK(res.exit_code == 3);
}

TEST_CASE("cells of a single letter") {
  const RunResult res = run_cli("cells A1 --word 1");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "poincare: [1,1]"));
}

TEST_CASE("cells of the empty word") {
  const RunResult res = run_cli("cells A2");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "poincare: [1]"));
}

TEST_CASE("fibre json output is stable and matches the pinned values") {
  const std::string args = "fibre A3 --word 2,1,3,2 --point e --json";
  const RunResult first = run_cli(args);
  CHECK(first.exit_code == 0);
  CHECK(contains(first.output, "\"match\": true"));
  CHECK(contains(first.output, "\"poincare\": [\n    1,\n    1\n  ]"));
  const RunResult second = run_cli(args);
  CHECK(first.output == second.output);
}

TEST_CASE("fibre over the top point") {
  const RunResult res = run_cli("fibre A2 --word 1,2,1 --point 1,2,1");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "poincare [1]"));
}

TEST_CASE("fibre rejects bad points with exit 4") {
  CHECK(run_cli("fibre A2 --word 1,2,1 --point 2,1,2,1").exit_code == 4);
  CHECK(run_cli("fibre A2 --word 1 --point 2").exit_code == 4);
}

TEST_CASE("fibre sweeps all points") {
  const RunResult res = run_cli("fibre B2 --word 1,2,1,2 --point all");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "fibre over point e"));
  CHECK(contains(res.output, "poincare [1,2]"));
  CHECK(contains(res.output, "match yes"));
}

TEST_CASE("deodhar command") {
  const RunResult res = run_cli("deodhar A2 --word 1,2,1 --point e");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "[1,1]"));
}

TEST_CASE("verify passes on family-A words") {
  const RunResult res = run_cli("verify A3 --word 2,1,3,2 --q 2 --trials 5");
  CHECK(res.exit_code == 0);
  CHECK(contains(res.output, "81 points"));
  CHECK(contains(res.output, "verify: PASS"));

  const RunResult res3 = run_cli("verify A2 --word 1,2,1 --q 3 --trials 5");
  CHECK(res3.exit_code == 0);
  CHECK(contains(res3.output, "64 points"));
}

TEST_CASE("verify refuses non-A families with exit 2") {
  const RunResult res = run_cli("verify B2 --word 1,2,1,2 --q 2");
  CHECK(res.exit_code == 2);
  CHECK(contains(res.output, "family-A"));
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_cli("cells H3 --word 1").exit_code == 2);
  CHECK(run_cli("cells A2 --word x").exit_code == 2);
  CHECK(run_cli("nonsense A2").exit_code == 2);
  CHECK(run_cli("verify A2 --word 1,2,1 --q 4").exit_code == 2);
  CHECK(run_cli("cells A2 --word 1,2,1 --target-type 5").exit_code == 2);
}

TEST_CASE("verify budget exit code") {
  const RunResult res =
      run_cli("verify A2 --word 1,2,1 --q 2 --budget 5");
  CHECK(res.exit_code == 6);
}

TEST_CASE("target walls flag switches the face convention") {
  const RunResult full =
      run_cli("fibre A3 --word 1,2,3 --target-type 1,2 --point e --json");
  const RunResult simple = run_cli(
      "fibre A3 --word 1,2,3 --target-type 1,2 --point e --target-walls "
      "simple --json");
  CHECK(full.exit_code == 0);
  CHECK(simple.exit_code == 0);
  CHECK(contains(full.output, "\"dim\": 2"));
  CHECK_FALSE(contains(simple.output, "\"dim\": 2"));
}
