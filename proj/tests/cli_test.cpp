#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qsp/turing.hpp"

using json = nlohmann::json;

namespace {

struct CliRun {
  int exit_code;
  std::vector<std::string> lines;  // stdout only
};

CliRun run_cli(const std::string& args) {
  const std::string command = std::string(QSP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliRun result;
  std::array<char, 4096> buffer;
  std::string current;
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
    current += buffer.data();
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  std::size_t start = 0;
  while (start < current.size()) {
    const std::size_t end = current.find('\n', start);
    if (end == std::string::npos) break;
    result.lines.push_back(current.substr(start, end - start));
    start = end + 1;
  }
  return result;
}

// The payload must reproduce bit-exactly under a fixed seed; timestamps and
// timings may differ.
json result_of(const CliRun& run, std::size_t line = 0) {
  REQUIRE(run.lines.size() > line);
  return json::parse(run.lines[line]).at("result");
}

}  // namespace

TEST_CASE("every subcommand is reproducible under a fixed seed") {
  const std::vector<std::string> commands = {
      "dj --oracle balanced-bit0 --n 3 --json --seed 5",
      "dj-estimate --oracle marked=11 --epsilon 0.1 --k 2 --json --seed 5",
      "grover --oracle marked=101 --solutions 1 --json --seed 5",
      "count --oracle marked=011 --json --seed 5",
      "phase --unitary pi8 --m-bits 3 --json --seed 5",
      "qft --state 011 --json --seed 5",
      "shor 15 --json --seed 5",
      "machine run --program 010111 --budget 9 --json --seed 5",
      "kolmogorov 11 --max-len 4 --phase 8 --json --seed 5",
      "prior classical 1111 --json --seed 5",
      "prior qcount 10 --json --seed 5",
      "prior dj 11 --json --seed 5",
      "prior conditional 1111 --given 1111 --method classical --json --seed 5",
      "prior quasi 111 --given 1 --method dj --json --seed 5",
      "laplace --ones 3 --total 7 --json --seed 5",
      "agent act --history 1:1:1,1:1:1 --window 2 --json --seed 5",
      "agent episode --agent random --env coin --steps 6 --json --seed 5",
  };
  for (const std::string& command : commands) {
    CAPTURE(command);
    const CliRun first = run_cli(command);
    const CliRun second = run_cli(command);
    REQUIRE(first.exit_code == 0);
    REQUIRE(second.exit_code == 0);
    REQUIRE(first.lines.size() == second.lines.size());
    for (std::size_t i = 0; i < first.lines.size(); ++i) {
      const json a = json::parse(first.lines[i]);
      const json b = json::parse(second.lines[i]);
      if (a.contains("result")) {
        CHECK(a.at("result") == b.at("result"));
        CHECK(a.at("params") == b.at("params"));
      } else {
        CHECK(a == b);  // episode step lines carry no timing fields
      }
    }
  }
}

TEST_CASE("factors of 15 come out valid") {
  const CliRun run = run_cli("shor 15 --json --seed 11");
  const json result = result_of(run);
  CHECK(result.at("found").get<bool>());
  const auto factor = result.at("factor").get<std::uint64_t>();
  CHECK((factor == 3 || factor == 5));
}

TEST_CASE("exit codes distinguish validation from resource errors") {
  CHECK(run_cli("shor 13 --json").exit_code == 1);               // prime input
  CHECK(run_cli("prior classical 1010101010101 --json").exit_code == 2);  // over cap
  CHECK(run_cli("totally-unknown-subcommand").exit_code == 1);
  CHECK(run_cli("dj --oracle marked=11 --n 2 --json").exit_code == 1);  // promise violated
}

TEST_CASE("seed falls back to the environment variable") {
  const CliRun flag = run_cli("prior dj 1111 --json --seed 99");

  const std::string command = std::string("env QSP_SEED=99 ") + QSP_CLI_PATH +
                              " prior dj 1111 --json 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 8192> buffer;
  std::string out;
  while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) out += buffer.data();
  pclose(pipe);
  const json via_env = json::parse(out.substr(0, out.find('\n')));
  CHECK(via_env.at("result") == result_of(flag));
}

TEST_CASE("strict mode flips the published branches") {
  // Grover iteration count: ceil form overshoots at N = 8.
  const json normal = result_of(run_cli("grover --oracle marked=101 --solutions 1 --json"));
  const json strict =
      result_of(run_cli("grover --oracle marked=101 --solutions 1 --strict-paper-mode --json "
                        "--attempts 10"));
  CHECK(normal.at("iterations").get<int>() == 2);
  CHECK(strict.at("iterations").get<int>() == 3);

  // Empty-string prior value.
  const json lambda_default = result_of(run_cli("prior classical \"\" --json"));
  const json lambda_strict =
      result_of(run_cli("prior classical \"\" --strict-paper-mode --json"));
  CHECK(lambda_default.at("value").get<double>() == 1.0);
  CHECK(lambda_strict.at("value").get<double>() == 0.0);
}

TEST_CASE("oracle tables load from files") {
  const std::string path = "/tmp/qsp_cli_test_oracle.txt";
  {
    std::ofstream out(path);
    out << "00 0\n01 1\n10 1\n11 0\n";
  }
  const json result = result_of(run_cli("dj --oracle-table " + path + " --json"));
  CHECK(result.at("verdict").get<std::string>() == "BALANCED");
  std::remove(path.c_str());
}

TEST_CASE("machine files drive the program machine") {
  const std::string path = "/tmp/qsp_cli_test_machine.txt";
  {
    // Scan right over 0/1 and reject at the first blank: echoes the program.
    qsp::machine::TmSpec spec;
    spec.alphabet = {'#', '0', '1'};
    spec.states = {"scan", "done"};
    spec.initial = "scan";
    spec.final_state = "done";
    spec.transitions[{"scan", '0'}] = {'0', "scan", qsp::machine::Move::kRight};
    spec.transitions[{"scan", '1'}] = {'1', "scan", qsp::machine::Move::kRight};
    std::ofstream out(path);
    out << qsp::machine::serialize_tm(spec);
  }
  const json run = result_of(
      run_cli("machine run --program 1011 --budget 64 --machine " + path + " --json"));
  CHECK(run.at("output").get<std::string>() == "1011");
  CHECK(run.at("status").get<std::string>() == "HALTED");

  const json prior =
      result_of(run_cli("prior classical 10 --machine " + path + " --json"));
  // The scanner's tape starts as the program, so p = x counts in every
  // phase even at budget zero: S = sum_{i=1..4} 2^-(i+2) = 15/64.
  CHECK(prior.at("value").get<double>() == doctest::Approx(15.0 / 64.0));
  std::remove(path.c_str());
}

TEST_CASE("episode logs are line-delimited and complete") {
  const CliRun run = run_cli("agent episode --agent random --env pattern --steps 5 --json");
  REQUIRE(run.lines.size() == 6);  // 5 step records plus the summary
  for (int i = 0; i < 5; ++i) {
    const json step = json::parse(run.lines[static_cast<std::size_t>(i)]);
    CHECK(step.at("step").get<int>() == i + 1);
    CHECK(step.contains("action"));
    CHECK(step.contains("observation"));
    CHECK(step.contains("reward"));
    CHECK(step.contains("prior_calls"));
    CHECK(step.contains("seed"));
  }
  const json summary = json::parse(run.lines[5]);
  CHECK(summary.at("command").get<std::string>() == "agent episode");
}

TEST_CASE("register cap and program files are honored") {
  // A 17-qubit counting circuit cannot fit under an 8-qubit cap.
  CHECK(run_cli("prior qcount 101 --max-qubits 8 --json").exit_code == 2);

  const std::string path = "/tmp/qsp_cli_test_program.txt";
  {
    std::ofstream out(path);
    out << "\n0111\n";
  }
  const json run =
      result_of(run_cli("machine run --program-file " + path + " --budget 9 --json"));
  CHECK(run.at("output").get<std::string>() == "11111");
  std::remove(path.c_str());
}
