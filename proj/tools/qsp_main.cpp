// Command-line driver: every algorithm behind one binary with reproducible
// seeds and one JSON record per line on stdout. Human-readable summaries go
// to stderr unless --json is given.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qsp/agent.hpp"
#include "qsp/counting.hpp"
#include "qsp/deutsch_jozsa.hpp"
#include "qsp/environment.hpp"
#include "qsp/grover.hpp"
#include "qsp/machine.hpp"
#include "qsp/phase_estimation.hpp"
#include "qsp/qft.hpp"
#include "qsp/shor.hpp"
#include "qsp/speed_prior.hpp"
#include "qsp/statevector.hpp"
#include "qsp/turing.hpp"

using json = nlohmann::json;
using namespace qsp;

namespace {

struct GlobalOptions {
  std::uint64_t seed = 0;
  bool json_only = false;
  bool strict_paper_mode = false;
  int max_qubits = 24;
  std::string machine = "sk2";
};

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

// Applies the global configuration and emits the run record. Constructed
// first thing in every subcommand.
class Session {
 public:
  Session(const GlobalOptions& global, std::string command)
      : global_(global), command_(std::move(command)), start_(std::chrono::steady_clock::now()),
        started_(timestamp_utc()) {
    qsim::set_max_qubits(global.max_qubits);
  }

  void emit(const json& params, const json& result, const std::string& summary) const {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    json record;
    record["command"] = command_;
    record["params"] = params;
    record["seed"] = global_.seed;
    record["started"] = started_;
    record["elapsed_ms"] = elapsed.count();
    record["result"] = result;
    std::cout << record.dump() << "\n";
    if (!global_.json_only && !summary.empty()) std::cerr << summary << "\n";
  }

 private:
  const GlobalOptions& global_;
  std::string command_;
  std::chrono::steady_clock::time_point start_;
  std::string started_;
};

// --- oracle construction --------------------------------------------------------

struct OracleOptions {
  std::string name = "constant0";  // constant0 | constant1 | balanced-bit0 | marked=<bits>
  std::string table_file;
  int n = 0;
};

qsim::OracleSpec build_oracle(const OracleOptions& options) {
  if (!options.table_file.empty()) {
    std::ifstream in(options.table_file);
    if (!in) throw ValidationError("cannot open oracle table: " + options.table_file);
    std::string input, output;
    int arity = -1;
    std::vector<bool> table;
    while (in >> input >> output) {
      require_bits(input, "oracle input");
      if (arity < 0) {
        arity = static_cast<int>(input.size());
        table.assign(std::size_t{1} << arity, false);
      }
      if (static_cast<int>(input.size()) != arity) {
        throw ValidationError("oracle table rows must share one input width");
      }
      if (output != "0" && output != "1") throw ValidationError("oracle outputs are bits");
      table[bits_to_index(input)] = output == "1";
    }
    if (arity < 0) throw ValidationError("oracle table is empty");
    return qsim::OracleSpec::from_table(arity, std::move(table));
  }

  if (options.name.rfind("marked=", 0) == 0) {
    const std::string bits = options.name.substr(7);
    require_bits(bits, "marked oracle");
    const int n = options.n > 0 ? options.n : static_cast<int>(bits.size());
    if (n != static_cast<int>(bits.size())) {
      throw ValidationError("marked oracle width disagrees with --n");
    }
    return qsim::OracleSpec::marking(n, {bits_to_index(bits)});
  }
  if (options.n < 1) throw ValidationError("--n is required for this oracle");
  if (options.name == "constant0") return qsim::OracleSpec::constant_zero(options.n);
  if (options.name == "constant1") return qsim::OracleSpec::constant_one(options.n);
  if (options.name == "balanced-bit0") {
    const int n = options.n;
    return qsim::OracleSpec(n, [n](std::uint64_t x) { return ((x >> (n - 1)) & 1ULL) == 1; });
  }
  throw ValidationError("unknown oracle: " + options.name);
}

std::unique_ptr<machine::ProgramMachine> build_machine(const GlobalOptions& global) {
  if (global.machine == "sk2") return std::make_unique<machine::Sk2Machine>();
  std::ifstream in(global.machine);
  if (!in) throw ValidationError("cannot open machine file: " + global.machine);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return std::make_unique<machine::TmProgramMachine>(machine::parse_tm(buffer.str()),
                                                     global.machine);
}

json prior_record(const prior::PriorEstimate& est) {
  json j;
  j["x"] = est.x;
  if (est.y.has_value()) j["y"] = *est.y;
  j["method"] = prior::method_name(est.method);
  j["value"] = est.value;
  j["error_bound"] = est.error_bound;
  j["confidence"] = est.confidence;
  j["per_phase_counts"] = est.per_phase_counts;
  j["trials"] = est.trials;
  j["seed"] = est.seed;
  j["machine_id"] = est.machine_id;
  if (est.clamped) j["clamped"] = true;
  return j;
}

prior::PriorOptions prior_options_from(const GlobalOptions& global, double epsilon, double k,
                                       int m_bits) {
  prior::PriorOptions options;
  options.epsilon = epsilon;
  options.k = k;
  options.m_bits = m_bits;
  options.strict_paper_mode = global.strict_paper_mode;
  return options;
}

std::vector<agent::Step> parse_history(const std::string& text) {
  std::vector<agent::Step> steps;
  if (text.empty()) return steps;
  std::stringstream ss(text);
  std::string triple;
  while (std::getline(ss, triple, ',')) {
    unsigned long long a = 0, o = 0;
    int r = 0;
    if (std::sscanf(triple.c_str(), "%llu:%llu:%d", &a, &o, &r) != 3) {
      throw ValidationError("history entries look like action:observation:reward");
    }
    steps.push_back(agent::Step{a, o, r});
  }
  return steps;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum statevector simulation with speed-prior inference on top"};
  app.require_subcommand(1);

  GlobalOptions global;
  if (const char* env_seed = std::getenv("QSP_SEED")) {
    global.seed = std::strtoull(env_seed, nullptr, 10);
  }
  app.add_option("--seed", global.seed, "random seed for every sampled quantity");
  app.add_flag("--json", global.json_only, "suppress the human-readable summary");
  app.add_flag("--strict-paper-mode", global.strict_paper_mode,
               "use the verbatim published branches (iteration ceil, empty-string values, "
               "fraction weights)");
  app.add_option("--max-qubits", global.max_qubits, "statevector register cap");
  app.add_option("--machine", global.machine, "program machine: sk2 or a machine file");

  OracleOptions oracle;

  // dj
  auto* dj = app.add_subcommand("dj", "decide constant-vs-balanced with one oracle call");
  dj->add_option("--oracle", oracle.name, "constant0|constant1|balanced-bit0|marked=<bits>");
  dj->add_option("--oracle-table", oracle.table_file, "file with one `input output` per line");
  dj->add_option("--n", oracle.n, "oracle arity");
  dj->callback([&] {
    const Session out(global, "dj");
    const qsim::OracleSpec f = build_oracle(oracle);
    const double p0 = qalg::dj_zero_outcome_probability(f);
    const qalg::DjVerdict verdict = qalg::deutsch_jozsa(f);
    json result;
    result["verdict"] = verdict == qalg::DjVerdict::kConstant ? "CONSTANT" : "BALANCED";
    result["zero_outcome_probability"] = p0;
    out.emit({{"oracle", oracle.name}, {"n", f.arity()}}, result,
             std::string("verdict: ") + result["verdict"].get<std::string>());
  });

  // dj-estimate
  double dj_epsilon = 0.05, dj_k = 3.0;
  auto* dje = app.add_subcommand("dj-estimate",
                                 "estimate the fraction of accepting inputs by trial average");
  dje->add_option("--oracle", oracle.name, "oracle spec");
  dje->add_option("--oracle-table", oracle.table_file, "oracle table file");
  dje->add_option("--n", oracle.n, "oracle arity");
  dje->add_option("--epsilon", dj_epsilon, "target absolute error");
  dje->add_option("--k", dj_k, "confidence parameter");
  dje->callback([&] {
    const Session out(global, "dj-estimate");
    const qsim::OracleSpec f = build_oracle(oracle);
    const Rng rng(global.seed);
    const qalg::FractionEstimate est = qalg::estimate_fraction(f, dj_epsilon, dj_k, rng);
    json result;
    result["fraction"] = est.fraction;
    result["mean"] = est.mean;
    result["trials"] = est.trials;
    result["epsilon"] = est.epsilon;
    result["k"] = est.k;
    result["raw_error"] = est.raw_error;
    result["fraction_error"] = est.fraction_error;
    out.emit({{"oracle", oracle.name}, {"n", f.arity()}, {"epsilon", dj_epsilon}, {"k", dj_k}},
             result, "fraction ~= " + std::to_string(est.fraction));
  });

  // grover
  std::uint64_t grover_solutions = 0;
  int grover_attempts = 10;
  auto* grover = app.add_subcommand("grover", "search for an accepted input");
  grover->add_option("--oracle", oracle.name, "oracle spec");
  grover->add_option("--oracle-table", oracle.table_file, "oracle table file");
  grover->add_option("--n", oracle.n, "oracle arity");
  grover->add_option("--solutions", grover_solutions,
                     "number of solutions; counted quantumly when omitted");
  grover->add_option("--attempts", grover_attempts, "retry cap");
  grover->callback([&] {
    const Session out(global, "grover");
    const qsim::OracleSpec f = build_oracle(oracle);
    Rng rng(global.seed);
    json result;
    std::uint64_t m = grover_solutions;
    if (m == 0) {
      Rng count_rng = rng.derive(0xC0);
      const qalg::CountEstimate count = qalg::quantum_count(f, 6, 0.1, count_rng);
      m = static_cast<std::uint64_t>(std::llround(count.m_hat));
      result["counted_solutions"] = count.m_hat;
      if (m == 0) throw ValidationError("counting found no solutions to search for");
    }
    qalg::GroverOptions options;
    options.max_attempts = grover_attempts;
    options.use_display_count = global.strict_paper_mode;
    const qalg::GroverResult search = qalg::grover_search(f, m, rng, options);
    result["bits"] = search.bits;
    result["found"] = search.found;
    result["iterations"] = search.iterations;
    result["iterations_display"] = search.iterations_display;
    result["attempts"] = search.attempts;
    result["success_probability"] = search.success_probability;
    result["trial_log"] = search.trial_log;
    out.emit({{"oracle", oracle.name}, {"n", f.arity()}, {"solutions", m}}, result,
             search.found ? "found " + search.bits : "search failed within the retry cap");
  });

  // count
  int count_m_bits = 6;
  double count_epsilon = 0.1;
  auto* count = app.add_subcommand("count", "estimate the number of accepted inputs");
  count->add_option("--oracle", oracle.name, "oracle spec");
  count->add_option("--oracle-table", oracle.table_file, "oracle table file");
  count->add_option("--n", oracle.n, "oracle arity");
  count->add_option("--m-bits", count_m_bits, "angle precision bits");
  count->add_option("--epsilon", count_epsilon, "failure probability budget");
  count->callback([&] {
    const Session out(global, "count");
    const qsim::OracleSpec f = build_oracle(oracle);
    Rng rng(global.seed);
    const qalg::CountEstimate est = qalg::quantum_count(f, count_m_bits, count_epsilon, rng);
    json result;
    result["m_hat"] = est.m_hat;
    result["m_hat_raw"] = est.m_hat_raw;
    result["theta_hat"] = est.theta_hat;
    result["theta_error"] = est.theta_error;
    result["error_bound"] = est.error_bound;
    result["confidence"] = est.confidence;
    result["clamped"] = est.clamped;
    result["outcome"] = est.outcome;
    result["t_register"] = est.t_register;
    out.emit({{"oracle", oracle.name},
              {"n", f.arity()},
              {"m_bits", count_m_bits},
              {"epsilon", count_epsilon}},
             result,
             "M ~= " + std::to_string(est.m_hat) + " +- " + std::to_string(est.error_bound));
  });

  // phase
  std::string phase_unitary = "pi8";
  int phase_m_bits = 3;
  double phase_epsilon = 0.1;
  auto* phase = app.add_subcommand("phase", "estimate an eigenphase");
  phase->add_option("--unitary", phase_unitary, "pi8 | identity | omega=<phase in [0,1)>");
  phase->add_option("--m-bits", phase_m_bits, "precision bits");
  phase->add_option("--epsilon", phase_epsilon, "failure probability budget");
  phase->callback([&] {
    const Session out(global, "phase");
    qsim::CMatrix u(2);
    qsim::StateVector eigen = qsim::StateVector::basis(1, 1);
    if (phase_unitary == "pi8") {
      u = qsim::GateSpec::pi8(0).realized_matrix();
    } else if (phase_unitary == "identity") {
      u = qsim::CMatrix::identity(2);
      eigen = qsim::StateVector::basis(1, 0);
    } else if (phase_unitary.rfind("omega=", 0) == 0) {
      const double omega = std::stod(phase_unitary.substr(6));
      u.at(0, 0) = 1.0;
      u.at(1, 1) = std::polar(1.0, 2.0 * M_PI * omega);
    } else {
      throw ValidationError("unknown unitary: " + phase_unitary);
    }
    Rng rng(global.seed);
    const qalg::PhaseEstimate est =
        qalg::phase_estimate(u, eigen, phase_m_bits, phase_epsilon, rng);
    json result;
    result["phase"] = est.phase;
    result["outcome"] = est.outcome;
    result["precision_bits"] = est.precision_bits;
    result["t_register"] = est.t_register;
    result["confidence"] = est.confidence;
    out.emit({{"unitary", phase_unitary}, {"m_bits", phase_m_bits}, {"epsilon", phase_epsilon}},
             result, "phase ~= " + std::to_string(est.phase));
  });

  // qft
  std::string qft_state;
  bool qft_inverse = false;
  auto* qft_cmd = app.add_subcommand("qft", "Fourier-transform a basis state");
  qft_cmd->add_option("--state", qft_state, "basis state bits")->required();
  qft_cmd->add_flag("--inverse", qft_inverse, "apply the inverse transform");
  qft_cmd->callback([&] {
    const Session out(global, "qft");
    require_bits(qft_state, "state");
    const int n = static_cast<int>(qft_state.size());
    qsim::StateVector state = qsim::StateVector::basis(n, bits_to_index(qft_state));
    std::vector<int> qubits(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) qubits[static_cast<std::size_t>(q)] = q;
    state = qft_inverse ? qalg::inverse_qft(std::move(state), qubits)
                        : qalg::qft(std::move(state), qubits);
    json amplitudes = json::array();
    for (const Complex& a : state.amplitudes()) {
      amplitudes.push_back(json::array({a.real(), a.imag()}));
    }
    out.emit({{"state", qft_state}, {"inverse", qft_inverse}}, {{"amplitudes", amplitudes}},
             "transformed " + std::to_string(state.dim()) + " amplitudes");
  });

  // shor
  std::uint64_t shor_n = 0;
  double shor_epsilon = 0.1;
  int shor_restarts = 10;
  auto* shor = app.add_subcommand("shor", "factor a composite number");
  shor->add_option("modulus", shor_n, "composite number to factor")->required();
  shor->add_option("--epsilon", shor_epsilon, "order-finding failure budget");
  shor->add_option("--restarts", shor_restarts, "restart cap");
  shor->callback([&] {
    const Session out(global, "shor");
    Rng rng(global.seed);
    qalg::ShorOptions options;
    options.max_restarts = shor_restarts;
    options.order.epsilon = shor_epsilon;
    const qalg::ShorResult result = qalg::shor_factor(shor_n, rng, options);
    json j;
    j["factor"] = result.factor;
    j["found"] = result.found;
    j["route"] = result.route;
    j["restarts"] = result.restarts;
    j["tried_bases"] = result.tried_bases;
    j["reduced_register"] = result.reduced_register;
    out.emit({{"modulus", shor_n}, {"epsilon", shor_epsilon}}, j,
             result.found ? std::to_string(shor_n) + " = " + std::to_string(result.factor) +
                                " * " + std::to_string(shor_n / result.factor)
                          : "no factor found within the restart cap");
  });

  // machine run
  auto* machine_cmd = app.add_subcommand("machine", "program machine utilities");
  std::string run_program, run_program_file;
  std::uint64_t run_budget = 64;
  auto* machine_run = machine_cmd->add_subcommand("run", "run a program under a step budget");
  machine_run->add_option("--program", run_program, "binary program");
  machine_run->add_option("--program-file", run_program_file,
                          "file of '0'/'1' lines; the first nonempty line is the program");
  machine_run->add_option("--budget", run_budget, "step budget");
  machine_run->callback([&] {
    const Session out(global, "machine run");
    const auto m = build_machine(global);
    if (!run_program_file.empty()) {
      std::ifstream in(run_program_file);
      if (!in) throw ValidationError("cannot open program file: " + run_program_file);
      std::string line;
      while (std::getline(in, line) && line.empty()) {
      }
      run_program = line;
    }
    if (run_program.empty()) throw ValidationError("give --program or --program-file");
    const machine::RunOutcome outcome = m->run_bounded(run_program, run_budget);
    json result;
    result["status"] = outcome.status == machine::RunOutcome::Status::kHalted
                           ? "HALTED"
                           : "BUDGET_EXHAUSTED";
    result["output"] = outcome.output;
    result["steps"] = outcome.steps;
    result["machine_id"] = m->id();
    out.emit({{"program", run_program}, {"budget", run_budget}}, result,
             result["status"].get<std::string>() + ", output \"" + outcome.output + "\"");
  });

  // kolmogorov
  std::string kol_x;
  int kol_max_len = 8, kol_phase = 12;
  auto* kol = app.add_subcommand("kolmogorov", "bounded shortest-program length");
  kol->add_option("x", kol_x, "target bit string")->required();
  kol->add_option("--max-len", kol_max_len, "program length cap");
  kol->add_option("--phase", kol_phase, "phase index fixing the budgets");
  kol->callback([&] {
    const Session out(global, "kolmogorov");
    const auto m = build_machine(global);
    const std::optional<int> k = machine::kolmogorov_bounded(*m, kol_x, kol_max_len, kol_phase);
    json result;
    result["found"] = k.has_value();
    if (k.has_value()) result["length"] = *k;
    result["machine_id"] = m->id();
    out.emit({{"x", kol_x}, {"max_len", kol_max_len}, {"phase", kol_phase}}, result,
             k.has_value() ? "shortest length " + std::to_string(*k)
                           : "no generating program within the caps");
  });

  // prior classical|qcount|dj, conditional, quasi
  auto* prior_cmd = app.add_subcommand("prior", "speed-prior estimators");
  std::string prior_x, prior_given;
  double prior_epsilon = 0.05, prior_k = 3.0;
  int prior_m_bits = 6;
  std::string prior_method = "classical";

  const auto run_plain_prior = [&](const std::string& method) {
    const Session out(global, "prior " + method);
    const auto m = build_machine(global);
    const prior::PriorOptions options =
        prior_options_from(global, prior_epsilon, prior_k, prior_m_bits);
    const Rng rng(global.seed);
    prior::PriorEstimate est;
    if (method == "classical") {
      est = prior::speed_prior_classical(prior_x, *m, options);
    } else if (method == "qcount") {
      est = prior::speed_prior_qcount(prior_x, *m, options, rng);
    } else {
      est = prior::speed_prior_dj(prior_x, *m, options, rng);
    }
    out.emit({{"x", prior_x}, {"epsilon", prior_epsilon}, {"k", prior_k},
              {"m_bits", prior_m_bits}},
             prior_record(est), "S(" + prior_x + ") ~= " + std::to_string(est.value));
  };

  for (const std::string method : {"classical", "qcount", "dj"}) {
    auto* sub = prior_cmd->add_subcommand(method, "fixed-length speed prior, " + method);
    sub->add_option("x", prior_x, "target bit string")->required();
    sub->add_option("--epsilon", prior_epsilon, "accuracy target (sampling methods)");
    sub->add_option("--k", prior_k, "confidence parameter");
    sub->add_option("--m-bits", prior_m_bits, "counting precision bits");
    sub->callback([&run_plain_prior, method] { run_plain_prior(method); });
  }

  auto* cond = prior_cmd->add_subcommand("conditional", "S(y|x) as a quotient of priors");
  cond->add_option("y", prior_x, "predicted string")->required();
  cond->add_option("--given", prior_given, "conditioning context x")->required();
  cond->add_option("--method", prior_method, "classical|qcount|dj");
  cond->add_option("--epsilon", prior_epsilon, "accuracy target");
  cond->add_option("--k", prior_k, "confidence parameter");
  cond->add_option("--m-bits", prior_m_bits, "counting precision bits");
  cond->callback([&] {
    const Session out(global, "prior conditional");
    const auto m = build_machine(global);
    const prior::PriorOptions options =
        prior_options_from(global, prior_epsilon, prior_k, prior_m_bits);
    const Rng rng(global.seed);
    const prior::ConditionalEstimate est = prior::conditional(
        prior_x, prior_given, prior::method_from_name(prior_method), *m, options, &rng);
    json result;
    result["value"] = est.value;
    result["error_bound"] = est.error_bound;
    result["numerator"] = prior_record(est.numerator);
    result["denominator"] = prior_record(est.denominator);
    out.emit({{"y", prior_x}, {"x", prior_given}, {"method", prior_method}}, result,
             "S(y|x) ~= " + std::to_string(est.value));
  });

  auto* quasi = prior_cmd->add_subcommand("quasi", "quasi-conditional speed prior");
  quasi->add_option("x", prior_x, "predicted string")->required();
  quasi->add_option("--given", prior_given, "conditioning context y");
  quasi->add_option("--method", prior_method, "classical|dj");
  quasi->add_option("--epsilon", prior_epsilon, "accuracy target");
  quasi->add_option("--k", prior_k, "confidence parameter");
  quasi->callback([&] {
    const Session out(global, "prior quasi");
    const auto m = build_machine(global);
    const prior::PriorOptions options =
        prior_options_from(global, prior_epsilon, prior_k, prior_m_bits);
    const Rng rng(global.seed);
    prior::PriorEstimate est;
    if (prior_method == "classical") {
      est = prior::quasi_conditional_classical(prior_x, prior_given, *m, options);
    } else if (prior_method == "dj") {
      est = prior::quasi_conditional(prior_x, prior_given, *m, options, rng);
    } else {
      throw ValidationError("quasi prior methods: classical, dj");
    }
    out.emit({{"x", prior_x}, {"y", prior_given}, {"method", prior_method}},
             prior_record(est),
             "S'(" + prior_x + ", " + prior_given + ") ~= " + std::to_string(est.value));
  });

  // laplace
  std::uint64_t laplace_ones = 0, laplace_total = 0;
  auto* laplace = app.add_subcommand("laplace", "rule of succession");
  laplace->add_option("--ones", laplace_ones, "observed ones")->required();
  laplace->add_option("--total", laplace_total, "observed total")->required();
  laplace->callback([&] {
    const Session out(global, "laplace");
    const double p = prior::laplace_rule(laplace_ones, laplace_total);
    out.emit({{"ones", laplace_ones}, {"total", laplace_total}},
             {{"probability", p}, {"failure_probability", 1.0 - p}},
             "next-one probability " + std::to_string(p));
  });

  // agent act / episode
  auto* agent_cmd = app.add_subcommand("agent", "expectimax agents");
  std::string agent_name = "aixi-spd";
  std::string agent_history;
  std::string agent_env = "pattern";
  std::string agent_pattern = "01";
  double agent_bias = 0.5;
  int agent_steps = 20, agent_depth = 2, agent_window = 1;
  double agent_epsilon = 0.0;
  std::string agent_prior_method = "classical";

  auto* act = agent_cmd->add_subcommand("act", "one decision from a given history");
  act->add_option("--agent", agent_name, "aixi-spd|aixiq");
  act->add_option("--history", agent_history, "comma list of action:observation:reward");
  act->add_option("--depth", agent_depth, "remaining decisions");
  act->add_option("--window", agent_window, "history steps carried into conditioning");
  act->add_option("--epsilon", agent_epsilon, "sampling accuracy override (aixiq)");
  act->add_option("--prior-method", agent_prior_method, "classical|dj (aixi-spd)");
  act->callback([&] {
    const Session out(global, "agent act");
    const auto m = build_machine(global);
    agent::PerceptHistory history;
    history.steps = parse_history(agent_history);
    agent::AgentOptions options;
    options.depth = agent_depth;
    options.history_window = agent_window;
    options.epsilon_override = agent_epsilon;
    options.prior.strict_paper_mode = global.strict_paper_mode;
    options.prior_method = prior::method_from_name(agent_prior_method);
    const Rng rng(global.seed);
    const agent::ActionDecision decision =
        agent_name == "aixiq" ? agent::aixiq_action(history, *m, options, rng)
                              : agent::aixi_spd_action(history, *m, options, &rng);
    json result;
    result["action"] = decision.action;
    result["values"] = decision.values;
    result["prior_calls"] = decision.prior_calls;
    result["epsilon_used"] = decision.epsilon_used;
    out.emit({{"agent", agent_name}, {"history", agent_history}, {"depth", agent_depth},
              {"window", agent_window}},
             result, "action " + std::to_string(decision.action));
  });

  auto* episode = agent_cmd->add_subcommand("episode", "run an agent-environment episode");
  episode->add_option("--agent", agent_name, "aixi-spd|aixiq|laplace|random");
  episode->add_option("--env", agent_env, "pattern|coin|match");
  episode->add_option("--pattern", agent_pattern, "observation pattern bits");
  episode->add_option("--bias", agent_bias, "coin bias");
  episode->add_option("--steps", agent_steps, "episode length");
  episode->add_option("--depth", agent_depth, "remaining decisions per step");
  episode->add_option("--window", agent_window, "history steps carried into conditioning");
  episode->add_option("--epsilon", agent_epsilon, "sampling accuracy override (aixiq)");
  episode->callback([&] {
    const Session out(global, "agent episode");
    const auto m = build_machine(global);
    agent::EnvironmentSpec env;
    if (agent_env == "pattern") {
      env.kind = agent::EnvironmentSpec::Kind::kDeterministicPattern;
      env.pattern = agent_pattern;
    } else if (agent_env == "coin") {
      env.kind = agent::EnvironmentSpec::Kind::kBiasedCoin;
      env.coin_bias = agent_bias;
    } else if (agent_env == "match") {
      env.kind = agent::EnvironmentSpec::Kind::kMatchLastObservation;
    } else {
      throw ValidationError("unknown environment: " + agent_env);
    }
    agent::AgentOptions options;
    options.depth = agent_depth;
    options.history_window = agent_window;
    options.epsilon_override = agent_epsilon;
    options.prior.strict_paper_mode = global.strict_paper_mode;
    const Rng rng(global.seed);
    const agent::EpisodeResult result = agent::run_episode(
        env, agent::agent_kind_from_name(agent_name), agent_steps, options, *m, rng);

    // Line-delimited step records, then the summary record.
    for (const agent::EpisodeStepLog& step : result.log) {
      json line;
      line["step"] = step.step;
      line["action"] = step.action;
      line["observation"] = step.observation;
      line["reward"] = step.reward;
      line["value_table"] = step.value_table;
      line["prior_calls"] = step.prior_calls;
      line["seed"] = result.seed;
      std::cout << line.dump() << "\n";
    }
    out.emit({{"agent", agent_name}, {"env", agent_env}, {"steps", agent_steps},
              {"depth", agent_depth}, {"window", agent_window}},
             {{"total_reward", result.total_reward}},
             "total reward " + std::to_string(result.total_reward) + " / " +
                 std::to_string(agent_steps));
  });

  // Accept the global flags after the subcommand too (`shor 15 --seed 7`).
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    cmd->fallthrough();
    for (CLI::App* sub : cmd->get_subcommands([](CLI::App*) { return true; })) {
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
