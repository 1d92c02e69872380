#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsp/common.hpp"
#include "qsp/machine.hpp"
#include "qsp/speed_prior.hpp"

namespace qsp::agent {

// Fixed-width binary encodings: a percept packs the observation bits and a
// single reward bit into one block, actions go in a separate block.
struct Alphabets {
  int obs_bits = 1;
  int action_bits = 1;

  int percept_bits() const { return obs_bits + 1; }
  std::uint64_t observation_count() const { return std::uint64_t{1} << obs_bits; }
  std::uint64_t action_count() const { return std::uint64_t{1} << action_bits; }
};

struct Step {
  std::uint64_t action = 0;
  std::uint64_t observation = 0;
  int reward = 0;  // rewards are binary
};

struct PerceptHistory {
  Alphabets alphabets;
  std::vector<Step> steps;
};

std::string encode_action(const Alphabets& alphabets, std::uint64_t action);
std::string encode_percept(const Alphabets& alphabets, std::uint64_t observation, int reward);

struct AgentOptions {
  // Remaining decisions in the expectimax tree, m - k + 1.
  int depth = 2;
  // Most recent history steps carried into the conditioning strings. The
  // exact prior enumerates 2^(percept bits * steps) programs, so unbounded
  // histories are out of reach; the window keeps episodes tractable.
  int history_window = 1;
  prior::Method prior_method = prior::Method::kClassical;
  prior::PriorOptions prior;
  // Sampling accuracy for the quantum agent; zero means the published
  // formula 1 / (n m 2^(|O||A|(m-k))) with confidence parameter 100.
  double epsilon_override = 0.0;
  std::uint64_t max_tree_leaves = std::uint64_t{1} << 16;
  std::uint64_t max_trials_per_phase = 10'000'000;
};

struct ActionDecision {
  std::uint64_t action = 0;            // argmax, ties to the smallest encoding
  std::vector<double> values;          // expectimax value per candidate action
  std::uint64_t prior_calls = 0;       // prior evaluations consumed
  double epsilon_used = 0.0;           // per-call epsilon on the sampling path
  std::uint64_t k_confidence_used = 0; // Hoeffding parameter on the sampling path
};

// Expectimax over future action/percept sequences, weighting each complete
// continuation by the quasi-conditional prior of its percept string given
// its action string. Exact when the prior method is the classical
// enumeration; `rng` is only needed for sampling methods.
ActionDecision aixi_spd_action(const PerceptHistory& history,
                               const machine::ProgramMachine& machine,
                               const AgentOptions& options, const Rng* rng = nullptr);

// The same expectimax driven by the sampled quasi-conditional estimator.
ActionDecision aixiq_action(const PerceptHistory& history,
                            const machine::ProgramMachine& machine, const AgentOptions& options,
                            const Rng& rng);

// The published per-call accuracy for the sampling agent.
double aixiq_epsilon(const Alphabets& alphabets, int horizon, int depth);

}  // namespace qsp::agent
