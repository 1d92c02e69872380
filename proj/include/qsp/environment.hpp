#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsp/agent.hpp"
#include "qsp/common.hpp"
#include "qsp/machine.hpp"

namespace qsp::agent {

// Toy episodic environments over binary observations and actions.
//   kDeterministicPattern: observations walk a fixed bit pattern; reward 1
//     from step 2 on when the action equals the previous observation.
//   kBiasedCoin: observations are coin flips; reward 1 when the action
//     called the current flip.
//   kMatchLastObservation: observations are fair flips; reward 1 from step 2
//     on when the action equals the previous observation.
struct EnvironmentSpec {
  enum class Kind { kDeterministicPattern, kBiasedCoin, kMatchLastObservation };
  Kind kind = Kind::kDeterministicPattern;
  std::string pattern = "01";
  double coin_bias = 0.5;
  Alphabets alphabets;
};

enum class AgentKind { kAixiSpd, kAixiq, kLaplaceBaseline, kRandom };

AgentKind agent_kind_from_name(std::string_view name);
std::string agent_kind_name(AgentKind kind);

struct EpisodeStepLog {
  int step = 0;  // 1-based
  std::uint64_t action = 0;
  std::uint64_t observation = 0;
  int reward = 0;
  std::vector<double> value_table;  // empty for policies without one
  std::uint64_t prior_calls = 0;
};

struct EpisodeResult {
  std::vector<EpisodeStepLog> log;
  std::uint64_t total_reward = 0;
  std::uint64_t seed = 0;
};

// Alternates agent decisions and environment responses for a fixed number
// of steps. Deterministic given the seed: the environment and the agent
// draw from separate derived streams.
EpisodeResult run_episode(const EnvironmentSpec& env, AgentKind agent, int episode_length,
                          const AgentOptions& options, const machine::ProgramMachine& machine,
                          const Rng& rng);

}  // namespace qsp::agent
