#include "qsp/environment.hpp"

#include "qsp/speed_prior.hpp"

namespace qsp::agent {

AgentKind agent_kind_from_name(std::string_view name) {
  if (name == "aixi-spd") return AgentKind::kAixiSpd;
  if (name == "aixiq") return AgentKind::kAixiq;
  if (name == "laplace") return AgentKind::kLaplaceBaseline;
  if (name == "random") return AgentKind::kRandom;
  throw ValidationError("unknown agent: " + std::string(name));
}

std::string agent_kind_name(AgentKind kind) {
  switch (kind) {
    case AgentKind::kAixiSpd: return "aixi-spd";
    case AgentKind::kAixiq: return "aixiq";
    case AgentKind::kLaplaceBaseline: return "laplace";
    case AgentKind::kRandom: return "random";
  }
  return "?";
}

namespace {

struct EnvState {
  const EnvironmentSpec& spec;
  Rng rng;
  std::vector<std::uint64_t> observations;  // o_1 .. o_{k-1}

  // Observation the environment will reveal at step k.
  std::uint64_t next_observation(int step) {
    switch (spec.kind) {
      case EnvironmentSpec::Kind::kDeterministicPattern: {
        if (spec.pattern.empty()) throw ValidationError("pattern must not be empty");
        require_bits(spec.pattern, "pattern");
        return spec.pattern[static_cast<std::size_t>((step - 1) %
                                                     static_cast<int>(spec.pattern.size()))] ==
                       '1'
                   ? 1
                   : 0;
      }
      case EnvironmentSpec::Kind::kBiasedCoin:
        return rng.bernoulli(spec.coin_bias) ? 1 : 0;
      case EnvironmentSpec::Kind::kMatchLastObservation:
        return rng.bernoulli(0.5) ? 1 : 0;
    }
    throw std::logic_error("unreachable environment kind");
  }

  int reward_for(int step, std::uint64_t action, std::uint64_t observation) const {
    switch (spec.kind) {
      case EnvironmentSpec::Kind::kDeterministicPattern:
      case EnvironmentSpec::Kind::kMatchLastObservation:
        return step >= 2 && action == observations[static_cast<std::size_t>(step - 2)] ? 1 : 0;
      case EnvironmentSpec::Kind::kBiasedCoin:
        return action == observation ? 1 : 0;
    }
    throw std::logic_error("unreachable environment kind");
  }
};

}  // namespace

EpisodeResult run_episode(const EnvironmentSpec& env, AgentKind agent, int episode_length,
                          const AgentOptions& options, const machine::ProgramMachine& machine,
                          const Rng& rng) {
  if (episode_length < 1) throw ValidationError("episode length must be >= 1");

  EnvState state{env, rng.derive(0), {}};
  PerceptHistory history;
  history.alphabets = env.alphabets;

  EpisodeResult result;
  result.seed = rng.seed();

  for (int step = 1; step <= episode_length; ++step) {
    EpisodeStepLog entry;
    entry.step = step;

    const Rng agent_rng = rng.derive(static_cast<std::uint64_t>(step));
    switch (agent) {
      case AgentKind::kAixiSpd: {
        const ActionDecision decision =
            aixi_spd_action(history, machine, options, &agent_rng);
        entry.action = decision.action;
        entry.value_table = decision.values;
        entry.prior_calls = decision.prior_calls;
        break;
      }
      case AgentKind::kAixiq: {
        const ActionDecision decision = aixiq_action(history, machine, options, agent_rng);
        entry.action = decision.action;
        entry.value_table = decision.values;
        entry.prior_calls = decision.prior_calls;
        break;
      }
      case AgentKind::kLaplaceBaseline: {
        // Predict the next observation with the rule of succession over the
        // observation history and play the likelier bit.
        std::uint64_t ones = 0;
        for (std::uint64_t o : state.observations) ones += o & 1ULL;
        const double p_one = prior::laplace_rule(ones, state.observations.size());
        entry.action = p_one >= 0.5 ? 1 : 0;
        break;
      }
      case AgentKind::kRandom: {
        Rng pick = agent_rng;
        entry.action = pick.below(env.alphabets.action_count());
        break;
      }
    }

    entry.observation = state.next_observation(step);
    entry.reward = state.reward_for(step, entry.action, entry.observation);
    state.observations.push_back(entry.observation);
    history.steps.push_back(Step{entry.action, entry.observation, entry.reward});
    result.total_reward += static_cast<std::uint64_t>(entry.reward);
    result.log.push_back(std::move(entry));
  }
  return result;
}

}  // namespace qsp::agent
