#include "qsp/agent.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace qsp::agent {

std::string encode_action(const Alphabets& alphabets, std::uint64_t action) {
  if (action >= alphabets.action_count()) throw ValidationError("action out of alphabet");
  return index_to_bits(action, alphabets.action_bits);
}

std::string encode_percept(const Alphabets& alphabets, std::uint64_t observation, int reward) {
  if (observation >= alphabets.observation_count()) {
    throw ValidationError("observation out of alphabet");
  }
  if (reward != 0 && reward != 1) throw ValidationError("rewards are binary");
  return index_to_bits(observation, alphabets.obs_bits) + (reward == 1 ? "1" : "0");
}

double aixiq_epsilon(const Alphabets& alphabets, int horizon, int depth) {
  const int symbol_bits = std::max(alphabets.obs_bits, alphabets.action_bits);
  const double lookahead = static_cast<double>(alphabets.observation_count()) *
                           static_cast<double>(alphabets.action_count()) *
                           static_cast<double>(depth - 1);
  const double epsilon = 1.0 / (static_cast<double>(symbol_bits) *
                                static_cast<double>(horizon) * std::pow(2.0, lookahead));
  // The published formula reaches 1 at a horizon of one step; keep the
  // accuracy target a valid probability.
  return std::min(epsilon, 0.5);
}

namespace {

// The exact quasi-conditional values recur across episode steps and seeds;
// they are pure in (machine, x, y, mode), so memoize process-wide.
std::mutex g_cache_mutex;
std::unordered_map<std::string, double> g_exact_cache;

double exact_quasi_value(const std::string& x, const std::string& y,
                         const machine::ProgramMachine& machine,
                         const prior::PriorOptions& options) {
  const std::string key = machine.id() + "|" + x + "|" + y + "|" +
                          (options.strict_paper_mode ? "s" : "d");
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    const auto it = g_exact_cache.find(key);
    if (it != g_exact_cache.end()) return it->second;
  }
  const double value = prior::quasi_conditional_classical(x, y, machine, options).value;
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  g_exact_cache.emplace(key, value);
  return value;
}

struct Evaluation {
  const PerceptHistory& history;
  const machine::ProgramMachine& machine;
  const AgentOptions& options;
  const Rng* rng;
  prior::PriorOptions prior_options;
  std::uint64_t prior_calls = 0;

  double leaf(const std::string& x, const std::string& y, double reward_sum) {
    ++prior_calls;
    if (options.prior_method == prior::Method::kClassical) {
      return reward_sum * exact_quasi_value(x, y, machine, prior_options);
    }
    if (rng == nullptr) throw ValidationError("sampling prior methods need a seeded rng");
    const Rng leaf_rng = rng->derive(prior_calls);
    return reward_sum *
           prior::quasi_conditional(x, y, machine, prior_options, leaf_rng).value;
  }

  // Alternating max over actions and sum over percepts; at depth zero the
  // accumulated reward weights the prior of the completed strings.
  double node(int depth_left, const std::string& x, const std::string& y,
              double reward_sum) {
    const Alphabets& a = history.alphabets;
    double best = 0.0;
    bool first = true;
    for (std::uint64_t action = 0; action < a.action_count(); ++action) {
      const std::string y_next = y + encode_action(a, action);
      double total = 0.0;
      for (std::uint64_t obs = 0; obs < a.observation_count(); ++obs) {
        for (int reward = 0; reward <= 1; ++reward) {
          const std::string x_next = x + encode_percept(a, obs, reward);
          total += depth_left == 1
                       ? leaf(x_next, y_next, reward_sum + reward)
                       : node(depth_left - 1, x_next, y_next, reward_sum + reward);
        }
      }
      if (first || total > best) best = total;
      first = false;
    }
    return best;
  }
};

ActionDecision decide(const PerceptHistory& history, const machine::ProgramMachine& machine,
                      const AgentOptions& options, const Rng* rng) {
  const Alphabets& a = history.alphabets;
  if (options.depth < 1) throw ValidationError("expectimax depth must be >= 1");

  const double leaves = std::pow(static_cast<double>(a.action_count()) *
                                     static_cast<double>(a.observation_count()) * 2.0,
                                 options.depth);
  if (leaves > static_cast<double>(options.max_tree_leaves)) {
    throw ResourceError("expectimax tree exceeds the configured budget");
  }

  // Conditioning strings: the most recent window of history plus the
  // future steps the recursion appends.
  const std::size_t window =
      std::min<std::size_t>(history.steps.size(),
                            static_cast<std::size_t>(options.history_window));
  std::string x_base, y_base;
  for (std::size_t i = history.steps.size() - window; i < history.steps.size(); ++i) {
    const Step& step = history.steps[i];
    y_base += encode_action(a, step.action);
    x_base += encode_percept(a, step.observation, step.reward);
  }

  Evaluation eval{history, machine, options, rng, options.prior, 0};
  const int total_bits = static_cast<int>(x_base.size()) + options.depth * a.percept_bits();
  if (total_bits > eval.prior_options.enumeration_cap &&
      options.prior_method == prior::Method::kClassical) {
    throw ResourceError("conditioning strings exceed the prior enumeration cap");
  }

  ActionDecision decision;
  decision.epsilon_used = eval.prior_options.epsilon;
  decision.k_confidence_used = static_cast<std::uint64_t>(eval.prior_options.k);

  for (std::uint64_t action = 0; action < a.action_count(); ++action) {
    const std::string y_next = y_base + encode_action(a, action);
    double total = 0.0;
    for (std::uint64_t obs = 0; obs < a.observation_count(); ++obs) {
      for (int reward = 0; reward <= 1; ++reward) {
        const std::string x_next = x_base + encode_percept(a, obs, reward);
        total += options.depth == 1
                     ? eval.leaf(x_next, y_next, reward)
                     : eval.node(options.depth - 1, x_next, y_next, reward);
      }
    }
    decision.values.push_back(total);
    if (total > decision.values[decision.action]) decision.action = action;
  }
  decision.prior_calls = eval.prior_calls;
  return decision;
}

}  // namespace

ActionDecision aixi_spd_action(const PerceptHistory& history,
                               const machine::ProgramMachine& machine,
                               const AgentOptions& options, const Rng* rng) {
  return decide(history, machine, options, rng);
}

ActionDecision aixiq_action(const PerceptHistory& history,
                            const machine::ProgramMachine& machine, const AgentOptions& options,
                            const Rng& rng) {
  AgentOptions q = options;
  q.prior_method = prior::Method::kDjSampling;
  if (options.epsilon_override > 0.0) {
    q.prior.epsilon = options.epsilon_override;
  } else {
    const int horizon =
        std::min<int>(static_cast<int>(history.steps.size()), options.history_window) +
        options.depth;
    q.prior.epsilon = aixiq_epsilon(history.alphabets, horizon, options.depth);
    q.prior.k = 100.0;  // published confidence parameter
  }
  const double trials = std::ceil(q.prior.k / (q.prior.epsilon * q.prior.epsilon));
  if (trials > static_cast<double>(options.max_trials_per_phase)) {
    throw ResourceError("per-phase trial count " + std::to_string(trials) +
                        " exceeds the cap; pass an accuracy override");
  }
  return decide(history, machine, q, &rng);
}

}  // namespace qsp::agent
