#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "qsp/agent.hpp"
#include "qsp/environment.hpp"
#include "qsp/machine.hpp"
#include "qsp/speed_prior.hpp"

using namespace qsp;
using namespace qsp::agent;
using qsp::machine::sk2;

namespace {

// Test-side quasi-prior: direct double loop over programs and phases.
double brute_quasi(const std::string& x, const std::string& y,
                   const machine::ProgramMachine& m) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return 1.0;
  const std::string target = y + x;
  double total = 0.0;
  for (std::uint64_t p = 0; p < (std::uint64_t{1} << n); ++p) {
    const std::string program = index_to_bits(p, n) + y;
    for (int i = 1; i <= n * n; ++i) {
      if (m.emits_prefix(program, machine::phase_budget(i, program.size()), target)) {
        total += std::pow(2.0, -(i + n));
      }
    }
  }
  return total;
}

// Independent expectimax written straight from the displayed recursion:
// max over actions of the sum over percepts of [future reward] * prior.
double brute_node(const Alphabets& a, const machine::ProgramMachine& m, int depth_left,
                  const std::string& x, const std::string& y, int reward_sum) {
  double best = 0.0;
  bool first = true;
  for (std::uint64_t action = 0; action < a.action_count(); ++action) {
    double total = 0.0;
    for (std::uint64_t obs = 0; obs < a.observation_count(); ++obs) {
      for (int r = 0; r <= 1; ++r) {
        const std::string x2 = x + encode_percept(a, obs, r);
        const std::string y2 = y + encode_action(a, action);
        total += depth_left == 1
                     ? (reward_sum + r) * brute_quasi(x2, y2, m)
                     : brute_node(a, m, depth_left - 1, x2, y2, reward_sum + r);
      }
    }
    if (first || total > best) best = total;
    first = false;
  }
  return best;
}

std::uint64_t brute_decision(const PerceptHistory& h, const machine::ProgramMachine& m,
                             int window, int depth, std::vector<double>* values = nullptr) {
  const Alphabets& a = h.alphabets;
  std::string x, y;
  const std::size_t keep = std::min<std::size_t>(h.steps.size(), window);
  for (std::size_t i = h.steps.size() - keep; i < h.steps.size(); ++i) {
    y += encode_action(a, h.steps[i].action);
    x += encode_percept(a, h.steps[i].observation, h.steps[i].reward);
  }
  std::uint64_t best_action = 0;
  double best = 0.0;
  bool first = true;
  for (std::uint64_t action = 0; action < a.action_count(); ++action) {
    double total = 0.0;
    for (std::uint64_t obs = 0; obs < a.observation_count(); ++obs) {
      for (int r = 0; r <= 1; ++r) {
        const std::string x2 = x + encode_percept(a, obs, r);
        const std::string y2 = y + encode_action(a, action);
        total += depth == 1 ? r * brute_quasi(x2, y2, m)
                            : brute_node(a, m, depth - 1, x2, y2, r);
      }
    }
    if (values != nullptr) values->push_back(total);
    if (first || total > best) {
      best = total;
      best_action = action;
      first = false;
    }
  }
  return best_action;
}

PerceptHistory history_from(std::initializer_list<Step> steps) {
  PerceptHistory h;
  h.steps = steps;
  return h;
}

}  // namespace

TEST_CASE("percept and action encodings") {
  Alphabets a;
  CHECK(encode_percept(a, 1, 0) == "10");
  CHECK(encode_percept(a, 0, 1) == "01");
  CHECK(encode_action(a, 1) == "1");

  Alphabets wide{2, 2};
  CHECK(encode_percept(wide, 2, 1) == "101");
  CHECK(encode_action(wide, 3) == "11");
  CHECK_THROWS_AS(encode_action(wide, 4), ValidationError);
  CHECK_THROWS_AS(encode_percept(a, 0, 2), ValidationError);
}

TEST_CASE("degenerate one-step expectimax picks the rewarded action") {
  // A machine whose programs echo themselves makes the prior favor the
  // percept matching the action context exactly; with one action mapped to
  // reward 1 the decision follows it.
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  const PerceptHistory h =
      history_from({Step{1, 1, 1}, Step{1, 1, 1}});
  const ActionDecision d = aixi_spd_action(h, sk2(), options);
  REQUIRE(d.values.size() == 2);
  // Constant-ones target strings are loop-reachable; alternatives are not.
  CHECK(d.values[1] > d.values[0]);
  CHECK(d.action == 1);
}

TEST_CASE("ties break to the lexicographically smallest action") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  // Empty history at this scale gives all-zero values on the reference
  // machine: a genuine tie.
  const PerceptHistory h = history_from({});
  const ActionDecision d = aixi_spd_action(h, sk2(), options);
  CHECK(d.values[0] == d.values[1]);
  CHECK(d.action == 0);
}

TEST_CASE("scaling the value table never changes the argmax") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  const PerceptHistory h = history_from({Step{1, 1, 1}, Step{1, 1, 1}});
  const ActionDecision d = aixi_spd_action(h, sk2(), options);

  for (double scale : {0.25, 3.0, 1e6}) {
    std::uint64_t rescaled_argmax = 0;
    for (std::size_t a = 1; a < d.values.size(); ++a) {
      if (scale * d.values[a] > scale * d.values[rescaled_argmax]) {
        rescaled_argmax = a;
      }
    }
    CHECK(rescaled_argmax == d.action);
  }
}

TEST_CASE("decisions equal the independent brute-force expectimax everywhere") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;

  // Every history of length <= 2 over the binary alphabets.
  std::vector<PerceptHistory> histories;
  histories.push_back(history_from({}));
  for (std::uint64_t a = 0; a < 2; ++a) {
    for (std::uint64_t o = 0; o < 2; ++o) {
      for (int r = 0; r <= 1; ++r) {
        histories.push_back(history_from({Step{a, o, r}}));
        for (std::uint64_t a2 = 0; a2 < 2; ++a2) {
          for (std::uint64_t o2 = 0; o2 < 2; ++o2) {
            for (int r2 = 0; r2 <= 1; ++r2) {
              histories.push_back(history_from({Step{a, o, r}, Step{a2, o2, r2}}));
            }
          }
        }
      }
    }
  }
  REQUIRE(histories.size() == 73);

  for (const PerceptHistory& h : histories) {
    std::vector<double> brute_values;
    const std::uint64_t expected = brute_decision(h, sk2(), 2, 1, &brute_values);
    const ActionDecision d = aixi_spd_action(h, sk2(), options);
    CHECK(d.action == expected);
    for (std::size_t i = 0; i < brute_values.size(); ++i) {
      CHECK(d.values[i] == doctest::Approx(brute_values[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-ply decisions also match the brute force") {
  AgentOptions options;
  options.depth = 2;
  options.history_window = 1;
  for (const PerceptHistory& h :
       {history_from({Step{1, 1, 1}}), history_from({Step{0, 1, 0}}),
        history_from({Step{1, 0, 1}, Step{0, 0, 1}})}) {
    const std::uint64_t expected = brute_decision(h, sk2(), 1, 2);
    const ActionDecision d = aixi_spd_action(h, sk2(), options);
    CHECK(d.action == expected);
  }
}

TEST_CASE("prior call accounting matches the tree shape") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  const PerceptHistory h = history_from({Step{1, 1, 1}});
  CHECK(aixi_spd_action(h, sk2(), options).prior_calls == 8);  // (|A| |O||R|)^1

  options.depth = 2;
  CHECK(aixi_spd_action(h, sk2(), options).prior_calls == 64);  // (|A| |O||R|)^2
}

TEST_CASE("tree and enumeration budgets raise resource errors") {
  AgentOptions options;
  options.depth = 1;
  options.max_tree_leaves = 4;
  CHECK_THROWS_AS(aixi_spd_action(history_from({}), sk2(), options), ResourceError);

  AgentOptions wide;
  wide.depth = 1;
  wide.history_window = 8;  // 9 steps * 2 bits > enumeration cap
  PerceptHistory big;
  for (int i = 0; i < 8; ++i) big.steps.push_back(Step{0, 0, 0});
  CHECK_THROWS_AS(aixi_spd_action(big, sk2(), wide), ResourceError);
}

TEST_CASE("published accuracy formula and its guard") {
  Alphabets a;
  // One remaining decision: epsilon = 1 / (n m 2^0), clamped below 1.
  CHECK(aixiq_epsilon(a, 4, 1) == doctest::Approx(0.25));
  CHECK(aixiq_epsilon(a, 1, 1) == doctest::Approx(0.5));  // formula reaches 1
  // Two remaining decisions: 1 / (n m 2^(|O||A|)) = 1 / (m 16).
  CHECK(aixiq_epsilon(a, 3, 2) == doctest::Approx(1.0 / 48.0));

  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  options.max_trials_per_phase = 100;  // force the guard
  Rng rng(3);
  CHECK_THROWS_AS(aixiq_action(history_from({}), sk2(), options, rng), ResourceError);
}

TEST_CASE("sampling agent matches the exact agent on a gapped instance") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;
  options.epsilon_override = 0.05;
  options.prior.k = 3.0;

  const PerceptHistory h = history_from({Step{1, 1, 1}, Step{1, 1, 1}});
  const std::uint64_t exact_action = aixi_spd_action(h, sk2(), options).action;

  int matches = 0;
  const Rng base(107);
  for (int s = 0; s < 100; ++s) {
    const Rng rng = base.derive(static_cast<std::uint64_t>(s));
    const ActionDecision d = aixiq_action(h, sk2(), options, rng);
    if (d.action == exact_action) ++matches;
    CHECK(d.epsilon_used == doctest::Approx(0.05));
  }
  CHECK(matches >= 95);
}

TEST_CASE("sampling agent is exact (and tie-deterministic) in an all-zero world") {
  AgentOptions options;
  options.depth = 1;
  options.history_window = 1;
  options.epsilon_override = 0.05;

  const PerceptHistory h = history_from({Step{0, 1, 0}});
  const Rng base(109);
  for (int s = 0; s < 20; ++s) {
    const Rng rng = base.derive(static_cast<std::uint64_t>(s));
    const ActionDecision d = aixiq_action(h, sk2(), options, rng);
    CHECK(d.action == 0);
    CHECK(d.values[0] == 0.0);
    CHECK(d.values[1] == 0.0);
  }
}

// --- environments -----------------------------------------------------------

TEST_CASE("pattern environment rewards copying the previous observation") {
  EnvironmentSpec env;
  env.kind = EnvironmentSpec::Kind::kDeterministicPattern;
  env.pattern = "01";

  const Rng rng(211);
  const EpisodeResult episode = run_episode(env, AgentKind::kRandom, 30, {}, sk2(), rng);
  REQUIRE(episode.log.size() == 30);
  CHECK(episode.log[0].reward == 0);  // no previous observation at step 1
  for (std::size_t k = 0; k < episode.log.size(); ++k) {
    CHECK(episode.log[k].observation ==
          static_cast<std::uint64_t>(k % 2));  // pattern 0,1,0,1,...
    if (k >= 1) {
      const int expected =
          episode.log[k].action == episode.log[k - 1].observation ? 1 : 0;
      CHECK(episode.log[k].reward == expected);
    }
  }

  // A copy policy would earn reward everywhere from step 2 on; verify the
  // upper envelope directly against the environment's own log.
  std::uint64_t copy_reward = 0;
  for (std::size_t k = 1; k < episode.log.size(); ++k) {
    copy_reward += 1;  // copying log[k-1].observation always matches
  }
  CHECK(copy_reward == 29);
}

TEST_CASE("random agent on a fair coin earns near half") {
  EnvironmentSpec env;
  env.kind = EnvironmentSpec::Kind::kBiasedCoin;
  env.coin_bias = 0.5;

  const Rng rng(223);
  const EpisodeResult episode = run_episode(env, AgentKind::kRandom, 1000, {}, sk2(), rng);
  const double mean = static_cast<double>(episode.total_reward) / 1000.0;
  CHECK(std::fabs(mean - 0.5) <= 3.0 * std::sqrt(0.25 / 1000.0));
}

TEST_CASE("the rule-of-succession baseline learns a loaded coin") {
  EnvironmentSpec env;
  env.kind = EnvironmentSpec::Kind::kBiasedCoin;
  env.coin_bias = 0.9;

  const Rng base(227);
  int wins = 0;
  for (int s = 0; s < 50; ++s) {
    const Rng rng = base.derive(static_cast<std::uint64_t>(s));
    const EpisodeResult laplace =
        run_episode(env, AgentKind::kLaplaceBaseline, 30, {}, sk2(), rng);
    const EpisodeResult random = run_episode(env, AgentKind::kRandom, 30, {}, sk2(), rng);
    if (laplace.total_reward > random.total_reward) ++wins;
  }
  CHECK(wins >= 45);
}

TEST_CASE("episodes are deterministic under a fixed seed") {
  EnvironmentSpec env;
  env.kind = EnvironmentSpec::Kind::kMatchLastObservation;

  AgentOptions options;
  options.depth = 1;
  options.history_window = 2;

  const Rng rng(229);
  const EpisodeResult a = run_episode(env, AgentKind::kAixiSpd, 8, options, sk2(), rng);
  const EpisodeResult b = run_episode(env, AgentKind::kAixiSpd, 8, options, sk2(), rng);
  REQUIRE(a.log.size() == b.log.size());
  for (std::size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].action == b.log[i].action);
    CHECK(a.log[i].observation == b.log[i].observation);
    CHECK(a.log[i].reward == b.log[i].reward);
  }
  CHECK(a.total_reward == b.total_reward);
}

TEST_CASE("the expectimax agent on the pattern environment sits at chance") {
  // Structural result, pinned deliberately: on the reference machine the
  // reward-1 continuations of this environment are never loop-reachable, so
  // every value ties, the agent plays the constant smallest action, and
  // earns reward on exactly the even steps.
  EnvironmentSpec env;
  env.kind = EnvironmentSpec::Kind::kDeterministicPattern;
  env.pattern = "01";

  AgentOptions options;
  options.depth = 1;
  options.history_window = 3;

  const Rng rng(233);
  const EpisodeResult episode = run_episode(env, AgentKind::kAixiSpd, 20, options, sk2(), rng);
  CHECK(episode.total_reward == 10);
}
