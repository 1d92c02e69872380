#include "qsp/deutsch_jozsa.hpp"

#include <algorithm>
#include <cmath>

namespace qsp::qalg {

namespace {

// |0..0>|1> -> H everywhere -> U_f -> H on the input register.
qsim::StateVector dj_circuit_state(const qsim::OracleSpec& oracle) {
  const int n = oracle.arity();
  qsim::StateVector state = qsim::StateVector::basis(n + 1, 1);  // ancilla |1>

  std::vector<int> all(static_cast<std::size_t>(n + 1));
  for (int q = 0; q <= n; ++q) all[static_cast<std::size_t>(q)] = q;
  state = apply_hadamards(std::move(state), all);

  std::vector<int> inputs(all.begin(), all.end() - 1);
  state = apply_oracle(std::move(state), oracle, inputs, n);
  return apply_hadamards(std::move(state), inputs);
}

std::vector<int> input_register(int n) {
  std::vector<int> qubits(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) qubits[static_cast<std::size_t>(q)] = q;
  return qubits;
}

}  // namespace

double dj_zero_outcome_probability(const qsim::OracleSpec& oracle) {
  const qsim::StateVector state = dj_circuit_state(oracle);
  return probabilities(state, input_register(oracle.arity()))[0];
}

DjVerdict deutsch_jozsa(const qsim::OracleSpec& oracle) {
  const double p0 = dj_zero_outcome_probability(oracle);
  if (std::fabs(p0 - 1.0) <= qsim::kTol) return DjVerdict::kConstant;
  if (p0 <= qsim::kTol) return DjVerdict::kBalanced;
  throw ValidationError("oracle violates the constant-or-balanced promise");
}

int modified_dj_trial(const qsim::OracleSpec& oracle, Rng& rng) {
  qsim::StateVector state = dj_circuit_state(oracle);
  const qsim::MeasurementOutcome outcome =
      measure(std::move(state), input_register(oracle.arity()), rng);
  return std::all_of(outcome.bits.begin(), outcome.bits.end(),
                     [](char c) { return c == '0'; })
             ? 1
             : 0;
}

FractionEstimate estimate_fraction(const qsim::OracleSpec& oracle, double epsilon, double k,
                                   const Rng& rng) {
  if (epsilon <= 0.0 || epsilon >= 1.0) throw ValidationError("epsilon must lie in (0, 1)");
  if (k < 1.0) throw ValidationError("confidence parameter k must be >= 1");

  const auto trials = static_cast<std::uint64_t>(std::ceil(k / (epsilon * epsilon)));

  // Each trial is a Bernoulli draw on the all-zeros outcome; evaluate its
  // probability once and sample the i.i.d. trials from per-trial streams.
  const double p0 = dj_zero_outcome_probability(oracle);
  std::uint64_t ones = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    ones += rng.stream_uniform(i) < p0 ? 1 : 0;
  }
  const double mean = static_cast<double>(ones) / static_cast<double>(trials);

  FractionEstimate est;
  est.mean = mean;
  est.trials = trials;
  est.epsilon = epsilon;
  est.k = k;
  est.fraction = std::clamp((1.0 - std::sqrt(mean)) / 2.0, 0.0, 0.5);
  est.raw_error = epsilon;
  // Interval propagation of the X-bar radius through (1 - sqrt(.)) / 2.
  const double root = std::sqrt(mean);
  const double lo = std::sqrt(std::max(mean - epsilon, 0.0));
  const double hi = std::sqrt(std::min(mean + epsilon, 1.0));
  est.fraction_error = std::max(root - lo, hi - root) / 2.0;
  return est;
}

}  // namespace qsp::qalg
