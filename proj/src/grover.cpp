#include "qsp/grover.hpp"

#include <cmath>
#include <numbers>

namespace qsp::qalg {

double grover_angle(std::uint64_t n_items, std::uint64_t m_solutions) {
  if (m_solutions > n_items) throw ValidationError("more solutions than items");
  return 2.0 * std::asin(std::sqrt(static_cast<double>(m_solutions) /
                                   static_cast<double>(n_items)));
}

GroverIterationCount grover_iteration_count(std::uint64_t n_items, std::uint64_t m_solutions) {
  if (m_solutions == 0) throw ValidationError("iteration count undefined for zero solutions");
  const double theta = grover_angle(n_items, m_solutions);
  GroverIterationCount count;
  const double derived = std::numbers::pi / (2.0 * theta) - 0.5;
  count.derived = std::max(0, static_cast<int>(std::lround(derived)));
  count.display = static_cast<int>(std::ceil(
      std::numbers::pi / 4.0 *
      std::sqrt(static_cast<double>(n_items) / static_cast<double>(m_solutions))));
  return count;
}

double grover_success_probability(std::uint64_t n_items, std::uint64_t m_solutions, int k) {
  const double theta = grover_angle(n_items, m_solutions);
  const double s = std::sin((2.0 * k + 1.0) * theta / 2.0);
  return s * s;
}

qsim::StateVector grover_start_state(int n) {
  qsim::StateVector state = qsim::StateVector::basis(n + 1, 1);
  std::vector<int> all(static_cast<std::size_t>(n + 1));
  for (int q = 0; q <= n; ++q) all[static_cast<std::size_t>(q)] = q;
  return apply_hadamards(std::move(state), all);
}

qsim::StateVector grover_iterate(qsim::StateVector state, const qsim::OracleSpec& oracle) {
  const int n = oracle.arity();
  if (state.num_qubits() != n + 1) {
    throw ValidationError("state must hold the oracle inputs plus the prepared ancilla");
  }
  std::vector<int> inputs(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) inputs[static_cast<std::size_t>(q)] = q;

  state = apply_oracle(std::move(state), oracle, inputs, n);
  state = apply_hadamards(std::move(state), inputs);
  state = apply_gate(std::move(state), qsim::GateSpec::phase_flip_about_zero(inputs));
  return apply_hadamards(std::move(state), inputs);
}

GroverResult grover_search(const qsim::OracleSpec& oracle, std::uint64_t m_solutions, Rng& rng,
                           const GroverOptions& options) {
  const int n = oracle.arity();
  const std::uint64_t n_items = std::uint64_t{1} << n;
  if (m_solutions == 0) throw ValidationError("grover_search requires at least one solution");
  if (m_solutions > n_items) throw ValidationError("more solutions than items");

  const GroverIterationCount counts = grover_iteration_count(n_items, m_solutions);
  const int k = options.use_display_count ? counts.display : counts.derived;

  std::vector<int> inputs(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) inputs[static_cast<std::size_t>(q)] = q;

  GroverResult result;
  result.iterations = k;
  result.iterations_display = counts.display;
  result.success_probability = grover_success_probability(n_items, m_solutions, k);

  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    qsim::StateVector state = grover_start_state(n);
    for (int i = 0; i < k; ++i) state = grover_iterate(std::move(state), oracle);

    Rng attempt_rng = rng.derive(static_cast<std::uint64_t>(attempt));
    const qsim::MeasurementOutcome outcome = measure(std::move(state), inputs, attempt_rng);

    result.bits = outcome.bits;
    result.attempts = attempt;
    result.trial_log.push_back(outcome.bits);
    result.found = oracle.eval(bits_to_index(outcome.bits));
    if (result.found) return result;
  }
  return result;  // attempt cap exhausted; caller sees found == false
}

}  // namespace qsp::qalg
