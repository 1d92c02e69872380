#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsp/gates.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

// Rotation angle of one Grover iteration: sin(theta/2) = sqrt(M/N).
double grover_angle(std::uint64_t n_items, std::uint64_t m_solutions);

struct GroverIterationCount {
  int derived;  // round(pi / (2 theta) - 1/2), clamped at 0; maximizes success
  int display;  // ceil((pi/4) sqrt(N/M)); can overshoot the peak for small N
};
GroverIterationCount grover_iteration_count(std::uint64_t n_items, std::uint64_t m_solutions);

// Success probability of measuring a marked item after k iterations:
// sin^2((2k+1) theta / 2).
double grover_success_probability(std::uint64_t n_items, std::uint64_t m_solutions, int k);

// Uniform (n+1)-qubit start state for the search: H^(n+1) applied to
// |0..0>|1>, i.e. uniform inputs tensor the (|0>-|1>)/sqrt(2) ancilla.
qsim::StateVector grover_start_state(int n);

// One Grover rotation G = H^n (2|0><0| - I) H^n U_f on a state that carries
// the prepared ancilla as its last qubit.
qsim::StateVector grover_iterate(qsim::StateVector state, const qsim::OracleSpec& oracle);

struct GroverOptions {
  int max_attempts = 10;
  bool use_display_count = false;  // take the ceil form instead of the derived one
};

struct GroverResult {
  std::string bits;            // measured input, verified when `found`
  bool found;                  // f(bits) == 1 confirmed classically
  int iterations;              // count actually used per attempt
  int iterations_display;      // the ceil form, recorded alongside
  int attempts;                // attempts consumed (1-based)
  double success_probability;  // per-attempt closed-form probability
  std::vector<std::string> trial_log;  // measured bits, one entry per attempt
};

// Searches for an input with f(x) = 1 given the exact number of solutions.
// Measures, verifies classically, and retries up to the attempt cap.
GroverResult grover_search(const qsim::OracleSpec& oracle, std::uint64_t m_solutions, Rng& rng,
                           const GroverOptions& options = {});

}  // namespace qsp::qalg
