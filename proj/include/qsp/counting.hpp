#pragma once

#include <cstdint>
#include <vector>

#include "qsp/gates.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

// The Grover operator for counting, on n+1 qubits: the search space is
// doubled with one extra (least significant) qubit so that exactly the
// inputs (x, 0) with f(x) = 1 are marked; then sin^2(theta/2) = M / 2N.
// Returned as an explicit matrix for use under phase estimation.
qsim::CMatrix counting_grover_operator(const qsim::OracleSpec& oracle);

// Exact distribution of the t-bit estimation register when the Grover
// operator is phase-estimated on the uniform (n+1)-qubit state. Results are
// memoized per (truth table, t); the circuit is deterministic, so sampling
// many seeds from one distribution is exact.
std::vector<double> counting_outcome_distribution(const qsim::OracleSpec& oracle, int t);

struct CountEstimate {
  double m_hat;         // estimate of M, clamped to [0, 2^n]
  double m_hat_raw;     // 2N sin^2(theta_hat / 2) before clamping
  double theta_hat;     // folded angle in [0, pi]
  double theta_error;   // radius of the theta confidence interval (radians)
  double error_bound;   // |M_hat - M| bound at the stated confidence
  double confidence;    // 1 - epsilon
  bool clamped;         // m_hat_raw fell outside [0, 2^n]
  std::uint64_t outcome;  // raw register value
  int t_register;
  int precision_bits;
};

// Estimates M = |{x : f(x) = 1}| by phase-estimating the Grover operator.
// With probability at least 1 - epsilon the register value j satisfies
// phase_distance(j / 2^t, theta / 2 pi) <= 2^-m, which propagates to the
// reported theta_error and error_bound.
CountEstimate quantum_count(const qsim::OracleSpec& oracle, int m, double epsilon, Rng& rng);

// The estimate a given register outcome decodes to; exposed so exact
// distribution tests can fold and propagate exactly as quantum_count does.
CountEstimate decode_count_outcome(std::uint64_t outcome, int t, int n, int m, double epsilon);

}  // namespace qsp::qalg
