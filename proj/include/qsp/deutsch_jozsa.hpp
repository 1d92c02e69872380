#pragma once

#include <cstdint>

#include "qsp/gates.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

enum class DjVerdict { kConstant, kBalanced };

// Probability of reading all zeros on the first register after the circuit
// |0..0>|1> -> H^(n+1) -> U_f -> H on the first n qubits. Equals
// ((2^n - 2L) / 2^n)^2 where L = |{x : f(x) = 1}|. Exact, no sampling.
double dj_zero_outcome_probability(const qsim::OracleSpec& oracle);

// Decides the promise problem: kConstant when the all-zeros outcome has
// probability 1, kBalanced when it has probability 0. One oracle transform.
// An oracle outside the promise is rejected.
DjVerdict deutsch_jozsa(const qsim::OracleSpec& oracle);

// One trial of the promise-free variant: runs the same circuit, measures the
// first register, and reports 1 when the outcome is all zeros.
int modified_dj_trial(const qsim::OracleSpec& oracle, Rng& rng);

struct FractionEstimate {
  double fraction;        // estimate of L / 2^n, clamped to [0, 1/2]
  double mean;            // trial average X-bar, estimating ((2^n-2L)/2^n)^2
  std::uint64_t trials;   // ceil(k / epsilon^2)
  double epsilon;         // requested absolute error on the trial mean
  double k;               // confidence parameter; failure prob <= 2 e^{-2k}
  double raw_error;       // = epsilon, the Hoeffding radius on X-bar
  double fraction_error;  // the radius propagated through (1 - sqrt(.)) / 2
};

// Averages ceil(k / epsilon^2) trials and recovers L / 2^n via
// (1 - sqrt(X-bar)) / 2. Trial i draws from the stream rng.derive(i), so the
// estimate is reproducible under parallel evaluation.
FractionEstimate estimate_fraction(const qsim::OracleSpec& oracle, double epsilon, double k,
                                   const Rng& rng);

}  // namespace qsp::qalg
