#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsp/common.hpp"
#include "qsp/gates.hpp"
#include "qsp/machine.hpp"

namespace qsp::prior {

enum class Method { kClassical, kQCount, kDjSampling };

std::string method_name(Method method);
Method method_from_name(std::string_view name);

struct PriorOptions {
  double epsilon = 0.05;  // per-phase accuracy target for sampling methods
  double k = 3.0;         // Hoeffding confidence parameter
  int m_bits = 6;         // counting precision bits
  int enumeration_cap = 12;
  // Verbatim published branches: the empty-string assignments S := 1 - 2^{-n^2}
  // (resp. 1 - 2^{-n} for the quasi variant), and the fraction-weighted
  // per-phase accumulation of the sampling algorithm. Off by default; the
  // default empty-string value is 1 so conditioning on the empty context
  // stays well defined.
  bool strict_paper_mode = false;
};

// A speed-prior value with its provenance: per-phase counts num_i for
// i = 1 .. n^2, the accumulated value sum_i 2^{-(i+n)} num_i, and the error
// budget of the estimator that produced it.
struct PriorEstimate {
  std::string x;
  std::optional<std::string> y;  // context, for the quasi-conditional variant
  Method method = Method::kClassical;
  double value = 0.0;
  std::vector<double> per_phase_counts;
  double error_bound = 0.0;  // absolute, on value
  double raw_error = 0.0;    // per-phase error radius before weighting
  double confidence = 1.0;   // lower bound on Pr[|value - truth| <= error_bound]
  std::uint64_t trials = 0;  // per-phase trial count (sampling methods)
  std::uint64_t seed = 0;
  std::string machine_id;
  bool clamped = false;  // some per-phase count was clamped into [0, 2^n]
};

// Exact fixed-length speed prior by full enumeration of {0,1}^n across
// phases 1 .. n^2.
PriorEstimate speed_prior_classical(std::string_view x, const machine::ProgramMachine& machine,
                                    const PriorOptions& options = {});

// Per-phase counts from quantum counting over the oracle f_i(p) = [p ->_i x],
// with the phase failure budget split as epsilon_i = epsilon / n^2 so the
// union bound leaves overall confidence 1 - epsilon.
PriorEstimate speed_prior_qcount(std::string_view x, const machine::ProgramMachine& machine,
                                 const PriorOptions& options, const Rng& rng);

// Per-phase counts from the trial-averaged promise-free Deutsch-Jozsa
// estimator: num_i = 2^n * fraction_i, ceil(k / epsilon^2) trials per phase.
PriorEstimate speed_prior_dj(std::string_view x, const machine::ProgramMachine& machine,
                             const PriorOptions& options, const Rng& rng);

// Quasi-conditional prior of x given context y: the same loops over the
// oracle f'_i(p) = [p y ->_i y x], programs p of length l(x).
PriorEstimate quasi_conditional_classical(std::string_view x, std::string_view y,
                                          const machine::ProgramMachine& machine,
                                          const PriorOptions& options = {});
PriorEstimate quasi_conditional(std::string_view x, std::string_view y,
                                const machine::ProgramMachine& machine,
                                const PriorOptions& options, const Rng& rng);

struct ConditionalEstimate {
  PriorEstimate numerator;    // S(xy)
  PriorEstimate denominator;  // S(x)
  double value = 0.0;
  double error_bound = 0.0;  // first-order propagated quotient error
};

// S(y | x) = S(xy) / S(x). The denominator must be positive and not
// dominated by its own error bound. `rng` is required for sampling methods.
ConditionalEstimate conditional(std::string_view y, std::string_view x, Method method,
                                const machine::ProgramMachine& machine,
                                const PriorOptions& options = {}, const Rng* rng = nullptr);

// The phase-i program oracle backing the estimators, exposed for tests and
// for driving the quantum subroutines directly.
qsim::OracleSpec phase_oracle(std::string_view x, int phase,
                              const machine::ProgramMachine& machine);
qsim::OracleSpec quasi_phase_oracle(std::string_view x, std::string_view y, int phase,
                                    const machine::ProgramMachine& machine);

// Bayes-Laplace rule of succession: (n_ones + 1) / (n_total + 2).
double laplace_rule(std::uint64_t n_ones, std::uint64_t n_total);

}  // namespace qsp::prior
