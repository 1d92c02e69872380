#pragma once

#include <cstdint>
#include <vector>

#include "qsp/gates.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

// Width of the estimation register for m result bits and failure
// probability epsilon: t = m + ceil(log2(2 + 1/(2 epsilon))).
int phase_register_width(int m, double epsilon);

// Distance between two phases in [0, 1), wrapping around 1.
double phase_distance(double a, double b);

struct PhaseEstimate {
  double phase;         // measured t-bit dyadic, in [0, 1)
  std::uint64_t outcome;  // raw register value, phase = outcome / 2^t
  int precision_bits;   // m
  int t_register;       // t
  double confidence;    // 1 - epsilon
};

// Full register state after the estimation circuit: |0>^t tensor `second`,
// Hadamards on the top register, controlled U^{2^j} (control qubit c drives
// power 2^{t-1-c}), then the inverse Fourier transform on the top register.
// u_powers[j] must hold U^{2^j} for j = 0 .. t-1.
qsim::StateVector phase_estimation_state(const std::vector<qsim::CMatrix>& u_powers,
                                         const qsim::StateVector& second, int t);

// Exact outcome distribution of the top register, indexed by register value.
std::vector<double> phase_outcome_distribution(const std::vector<qsim::CMatrix>& u_powers,
                                               const qsim::StateVector& second, int t);

// Estimates the eigenphase omega of u on the given eigenstate, where
// u |v> = e^{2 pi i omega} |v>. With probability at least 1 - epsilon the
// result satisfies phase_distance(phase, omega) <= 2^-m.
// Rejects inputs that are not eigenvectors (residual above 1e-6).
PhaseEstimate phase_estimate(const qsim::CMatrix& u, const qsim::StateVector& eigenstate,
                             int m, double epsilon, Rng& rng);

}  // namespace qsp::qalg
