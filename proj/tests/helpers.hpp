#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qsp/common.hpp"
#include "qsp/statevector.hpp"

namespace qsp::testing {

// Haar-ish random normalized state; good enough for property tests.
inline qsim::StateVector random_state(int num_qubits, Rng& rng) {
  std::vector<Complex> amps(std::size_t{1} << num_qubits);
  double norm_sq = 0.0;
  for (auto& a : amps) {
    // Box-Muller for roughly Gaussian components.
    const double u1 = std::max(rng.uniform(), 1e-12);
    const double u2 = rng.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    a = Complex(r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2));
    norm_sq += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto& a : amps) a *= scale;
  return qsim::StateVector::from_amplitudes(num_qubits, std::move(amps));
}

inline double max_amplitude_difference(const qsim::StateVector& a, const qsim::StateVector& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    worst = std::max(worst, std::abs(a.amplitudes()[i] - b.amplitudes()[i]));
  }
  return worst;
}

}  // namespace qsp::testing
