#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsp/common.hpp"

namespace qsp::qsim {

// Tolerance for norm / probability / unitarity checks.
inline constexpr double kTol = 1e-9;

// Register-width cap for newly created states. Configurable from the CLI.
int max_qubits();
void set_max_qubits(int cap);

// Dense state of an n-qubit register: 2^n complex amplitudes, unit L2 norm.
// Qubit 0 is the most significant bit of the basis index, so the basis state
// |q0 q1 ... q_{n-1}> sits at index q0*2^{n-1} + ... + q_{n-1}.
class StateVector {
 public:
  // |00...0>
  static StateVector ground(int num_qubits);
  // A single basis state.
  static StateVector basis(int num_qubits, std::uint64_t index);
  // Arbitrary amplitudes; must be length 2^n and normalized within kTol.
  static StateVector from_amplitudes(int num_qubits, std::vector<Complex> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::vector<Complex>& amplitudes() const { return amplitudes_; }
  Complex amplitude(std::uint64_t basis) const { return amplitudes_.at(basis); }

  double norm() const;

  // Bit position (shift amount) of a qubit within a basis index.
  int bit_position(int qubit) const { return num_qubits_ - 1 - qubit; }
  void require_qubit(int qubit) const;

  // Fails loudly if the norm drifted beyond kTol. Gate application calls
  // this after every transform; we never renormalize silently.
  void check_normalized() const;

  std::vector<Complex>& mutable_amplitudes() { return amplitudes_; }

 private:
  StateVector(int num_qubits, std::vector<Complex> amplitudes)
      : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {}

  int num_qubits_;
  std::vector<Complex> amplitudes_;
};

// new_state(n): |0...0> with the width cap enforced.
inline StateVector new_state(int num_qubits) { return StateVector::ground(num_qubits); }

// Kronecker product; a's qubits become the most significant ones, so
// tensor(|a>, |b>) = |ab>.
StateVector tensor(const StateVector& a, const StateVector& b);

// <a|b>, conjugate-linear in the first argument.
Complex inner(const StateVector& a, const StateVector& b);

// |b><a| as a dense row-major matrix with dim(b) rows and dim(a) columns.
std::vector<std::vector<Complex>> outer(const StateVector& a, const StateVector& b);

struct MeasurementOutcome {
  std::string bits;      // measured values, one char per requested qubit
  double probability;    // pre-measurement probability of this outcome
  // Renormalized state over the unmeasured qubits, in their original order.
  // Absent when every qubit was measured.
  std::optional<StateVector> collapsed;
};

// Exact marginal distribution over the listed qubits. Entry k is the
// probability of the bit pattern index_to_bits(k, qubits.size()), with
// qubits[0] read as the most significant position.
std::vector<double> probabilities(const StateVector& state, const std::vector<int>& qubits);

// Samples one outcome from the marginal distribution and collapses the state.
// Destructive: the input state is consumed.
MeasurementOutcome measure(StateVector state, const std::vector<int>& qubits, Rng& rng);

// Measure every qubit.
MeasurementOutcome measure_all(StateVector state, Rng& rng);

}  // namespace qsp::qsim
