#pragma once

#include <vector>

#include "qsp/gates.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

// Fourier transform of the selected sub-register (qubits[0] most significant):
// amplitudes a_j -> (1/2^{k/2}) sum_j e^{+2 pi i j l / 2^k} a_j at index l.
// Every other qubit is left untouched. Runs as a radix-2 transform per
// amplitude block, so no 2^k x 2^k matrix is built.
qsim::StateVector qft(qsim::StateVector state, const std::vector<int>& qubits);

// Inverse transform (negated phases); inverse_qft(qft(s)) == s.
qsim::StateVector inverse_qft(qsim::StateVector state, const std::vector<int>& qubits);

// The k-qubit transform as an explicit matrix, for small k. Entry (l, j) is
// omega^{l j} / 2^{k/2} with omega the 2^k-th root of unity.
qsim::CMatrix qft_matrix(int num_qubits);

}  // namespace qsp::qalg
