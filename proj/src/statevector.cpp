#include "qsp/statevector.hpp"

#include <algorithm>
#include <cmath>

namespace qsp::qsim {

namespace {
int g_max_qubits = 24;
}  // namespace

int max_qubits() { return g_max_qubits; }

void set_max_qubits(int cap) {
  if (cap < 1) throw ValidationError("max_qubits cap must be positive");
  g_max_qubits = cap;
}

StateVector StateVector::ground(int num_qubits) {
  if (num_qubits < 1) throw ValidationError("num_qubits must be >= 1");
  if (num_qubits > g_max_qubits) {
    throw ResourceError("register of " + std::to_string(num_qubits) +
                        " qubits exceeds the cap of " + std::to_string(g_max_qubits));
  }
  std::vector<Complex> amps(std::size_t{1} << num_qubits, Complex(0.0));
  amps[0] = Complex(1.0);
  return StateVector(num_qubits, std::move(amps));
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s = ground(num_qubits);
  if (index >= s.dim()) throw ValidationError("basis index out of range");
  s.amplitudes_[0] = Complex(0.0);
  s.amplitudes_[index] = Complex(1.0);
  return s;
}

StateVector StateVector::from_amplitudes(int num_qubits, std::vector<Complex> amplitudes) {
  StateVector s = ground(num_qubits);
  if (amplitudes.size() != s.dim()) {
    throw ValidationError("amplitude vector has length " + std::to_string(amplitudes.size()) +
                          ", expected " + std::to_string(s.dim()));
  }
  s.amplitudes_ = std::move(amplitudes);
  if (std::abs(s.norm() - 1.0) > kTol) {
    throw ValidationError("amplitudes are not normalized");
  }
  return s;
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const Complex& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

void StateVector::require_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range for " +
                          std::to_string(num_qubits_) + " qubits");
  }
}

void StateVector::check_normalized() const {
  if (std::abs(norm() - 1.0) > kTol) {
    throw std::logic_error("state norm drifted beyond tolerance: " + std::to_string(norm()));
  }
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  StateVector out = StateVector::ground(a.num_qubits() + b.num_qubits());
  auto& amps = out.mutable_amplitudes();
  const std::size_t dim_b = b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i) {
    for (std::size_t j = 0; j < dim_b; ++j) {
      amps[i * dim_b + j] = a.amplitudes()[i] * b.amplitudes()[j];
    }
  }
  return out;
}

Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("inner product requires equal dimensions");
  }
  Complex sum(0.0);
  for (std::size_t i = 0; i < a.dim(); ++i) {
    sum += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return sum;
}

std::vector<std::vector<Complex>> outer(const StateVector& a, const StateVector& b) {
  std::vector<std::vector<Complex>> m(b.dim(), std::vector<Complex>(a.dim()));
  for (std::size_t i = 0; i < b.dim(); ++i) {
    for (std::size_t j = 0; j < a.dim(); ++j) {
      m[i][j] = b.amplitudes()[i] * std::conj(a.amplitudes()[j]);
    }
  }
  return m;
}

namespace {

void require_distinct_qubits(const StateVector& state, const std::vector<int>& qubits) {
  if (qubits.empty()) throw ValidationError("qubit list must not be empty");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    state.require_qubit(qubits[i]);
    for (std::size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) {
        throw ValidationError("qubit indices must be distinct");
      }
    }
  }
}

// Value of the listed qubits inside basis index b, qubits[0] most significant.
std::uint64_t extract_outcome(const StateVector& state, const std::vector<int>& qubits,
                              std::uint64_t b) {
  std::uint64_t v = 0;
  for (int q : qubits) {
    v = (v << 1) | ((b >> state.bit_position(q)) & 1ULL);
  }
  return v;
}

}  // namespace

std::vector<double> probabilities(const StateVector& state, const std::vector<int>& qubits) {
  require_distinct_qubits(state, qubits);
  std::vector<double> probs(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t b = 0; b < state.dim(); ++b) {
    probs[extract_outcome(state, qubits, b)] += std::norm(state.amplitudes()[b]);
  }
  return probs;
}

MeasurementOutcome measure(StateVector state, const std::vector<int>& qubits, Rng& rng) {
  std::vector<double> probs = probabilities(state, qubits);

  const double u = rng.uniform();
  double acc = 0.0;
  std::uint64_t outcome = probs.size() - 1;  // guard against rounding at u ~ 1
  for (std::uint64_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) {
      outcome = k;
      break;
    }
  }

  MeasurementOutcome result;
  result.bits = index_to_bits(outcome, static_cast<int>(qubits.size()));
  result.probability = probs[outcome];

  const int remaining = state.num_qubits() - static_cast<int>(qubits.size());
  if (remaining > 0) {
    std::vector<int> kept;
    kept.reserve(static_cast<std::size_t>(remaining));
    for (int q = 0; q < state.num_qubits(); ++q) {
      if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) kept.push_back(q);
    }
    std::vector<Complex> amps(std::size_t{1} << remaining, Complex(0.0));
    const double scale = 1.0 / std::sqrt(result.probability);
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
      if (extract_outcome(state, qubits, b) != outcome) continue;
      amps[extract_outcome(state, kept, b)] = state.amplitudes()[b] * scale;
    }
    result.collapsed = StateVector::from_amplitudes(remaining, std::move(amps));
  }
  return result;
}

MeasurementOutcome measure_all(StateVector state, Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(state.num_qubits()));
  for (int q = 0; q < state.num_qubits(); ++q) all[static_cast<std::size_t>(q)] = q;
  return measure(std::move(state), all, rng);
}

}  // namespace qsp::qsim
