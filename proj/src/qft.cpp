#include "qsp/qft.hpp"

#include <cmath>
#include <numbers>

namespace qsp::qalg {

namespace {

// In-place radix-2 transform: x[l] := sum_j x[j] e^{sign * 2 pi i j l / K}.
// Unnormalized; the caller divides by sqrt(K).
void radix2_transform(std::vector<Complex>& x, double sign) {
  const std::size_t n = x.size();
  // Bit reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const Complex root = std::polar(1.0, angle);
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        const Complex u = x[i + j];
        const Complex v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
        w *= root;
      }
    }
  }
}

qsim::StateVector transform(qsim::StateVector state, const std::vector<int>& qubits,
                            double sign) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(std::size_t{1} << qubits.size()));
  qsim::detail::for_each_target_block(state, qubits, [&](std::vector<Complex>& block) {
    radix2_transform(block, sign);
    for (Complex& a : block) a *= scale;
  });
  state.check_normalized();
  return state;
}

}  // namespace

qsim::StateVector qft(qsim::StateVector state, const std::vector<int>& qubits) {
  return transform(std::move(state), qubits, +1.0);
}

qsim::StateVector inverse_qft(qsim::StateVector state, const std::vector<int>& qubits) {
  return transform(std::move(state), qubits, -1.0);
}

qsim::CMatrix qft_matrix(int num_qubits) {
  if (num_qubits < 1 || num_qubits > 13) {
    throw ValidationError("explicit QFT matrix limited to small registers");
  }
  const std::size_t dim = std::size_t{1} << num_qubits;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  qsim::CMatrix m(dim);
  for (std::size_t l = 0; l < dim; ++l) {
    for (std::size_t j = 0; j < dim; ++j) {
      const double angle =
          2.0 * std::numbers::pi * static_cast<double>(l * j % dim) / static_cast<double>(dim);
      m.at(l, j) = std::polar(scale, angle);
    }
  }
  return m;
}

}  // namespace qsp::qalg
