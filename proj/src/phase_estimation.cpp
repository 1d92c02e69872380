#include "qsp/phase_estimation.hpp"

#include <cmath>

#include "qsp/qft.hpp"

namespace qsp::qalg {

int phase_register_width(int m, double epsilon) {
  if (m < 1) throw ValidationError("precision bits must be >= 1");
  if (epsilon <= 0.0 || epsilon >= 1.0) throw ValidationError("epsilon must lie in (0, 1)");
  const int extra = static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / (2.0 * epsilon))));
  return m + extra;
}

double phase_distance(double a, double b) {
  double d = std::fabs(a - b);
  d -= std::floor(d);
  return std::min(d, 1.0 - d);
}

qsim::StateVector phase_estimation_state(const std::vector<qsim::CMatrix>& u_powers,
                                         const qsim::StateVector& second, int t) {
  if (static_cast<int>(u_powers.size()) < t) {
    throw ValidationError("need U^(2^j) for every estimation qubit");
  }
  const int w = second.num_qubits();

  qsim::StateVector state = tensor(qsim::StateVector::ground(t), second);

  std::vector<int> top(static_cast<std::size_t>(t));
  for (int q = 0; q < t; ++q) top[static_cast<std::size_t>(q)] = q;
  state = apply_hadamards(std::move(state), top);

  std::vector<int> bottom(static_cast<std::size_t>(w));
  for (int q = 0; q < w; ++q) bottom[static_cast<std::size_t>(q)] = t + q;

  for (int c = 0; c < t; ++c) {
    const qsim::CMatrix& power = u_powers[static_cast<std::size_t>(t - 1 - c)];
    qsim::GateSpec gate = qsim::GateSpec::controlled(
        qsim::GateSpec::explicit_gate(power, bottom), {c});
    state = apply_gate(std::move(state), gate);
  }

  return inverse_qft(std::move(state), top);
}

std::vector<double> phase_outcome_distribution(const std::vector<qsim::CMatrix>& u_powers,
                                               const qsim::StateVector& second, int t) {
  const qsim::StateVector state = phase_estimation_state(u_powers, second, t);
  std::vector<int> top(static_cast<std::size_t>(t));
  for (int q = 0; q < t; ++q) top[static_cast<std::size_t>(q)] = q;
  return probabilities(state, top);
}

PhaseEstimate phase_estimate(const qsim::CMatrix& u, const qsim::StateVector& eigenstate,
                             int m, double epsilon, Rng& rng) {
  const int t = phase_register_width(m, epsilon);
  if (u.dim() != eigenstate.dim()) {
    throw ValidationError("unitary dimension does not match the eigenstate");
  }

  // Contract check: the second register must actually be an eigenvector.
  // lambda is the Rayleigh quotient <v|U|v>.
  const std::vector<Complex> uv = u.apply(eigenstate.amplitudes());
  Complex lambda(0.0);
  for (std::size_t i = 0; i < uv.size(); ++i) {
    lambda += std::conj(eigenstate.amplitudes()[i]) * uv[i];
  }
  double residual = 0.0;
  for (std::size_t i = 0; i < uv.size(); ++i) {
    residual += std::norm(uv[i] - lambda * eigenstate.amplitudes()[i]);
  }
  if (std::sqrt(residual) > 1e-6) {
    throw ValidationError("second register is not an eigenvector of the unitary");
  }

  const std::vector<qsim::CMatrix> powers = qsim::binary_powers(u, t);
  const std::vector<double> dist = phase_outcome_distribution(powers, eigenstate, t);

  const double roll = rng.uniform();
  double acc = 0.0;
  std::uint64_t outcome = dist.size() - 1;
  for (std::uint64_t j = 0; j < dist.size(); ++j) {
    acc += dist[j];
    if (roll < acc) {
      outcome = j;
      break;
    }
  }

  PhaseEstimate result;
  result.outcome = outcome;
  result.phase = static_cast<double>(outcome) / static_cast<double>(dist.size());
  result.precision_bits = m;
  result.t_register = t;
  result.confidence = 1.0 - epsilon;
  return result;
}

}  // namespace qsp::qalg
