#include "qsp/counting.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>

#include "qsp/phase_estimation.hpp"

namespace qsp::qalg {

qsim::CMatrix counting_grover_operator(const qsim::OracleSpec& oracle) {
  const int n = oracle.arity();
  if (n > 12) throw ResourceError("counting operator too wide to materialize");
  const std::size_t dim = std::size_t{1} << (n + 1);

  // D = 2|psi><psi| - I over the uniform |psi>, composed with the phase
  // oracle O|z> = (-1)^{marked(z)} |z>. G = D * O, so column z of D picks up
  // the sign of z.
  qsim::CMatrix g(dim);
  const double two_over_dim = 2.0 / static_cast<double>(dim);
  for (std::size_t col = 0; col < dim; ++col) {
    const bool marked = (col & 1ULL) == 0 && oracle.eval(col >> 1);
    const double sign = marked ? -1.0 : 1.0;
    for (std::size_t row = 0; row < dim; ++row) {
      double d = two_over_dim;
      if (row == col) d -= 1.0;
      g.at(row, col) = Complex(sign * d);
    }
  }
  return g;
}

namespace {

std::vector<double> build_distribution(const qsim::OracleSpec& oracle, int t) {
  const int n = oracle.arity();
  const qsim::CMatrix g = counting_grover_operator(oracle);
  const std::vector<qsim::CMatrix> powers = qsim::binary_powers(g, t);

  std::vector<int> all(static_cast<std::size_t>(n + 1));
  for (int q = 0; q <= n; ++q) all[static_cast<std::size_t>(q)] = q;
  const qsim::StateVector uniform =
      apply_hadamards(qsim::StateVector::ground(n + 1), all);

  return phase_outcome_distribution(powers, uniform, t);
}

std::mutex g_cache_mutex;
std::unordered_map<std::string, std::vector<double>> g_cache;

std::string cache_key(const qsim::OracleSpec& oracle, int t) {
  std::string key;
  key.reserve(oracle.domain_size() + 8);
  for (bool b : oracle.truth_table()) key.push_back(b ? '1' : '0');
  key += ':';
  key += std::to_string(t);
  return key;
}

}  // namespace

std::vector<double> counting_outcome_distribution(const qsim::OracleSpec& oracle, int t) {
  if (t < 1 || t > 20) throw ValidationError("estimation register width out of range");
  const std::string key = cache_key(oracle, t);
  {
    std::lock_guard<std::mutex> lock(g_cache_mutex);
    auto it = g_cache.find(key);
    if (it != g_cache.end()) return it->second;
  }
  std::vector<double> dist = build_distribution(oracle, t);
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  return g_cache.emplace(key, std::move(dist)).first->second;
}

CountEstimate decode_count_outcome(std::uint64_t outcome, int t, int n, int m, double epsilon) {
  const double items = static_cast<double>(std::uint64_t{1} << n);
  const double omega =
      static_cast<double>(outcome) / static_cast<double>(std::uint64_t{1} << t);

  CountEstimate est;
  est.outcome = outcome;
  est.t_register = t;
  est.precision_bits = m;
  est.confidence = 1.0 - epsilon;

  // The operator has eigenphase pairs (theta, 2 pi - theta); both decode to
  // the same count, so fold onto [0, pi].
  est.theta_hat = 2.0 * std::numbers::pi * std::min(omega, 1.0 - omega);

  // The estimation guarantee is on the phase fraction omega, radius 2^-m;
  // in radians that is 2 pi 2^-m. Propagate through the monotone
  // M(theta) = 2N sin^2(theta/2) by evaluating at the interval ends.
  est.theta_error = 2.0 * std::numbers::pi * std::pow(2.0, -m);
  const auto count_at = [items](double theta) {
    const double s = std::sin(theta / 2.0);
    return 2.0 * items * s * s;
  };
  est.m_hat_raw = count_at(est.theta_hat);
  const double lo = count_at(std::max(0.0, est.theta_hat - est.theta_error));
  const double hi = count_at(std::min(std::numbers::pi, est.theta_hat + est.theta_error));
  est.error_bound = std::max(hi - est.m_hat_raw, est.m_hat_raw - lo);

  est.clamped = est.m_hat_raw > items;
  est.m_hat = std::min(est.m_hat_raw, items);
  return est;
}

CountEstimate quantum_count(const qsim::OracleSpec& oracle, int m, double epsilon, Rng& rng) {
  const int t = phase_register_width(m, epsilon);
  const std::vector<double> dist = counting_outcome_distribution(oracle, t);

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
  return decode_count_outcome(outcome, t, oracle.arity(), m, epsilon);
}

}  // namespace qsp::qalg
