#include "qsp/shor.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>

#include "qsp/gates.hpp"
#include "qsp/phase_estimation.hpp"
#include "qsp/statevector.hpp"

namespace qsp::qalg {

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus) {
  if (modulus == 0) throw ValidationError("modulus must be positive");
  if (modulus >= (std::uint64_t{1} << 32)) throw ValidationError("modulus too large");
  std::uint64_t result = 1 % modulus;
  base %= modulus;
  while (exponent > 0) {
    if (exponent & 1ULL) result = result * base % modulus;
    base = base * base % modulus;
    exponent >>= 1;
  }
  return result;
}

Fraction continued_fraction(std::uint64_t numerator, std::uint64_t denominator,
                            std::uint64_t denominator_limit) {
  if (denominator == 0) throw ValidationError("denominator must be positive");
  if (denominator_limit < 1) throw ValidationError("denominator limit must be >= 1");

  // Walk the convergents h_k / k_k; the last one within the limit is the
  // best convergent approximation with a denominator that small.
  std::uint64_t h_prev = 1, h_prev2 = 0;
  std::uint64_t k_prev = 0, k_prev2 = 1;
  std::uint64_t num = numerator, den = denominator;
  Fraction best{0, 1};
  bool have_any = false;

  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t rem = num % den;
    const std::uint64_t h = a * h_prev + h_prev2;
    const std::uint64_t k = a * k_prev + k_prev2;
    if (k > denominator_limit) break;
    best = Fraction{h, k};
    have_any = true;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    num = den;
    den = rem;
  }
  if (!have_any) return Fraction{0, 1};
  const std::uint64_t g = std::gcd(best.numerator, best.denominator);
  return Fraction{best.numerator / g, best.denominator / g};
}

namespace {

int bits_needed(std::uint64_t n) {
  int bits = 0;
  while ((std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

// Cached top-register outcome distribution for order finding; the circuit is
// fixed by (x, n, widths), only the measurement varies with the seed.
std::mutex g_order_cache_mutex;
std::unordered_map<std::string, std::vector<double>> g_order_cache;

std::vector<double> order_outcome_distribution(std::uint64_t x, std::uint64_t n_mod,
                                               int work_qubits, int t) {
  const std::string key = std::to_string(x) + "," + std::to_string(n_mod) + "," +
                          std::to_string(work_qubits) + "," + std::to_string(t);
  {
    std::lock_guard<std::mutex> lock(g_order_cache_mutex);
    auto it = g_order_cache.find(key);
    if (it != g_order_cache.end()) return it->second;
  }

  // U^(2^j) |b> = |x^(2^j) b mod n>: exact permutations, no matrix powers.
  const std::size_t dim = std::size_t{1} << work_qubits;
  std::vector<qsim::CMatrix> powers;
  powers.reserve(static_cast<std::size_t>(t));
  for (int j = 0; j < t; ++j) {
    const std::uint64_t multiplier = mod_pow(x, std::uint64_t{1} << j, n_mod);
    qsim::CMatrix u(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
      const std::uint64_t image = (b < n_mod) ? multiplier * b % n_mod : b;
      u.at(image, b) = Complex(1.0);
    }
    powers.push_back(std::move(u));
  }

  const qsim::StateVector work = qsim::StateVector::basis(work_qubits, 1);
  std::vector<double> dist = phase_outcome_distribution(powers, work, t);

  std::lock_guard<std::mutex> lock(g_order_cache_mutex);
  return g_order_cache.emplace(key, std::move(dist)).first->second;
}

}  // namespace

OrderResult order_find(std::uint64_t x, std::uint64_t n_mod, Rng& rng,
                       const OrderFindOptions& options) {
  if (n_mod < 2) throw ValidationError("modulus must be >= 2");
  if (x < 1 || x >= n_mod) throw ValidationError("base must lie in [1, n)");
  if (std::gcd(x, n_mod) != 1) throw ValidationError("base must be coprime to the modulus");

  OrderResult result;
  if (x == 1) {
    result.order = 1;
    result.found = true;
    result.top_register = 0;
    return result;
  }

  const int work_qubits = bits_needed(n_mod);
  const int log_n = work_qubits;
  const int extra =
      static_cast<int>(std::ceil(std::log2(2.0 + 1.0 / (2.0 * options.epsilon))));
  const int t_formula = 2 * log_n + 1 + extra;
  const int t_cap = options.max_total_qubits - work_qubits;
  if (t_cap < 4) throw ResourceError("modulus too large for the qubit budget");
  result.top_register = std::min(t_formula, t_cap);
  result.reduced_register = result.top_register < t_formula;

  const std::vector<double> dist =
      order_outcome_distribution(x, n_mod, work_qubits, result.top_register);
  const std::uint64_t scale = std::uint64_t{1} << result.top_register;

  for (int sample = 1; sample <= options.max_samples; ++sample) {
    result.samples = sample;
    Rng sample_rng = rng.derive(static_cast<std::uint64_t>(sample));
    const double roll = sample_rng.uniform();
    double acc = 0.0;
    std::uint64_t j = dist.size() - 1;
    for (std::uint64_t v = 0; v < dist.size(); ++v) {
      acc += dist[v];
      if (roll < acc) {
        j = v;
        break;
      }
    }

    if (j == 0) continue;  // phase 0/r carries no information; resample

    // j / 2^t approximates s / r. The convergent denominator is r / gcd(s, r),
    // so besides the denominator itself check a few small multiples.
    const Fraction approx = continued_fraction(j, scale, n_mod - 1);
    if (approx.denominator < 1) continue;
    for (std::uint64_t multiple = 1; multiple <= 8; ++multiple) {
      const std::uint64_t r = multiple * approx.denominator;
      if (r >= n_mod) break;
      if (mod_pow(x, r, n_mod) == 1) {
        result.order = r;
        result.found = true;
        return result;
      }
    }
  }
  return result;  // sample cap exhausted
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::optional<std::uint64_t> perfect_power_base(std::uint64_t n) {
  if (n < 4) return std::nullopt;
  for (int b = 2; (std::uint64_t{1} << b) <= n; ++b) {
    const double root = std::pow(static_cast<double>(n), 1.0 / b);
    for (std::uint64_t a = static_cast<std::uint64_t>(std::floor(root)) - 1;
         a <= static_cast<std::uint64_t>(std::ceil(root)) + 1; ++a) {
      if (a < 2) continue;
      std::uint64_t p = 1;
      bool overflow = false;
      for (int i = 0; i < b; ++i) {
        if (p > n / a) {
          overflow = true;
          break;
        }
        p *= a;
      }
      if (!overflow && p == n) return a;
    }
  }
  return std::nullopt;
}

ShorResult shor_factor(std::uint64_t n_mod, Rng& rng, const ShorOptions& options) {
  if (n_mod < 4) throw ValidationError("need a composite modulus >= 4");
  if (is_prime(n_mod)) throw ValidationError("modulus is prime");

  ShorResult result;
  if (n_mod % 2 == 0) {
    result.factor = 2;
    result.found = true;
    result.route = "even";
    return result;
  }
  if (const auto base = perfect_power_base(n_mod)) {
    result.factor = *base;
    result.found = true;
    result.route = "perfect-power";
    return result;
  }

  for (int restart = 0; restart < options.max_restarts; ++restart) {
    result.restarts = restart;
    Rng round_rng = rng.derive(static_cast<std::uint64_t>(restart));
    const std::uint64_t x = 1 + round_rng.below(n_mod - 1);  // uniform in [1, n-1]
    result.tried_bases.push_back(x);

    const std::uint64_t g = std::gcd(x, n_mod);
    if (g > 1) {
      result.factor = g;
      result.found = true;
      result.route = "gcd";
      return result;
    }

    OrderResult order = order_find(x, n_mod, round_rng, options.order);
    result.reduced_register = result.reduced_register || order.reduced_register;
    if (!order.found) continue;
    const std::uint64_t r = order.order;

    // Proceed only when r is even and x^(r/2) is not -1 mod n; otherwise
    // this base cannot split n and we restart.
    if (r % 2 != 0) continue;
    const std::uint64_t half = mod_pow(x, r / 2, n_mod);
    if (half == n_mod - 1) continue;

    for (const std::uint64_t candidate :
         {std::gcd(half + 1, n_mod), std::gcd(half + n_mod - 1, n_mod)}) {
      if (candidate > 1 && candidate < n_mod) {
        result.factor = candidate;
        result.found = true;
        result.route = "order";
        return result;
      }
    }
  }
  result.restarts = options.max_restarts;
  return result;  // restart cap exhausted
}

}  // namespace qsp::qalg
