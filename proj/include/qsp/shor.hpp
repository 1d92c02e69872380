#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsp/common.hpp"

namespace qsp::qalg {

// (b^e) mod m without overflow for m < 2^32.
std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exponent, std::uint64_t modulus);

struct Fraction {
  std::uint64_t numerator;
  std::uint64_t denominator;
};

// Best convergent of the continued-fraction expansion of
// numerator/denominator whose denominator stays within the limit.
// Always in lowest terms; 0 maps to 0/1.
Fraction continued_fraction(std::uint64_t numerator, std::uint64_t denominator,
                            std::uint64_t denominator_limit);

struct OrderFindOptions {
  double epsilon = 0.1;    // per-sample phase-estimation failure budget
  int max_samples = 20;
  int max_total_qubits = 18;  // shrink the top register to stay under this
};

struct OrderResult {
  std::uint64_t order = 0;   // r with x^r = 1 (mod n), verified classically
  bool found = false;
  int samples = 0;           // quantum samples consumed
  int top_register = 0;      // estimation register width actually used
  bool reduced_register = false;  // width was cut below the textbook formula
};

// Multiplicative order of x modulo n via phase estimation of |b> -> |x b mod n>
// over the uniform exponent register, decoding measurements with continued
// fractions until a candidate verifies. Requires gcd(x, n) = 1.
OrderResult order_find(std::uint64_t x, std::uint64_t n_mod, Rng& rng,
                       const OrderFindOptions& options = {});

struct ShorOptions {
  int max_restarts = 10;
  OrderFindOptions order;
};

struct ShorResult {
  std::uint64_t factor = 0;
  bool found = false;
  // Which branch produced the factor: "even", "perfect-power", "gcd",
  // "order"; empty when the restart cap ran out.
  std::string route;
  int restarts = 0;
  std::vector<std::uint64_t> tried_bases;
  bool reduced_register = false;
};

// Returns a nontrivial factor of a composite n >= 4, following the
// even / perfect power / lucky gcd / order-finding case tree and restarting
// on failure branches. Prime or too-small input is rejected up front.
ShorResult shor_factor(std::uint64_t n_mod, Rng& rng, const ShorOptions& options = {});

bool is_prime(std::uint64_t n);
// base a >= 2 with a^b == n, if one exists.
std::optional<std::uint64_t> perfect_power_base(std::uint64_t n);

}  // namespace qsp::qalg
