#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qsp {

using Complex = std::complex<double>;

// Thrown on bad arguments or contract violations detectable up front.
// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Thrown when a request exceeds a configured resource cap (register width,
// enumeration size, interpreter budget). The CLI maps this to exit code 2.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Seedable random source. One instance per top-level run; repeated-trial
// loops derive per-trial streams with derive(i) so that trial i is
// reproducible regardless of how many draws earlier trials consumed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix(seed)) {}

  std::uint64_t seed() const { return seed_; }

  // Independent stream for (seed, stream). Deterministic.
  Rng derive(std::uint64_t stream) const {
    return Rng(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
  }

  // First uniform draw of the derived stream, without paying for engine
  // construction. For hot trial loops that consume one draw per stream.
  double stream_uniform(std::uint64_t stream) const {
    const std::uint64_t z = mix(mix(seed_ ^ (0x9e3779b97f4a7c15ULL * (stream + 1))));
    return static_cast<double>(z >> 11) * 0x1.0p-53;
  }

  std::uint64_t next() { return engine_(); }

  // Uniform double in [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// --- bit-string helpers -----------------------------------------------------
// Bit strings are std::string over {'0','1'}; index 0 is the leftmost
// (most significant) position throughout.

inline bool is_bits(std::string_view s) {
  for (char c : s) {
    if (c != '0' && c != '1') return false;
  }
  return true;
}

inline void require_bits(std::string_view s, const char* what) {
  if (!is_bits(s)) {
    throw ValidationError(std::string(what) + ": expected a string over {0,1}, got \"" +
                          std::string(s) + "\"");
  }
}

inline std::uint64_t bits_to_index(std::string_view bits) {
  if (bits.size() > 63) throw ValidationError("bit string too long for a 64-bit index");
  std::uint64_t v = 0;
  for (char c : bits) v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  return v;
}

inline std::string index_to_bits(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1ULL) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace qsp
