#pragma once
// Truncation parameters shared by every module: the prime p, the Frobenius
// power q = p^s, the working precision N (in powers of p), the exponent
// window, the divided-power order cap, the level m and the RNG seed.
//
// All values are immutable after construction; every algebraic object keeps
// the slice of these parameters it needs, so values can be shared freely
// between threads.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace padicalc {

struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& w) : std::runtime_error(w) {}
};
struct OverflowError : std::runtime_error {
  explicit OverflowError(const std::string& w) : std::runtime_error(w) {}
};
struct NonUnitError : std::runtime_error {
  explicit NonUnitError(const std::string& w) : std::runtime_error(w) {}
};
struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& w) : std::runtime_error(w) {}
};

inline bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline int64_t ipow(int64_t b, int e) {
  int64_t r = 1;
  while (e-- > 0) r *= b;
  return r;
}

struct TruncationParams {
  int32_t p = 3;        // prime
  int32_t s = 1;        // Frobenius power, q = p^s
  int32_t N = 12;       // working precision, powers of p
  int32_t guard = 6;    // extra internal precision, powers of p
  int32_t degLo = -8;   // inclusive exponent window, per variable
  int32_t degHi = 30;
  int32_t K = 9;        // divided-power order cap, per variable
  int32_t m = 0;        // level
  uint64_t seed = 1;    // randomness seed for property suites

  void validate() const {
    if (!is_prime(p)) throw DomainError("p must be prime");
    if (s < 1) throw DomainError("s must be >= 1");
    if (N < 1) throw DomainError("N must be >= 1");
    if (!(degLo <= 0 && 0 <= degHi)) throw DomainError("window must contain 0");
    if (K < 0) throw DomainError("order cap must be >= 0");
    if (m < 0) throw DomainError("level must be >= 0");
  }

  int64_t q() const { return ipow(p, s); }
  // internal pi-adic working precision; identities are asserted mod p^N,
  // i.e. mod pi^{N(p-1)}, and computed with `guard` extra p-powers.
  int32_t piPrec() const { return (N + guard) * (p - 1); }
  int32_t piPrecN() const { return N * (p - 1); }
};

// Deterministic RNG used by all property suites.
class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  int64_t uniform(int64_t lo, int64_t hi) {  // inclusive
    return std::uniform_int_distribution<int64_t>(lo, hi)(eng_);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace padicalc
