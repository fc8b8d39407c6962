#pragma once

#include <boost/rational.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab {

using Rational = boost::rational<long long>;

// ---------------------------------------------------------------------------
// Modular arithmetic (q fits in a machine word; intermediate products widened)
// ---------------------------------------------------------------------------

/// Reduce a (possibly negative) value into [0, q).
inline int64_t mod_reduce(int64_t a, int64_t q) {
  int64_t r = a % q;
  return r < 0 ? r + q : r;
}

inline int64_t mod_add(int64_t a, int64_t b, int64_t q) {
  return mod_reduce(mod_reduce(a, q) + mod_reduce(b, q), q);
}

inline int64_t mod_sub(int64_t a, int64_t b, int64_t q) {
  return mod_reduce(mod_reduce(a, q) - mod_reduce(b, q), q);
}

inline int64_t mod_mul(int64_t a, int64_t b, int64_t q) {
  return static_cast<int64_t>(
      static_cast<__int128>(mod_reduce(a, q)) * mod_reduce(b, q) % q);
}

int64_t mod_pow(int64_t base, uint64_t exp, int64_t q);

/// Centered representative of a mod q: the value in (-q/2, q/2].
int64_t centered_rep(int64_t a, int64_t q);

/// Distance to 0 on the mod-q circle: min(a mod q, q - a mod q).
inline int64_t centered_abs(int64_t a, int64_t q) {
  const int64_t r = mod_reduce(a, q);
  return r <= q - r ? r : q - r;
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b).
struct Egcd {
  int64_t g, x, y;
};
Egcd egcd(int64_t a, int64_t b);

uint64_t gcd_u64(uint64_t a, uint64_t b);

/// Multiplicative inverse of a mod q, or nullopt when gcd(a, q) != 1.
std::optional<int64_t> mod_inverse(int64_t a, int64_t q);

// ---------------------------------------------------------------------------
// Number theory
// ---------------------------------------------------------------------------

/// Deterministic Miller-Rabin (witness set exact for all 64-bit inputs).
bool is_prime(uint64_t n);

/// Prime factorization by trial division; pairs (prime, exponent), ascending.
std::vector<std::pair<uint64_t, int>> factorize(uint64_t n);

/// Euler totient via factorization.
uint64_t totient(uint64_t n);

/// Totients of every integer in [0, limit] by sieve (for bulk sweeps).
std::vector<uint32_t> totient_sieve(uint32_t limit);

/// Exact rational product over distinct prime divisors: prod (1 - 1/p).
/// Equals totient(q)/q as an exact rational.
Rational euler_product(uint64_t q);

/// Lower bound on totient(q)/q for q > 2:
///   1 / (e^gamma * ln ln q + 3 / ln ln q),  natural logarithms.
double totient_ratio_lower_bound(uint64_t q);

/// All primes in [lo, hi), by deterministic primality test.
std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi);

/// Uniform prime from [2^n / 2, 2^n) by rejection sampling. n in [2, 30].
uint64_t sample_prime(uint32_t n, Rng& rng);

// ---------------------------------------------------------------------------
// Bounded symmetric error distributions on Z_q
// ---------------------------------------------------------------------------

/// Symmetric error distribution centered at 0 with magnitude bound |e| <= eta.
///  - BoundedUniform: uniform over the 2*eta + 1 values {-eta, ..., +eta}.
///  - RoundedGaussian: continuous N(0, sigma) rounded to the nearest integer,
///    rejection-sampled to |e| <= eta; sigma defaults to eta / 2.
struct ErrorDistribution {
  enum class Kind { BoundedUniform, RoundedGaussian };
  Kind kind = Kind::BoundedUniform;
  int64_t eta = 0;     // magnitude bound, >= 0
  int64_t q = 2;       // ambient modulus (errors are added mod q)
  double sigma = 0.0;  // RoundedGaussian width; 0 means "use eta / 2"

  static ErrorDistribution bounded_uniform(int64_t eta, int64_t q) {
    return ErrorDistribution{Kind::BoundedUniform, eta, q, 0.0};
  }
  static ErrorDistribution rounded_gaussian(int64_t eta, int64_t q,
                                            double sigma = 0.0) {
    return ErrorDistribution{Kind::RoundedGaussian, eta, q, sigma};
  }
};

/// One centered draw e with |e| <= eta (reduce mod q at the point of use).
int64_t sample_error(const ErrorDistribution& chi, Rng& rng);

// ---------------------------------------------------------------------------
// Linear algebra over Z_q (q prime)
// ---------------------------------------------------------------------------

struct ZqVector {
  int64_t q = 2;
  std::vector<int64_t> entries;  // each reduced into [0, q)
};

struct ZqMatrix {
  int64_t q = 2;
  size_t rows = 0, cols = 0;
  std::vector<int64_t> data;  // row-major, reduced into [0, q)

  int64_t& at(size_t r, size_t c) { return data[r * cols + c]; }
  int64_t at(size_t r, size_t c) const { return data[r * cols + c]; }
};

enum class SolveFailure { Underdetermined, Inconsistent, NotPrime };

/// Solve A s = b over the field Z_q (q prime) by Gauss-Jordan elimination.
/// Accepts rows >= cols; overdetermined consistent systems are fine.
std::variant<ZqVector, SolveFailure> gaussian_eliminate(const ZqMatrix& A,
                                                        const ZqVector& b);

// ---------------------------------------------------------------------------
// Concentration budget
// ---------------------------------------------------------------------------

/// Sample count M = ceil(c^2 * ln(2/delta) / (2 * eps^2)) such that an
/// empirical mean of M i.i.d. range-c samples deviates from its expectation
/// by >= eps with probability at most delta (two-sided exponential bound).
uint64_t hoeffding_budget(double delta, double c, double eps);

}  // namespace qlab
