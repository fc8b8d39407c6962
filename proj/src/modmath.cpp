#include "qlab/modmath.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qlab {

int64_t mod_pow(int64_t base, uint64_t exp, int64_t q) {
  int64_t result = 1 % q;
  int64_t b = mod_reduce(base, q);
  while (exp > 0) {
    if (exp & 1) result = mod_mul(result, b, q);
    b = mod_mul(b, b, q);
    exp >>= 1;
  }
  return result;
}

int64_t centered_rep(int64_t a, int64_t q) {
  int64_t r = mod_reduce(a, q);
  // Representative in (-q/2, q/2]; for even q the value q/2 maps to +q/2.
  return 2 * r > q ? r - q : r;
}

Egcd egcd(int64_t a, int64_t b) {
  if (b == 0) return {a, 1, 0};
  Egcd sub = egcd(b, a % b);
  return {sub.g, sub.y, sub.x - (a / b) * sub.y};
}

uint64_t gcd_u64(uint64_t a, uint64_t b) { return std::gcd(a, b); }

std::optional<int64_t> mod_inverse(int64_t a, int64_t q) {
  const int64_t ar = mod_reduce(a, q);
  Egcd e = egcd(ar, q);
  if (e.g != 1) return std::nullopt;
  return mod_reduce(e.x, q);
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

uint64_t powmod_u64(uint64_t base, uint64_t exp, uint64_t m) {
  uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                     23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  uint64_t d = n - 1;
  int r = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++r;
  }
  // This witness set decides primality exactly for every 64-bit integer.
  for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                     23ULL, 29ULL, 31ULL, 37ULL}) {
    uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
  std::vector<std::pair<uint64_t, int>> factors;
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p == 0) {
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      factors.emplace_back(p, e);
    }
  }
  if (n > 1) factors.emplace_back(n, 1);
  return factors;
}

uint64_t totient(uint64_t n) {
  if (n == 0) return 0;
  uint64_t result = n;
  for (auto [p, e] : factorize(n)) {
    (void)e;
    result -= result / p;
  }
  return result;
}

std::vector<uint32_t> totient_sieve(uint32_t limit) {
  std::vector<uint32_t> phi(static_cast<size_t>(limit) + 1);
  for (uint32_t i = 0; i <= limit; ++i) phi[i] = i;
  for (uint32_t p = 2; p <= limit; ++p) {
    if (phi[p] == p) {  // p is prime: no smaller prime has touched it
      for (uint32_t k = p; k <= limit; k += p) phi[k] -= phi[k] / p;
    }
  }
  return phi;
}

Rational euler_product(uint64_t q) {
  Rational r(1);
  for (auto [p, e] : factorize(q)) {
    (void)e;
    r *= Rational(static_cast<long long>(p) - 1, static_cast<long long>(p));
  }
  return r;
}

double totient_ratio_lower_bound(uint64_t q) {
  if (q <= 2) throw std::domain_error("bound requires q > 2");
  // e^gamma with gamma the Euler-Mascheroni constant; natural logs.
  constexpr double kExpGamma = 1.78107241799019798523;
  const double ll = std::log(std::log(static_cast<double>(q)));
  return 1.0 / (kExpGamma * ll + 3.0 / ll);
}

std::vector<uint64_t> primes_in_range(uint64_t lo, uint64_t hi) {
  std::vector<uint64_t> out;
  for (uint64_t v = lo; v < hi; ++v) {
    if (is_prime(v)) out.push_back(v);
  }
  return out;
}

uint64_t sample_prime(uint32_t n, Rng& rng) {
  if (n < 2 || n > 30) throw std::domain_error("sample_prime: n must be in [2, 30]");
  const uint64_t hi = 1ULL << n;
  const uint64_t lo = hi / 2;
  // Rejection sampling; the interval [2^(n-1), 2^n) always contains a prime.
  for (;;) {
    const uint64_t candidate = lo + rng.uniform_int(hi - lo);
    if (is_prime(candidate)) return candidate;
  }
}

int64_t sample_error(const ErrorDistribution& chi, Rng& rng) {
  if (chi.eta < 0) throw std::domain_error("error bound must be >= 0");
  if (chi.eta == 0) return 0;
  switch (chi.kind) {
    case ErrorDistribution::Kind::BoundedUniform:
      return static_cast<int64_t>(rng.uniform_int(2 * chi.eta + 1)) - chi.eta;
    case ErrorDistribution::Kind::RoundedGaussian: {
      const double sigma = chi.sigma > 0 ? chi.sigma : chi.eta / 2.0;
      for (;;) {
        const int64_t e = std::llround(rng.normal(0.0, sigma));
        if (e >= -chi.eta && e <= chi.eta) return e;
      }
    }
  }
  throw std::logic_error("unreachable");
}

std::variant<ZqVector, SolveFailure> gaussian_eliminate(const ZqMatrix& A,
                                                        const ZqVector& b) {
  const int64_t q = A.q;
  if (!is_prime(static_cast<uint64_t>(q))) return SolveFailure::NotPrime;
  if (b.entries.size() != A.rows || b.q != q)
    throw std::invalid_argument("dimension mismatch");

  const size_t rows = A.rows, cols = A.cols;
  // Augmented working copy [A | b], reduced mod q.
  std::vector<std::vector<int64_t>> w(rows, std::vector<int64_t>(cols + 1));
  for (size_t r = 0; r < rows; ++r) {
    for (size_t c = 0; c < cols; ++c) w[r][c] = mod_reduce(A.at(r, c), q);
    w[r][cols] = mod_reduce(b.entries[r], q);
  }

  size_t rank = 0;
  for (size_t col = 0; col < cols && rank < rows; ++col) {
    size_t pivot = rank;
    while (pivot < rows && w[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(w[rank], w[pivot]);
    const int64_t inv = *mod_inverse(w[rank][col], q);
    for (size_t c = col; c <= cols; ++c) w[rank][c] = mod_mul(w[rank][c], inv, q);
    for (size_t r = 0; r < rows; ++r) {
      if (r == rank || w[r][col] == 0) continue;
      const int64_t factor = w[r][col];
      for (size_t c = col; c <= cols; ++c)
        w[r][c] = mod_sub(w[r][c], mod_mul(factor, w[rank][c], q), q);
    }
    ++rank;
  }

  if (rank < cols) return SolveFailure::Underdetermined;
  for (size_t r = rank; r < rows; ++r) {
    if (w[r][cols] != 0) return SolveFailure::Inconsistent;
  }

  ZqVector s{q, std::vector<int64_t>(cols)};
  // After Gauss-Jordan the first `cols` rows are the identity (full rank).
  for (size_t r = 0; r < cols; ++r) s.entries[r] = w[r][cols];
  return s;
}

uint64_t hoeffding_budget(double delta, double c, double eps) {
  if (delta <= 0.0 || delta >= 1.0) throw std::domain_error("delta in (0,1)");
  if (eps <= 0.0 || c <= 0.0) throw std::domain_error("c, eps > 0");
  const double m = c * c * std::log(2.0 / delta) / (2.0 * eps * eps);
  return static_cast<uint64_t>(std::ceil(m - 1e-12));
}

}  // namespace qlab
