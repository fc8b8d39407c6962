#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "qlab/modmath.hpp"
#include "qlab/rng.hpp"

using namespace qlab;

TEST_CASE("modular reduction and centered representatives") {
  CHECK(mod_reduce(-3, 23) == 20);
  CHECK(mod_reduce(23, 23) == 0);
  CHECK(mod_reduce(-23, 23) == 0);
  CHECK(mod_add(20, 5, 23) == 2);
  CHECK(mod_sub(3, 7, 23) == 19);
  CHECK(mod_mul(12, 12, 23) == 6);  // 144 = 6*23 + 6
  CHECK(mod_pow(2, 11, 23) == 1);   // ord(2) | 11 in Z_23^*
  CHECK(mod_pow(5, 0, 23) == 1);

  // centered_rep lands in (-q/2, q/2].
  CHECK(centered_rep(12, 23) == -11);
  CHECK(centered_rep(11, 23) == 11);
  CHECK(centered_rep(0, 23) == 0);
  CHECK(centered_rep(3, 4) == -1);
  CHECK(centered_rep(2, 4) == 2);

  CHECK(centered_abs(12, 23) == 11);
  CHECK(centered_abs(20, 23) == 3);
  CHECK(centered_abs(0, 23) == 0);
  for (int64_t a = -50; a <= 50; ++a)
    CHECK(centered_abs(a, 23) == std::abs(centered_rep(a, 23)));
}

TEST_CASE("extended euclid and inverses") {
  const Egcd e = egcd(240, 46);
  CHECK(e.g == 2);
  CHECK(240 * e.x + 46 * e.y == 2);

  CHECK(mod_inverse(5, 23).value() == 14);  // 5*14 = 70 = 3*23 + 1
  CHECK(mod_inverse(1, 2).value() == 1);
  CHECK_FALSE(mod_inverse(6, 9).has_value());
  CHECK_FALSE(mod_inverse(0, 7).has_value());
  for (int64_t q : {2, 3, 5, 7, 23, 97}) {
    for (int64_t a = 1; a < q; ++a) {
      const auto inv = mod_inverse(a, q);
      REQUIRE(inv.has_value());
      CHECK(mod_mul(a, *inv, q) == 1);
    }
  }
  CHECK(gcd_u64(12, 18) == 6);
  CHECK(gcd_u64(0, 5) == 5);
}

TEST_CASE("deterministic primality") {
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(1));
  CHECK(is_prime(2));
  CHECK(is_prime(3));
  CHECK_FALSE(is_prime(4));
  CHECK(is_prime(7919));
  CHECK_FALSE(is_prime(561));    // Carmichael
  CHECK_FALSE(is_prime(41041));  // Carmichael
  CHECK(is_prime(2147483647));   // 2^31 - 1
  CHECK(is_prime((1ull << 61) - 1));
  CHECK_FALSE(is_prime(1000003ull * 1000003ull));
}

TEST_CASE("factorization and totients") {
  using F = std::vector<std::pair<uint64_t, int>>;
  CHECK(factorize(360) == F{{2, 3}, {3, 2}, {5, 1}});
  CHECK(factorize(1) == F{});
  CHECK(factorize(97) == F{{97, 1}});

  CHECK(totient(1) == 1);
  CHECK(totient(12) == 4);
  CHECK(totient(16) == 8);
  CHECK(totient(23) == 22);
  CHECK(totient(1000000) == 400000);

  const auto sieve = totient_sieve(2000);
  REQUIRE(sieve.size() == 2001);
  for (uint64_t q = 1; q <= 2000; ++q) CHECK(sieve[q] == totient(q));
}

TEST_CASE("exact coprimality ratio as a product over prime divisors") {
  CHECK(euler_product(12) == Rational(1, 3));
  CHECK(euler_product(23) == Rational(22, 23));
  CHECK(euler_product(16) == Rational(1, 2));
  CHECK(euler_product(1) == Rational(1));
  for (uint64_t q = 2; q <= 500; ++q) {
    CHECK(euler_product(q) == Rational(static_cast<long long>(totient(q)),
                                       static_cast<long long>(q)));
  }
}

TEST_CASE("totient ratio lower bound") {
  CHECK_THROWS(totient_ratio_lower_bound(2));
  for (uint64_t q = 3; q <= 20000; ++q) {
    const double ratio =
        static_cast<double>(totient(q)) / static_cast<double>(q);
    CHECK(ratio > totient_ratio_lower_bound(q));
  }
  // The bound is strongest at primorials; 2*3*5*7*11*13 = 30030.
  const double ratio30030 = static_cast<double>(totient(30030)) / 30030.0;
  CHECK(ratio30030 > totient_ratio_lower_bound(30030));
}

TEST_CASE("prime enumeration and sampling") {
  CHECK(primes_in_range(10, 30) ==
        std::vector<uint64_t>{11, 13, 17, 19, 23, 29});
  CHECK(primes_in_range(24, 28).empty());

  Rng rng(17);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t p = sample_prime(8, rng);
    CHECK(is_prime(p));
    CHECK(p >= 128);
    CHECK(p < 256);
    seen.insert(p);
  }
  // All primes in [128, 256) should appear across 1000 draws.
  CHECK(seen.size() == primes_in_range(128, 256).size());
  CHECK_THROWS(sample_prime(1, rng));
}

TEST_CASE("bounded error distributions stay within their magnitude bound") {
  Rng rng(3);
  const auto uni = ErrorDistribution::bounded_uniform(2, 23);
  std::set<int64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const int64_t e = sample_error(uni, rng);
    CHECK(e >= -2);
    CHECK(e <= 2);
    seen.insert(e);
  }
  CHECK(seen.size() == 5);  // all of {-2..2} show up

  const auto gauss = ErrorDistribution::rounded_gaussian(3, 23);
  for (int i = 0; i < 2000; ++i) {
    const int64_t e = sample_error(gauss, rng);
    CHECK(e >= -3);
    CHECK(e <= 3);
  }
  const auto zero = ErrorDistribution::bounded_uniform(0, 23);
  for (int i = 0; i < 10; ++i) CHECK(sample_error(zero, rng) == 0);
}

TEST_CASE("linear solving over a prime modulus") {
  // 7 noise-free inner-product rows pin down s = (12, 0, 7, 2) mod 23.
  ZqMatrix A;
  A.q = 23;
  A.rows = 7;
  A.cols = 4;
  A.data = {11, 2,  13, 19, 14, 6,  19, 1,  3, 15, 4, 2,  4, 6,
            20, 15, 7,  18, 8,  9,  8,  5,  17, 12, 16, 1, 11, 22};
  ZqVector b{23, {8, 4, 22, 11, 20, 9, 14}};

  const auto solved = gaussian_eliminate(A, b);
  REQUIRE(std::holds_alternative<ZqVector>(solved));
  CHECK(std::get<ZqVector>(solved).entries ==
        std::vector<int64_t>{12, 0, 7, 2});

  // Tampering with one right-hand side makes the overdetermined system
  // inconsistent.
  ZqVector bad = b;
  bad.entries[0] = 9;
  const auto broken = gaussian_eliminate(A, bad);
  REQUIRE(std::holds_alternative<SolveFailure>(broken));
  CHECK(std::get<SolveFailure>(broken) == SolveFailure::Inconsistent);

  // Two copies of one row cannot determine two unknowns.
  ZqMatrix dup{23, 2, 2, {1, 2, 2, 4}};
  ZqVector rhs{23, {3, 6}};
  const auto under = gaussian_eliminate(dup, rhs);
  REQUIRE(std::holds_alternative<SolveFailure>(under));
  CHECK(std::get<SolveFailure>(under) == SolveFailure::Underdetermined);

  ZqMatrix comp{4, 1, 1, {1}};
  ZqVector crhs{4, {3}};
  const auto notprime = gaussian_eliminate(comp, crhs);
  REQUIRE(std::holds_alternative<SolveFailure>(notprime));
  CHECK(std::get<SolveFailure>(notprime) == SolveFailure::NotPrime);
}

TEST_CASE("random inner-product rows round-trip through the solver") {
  Rng rng(99);
  const int64_t q = 23;
  const size_t n = 4;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<int64_t> s(n);
    for (auto& v : s) v = static_cast<int64_t>(rng.uniform_int(q));
    ZqMatrix A{q, n + 3, n, {}};
    A.data.resize(A.rows * A.cols);
    ZqVector b{q, std::vector<int64_t>(A.rows)};
    for (size_t r = 0; r < A.rows; ++r) {
      int64_t dot = 0;
      for (size_t c = 0; c < n; ++c) {
        A.at(r, c) = static_cast<int64_t>(rng.uniform_int(q));
        dot = mod_add(dot, mod_mul(A.at(r, c), s[c], q), q);
      }
      b.entries[r] = dot;
    }
    const auto solved = gaussian_eliminate(A, b);
    if (std::holds_alternative<ZqVector>(solved))
      CHECK(std::get<ZqVector>(solved).entries == s);
  }
}

TEST_CASE("sample budget from the two-sided tail bound") {
  // delta = 2/e^2 makes ln(2/delta) = 2 exactly: one sample suffices at
  // eps = 1.
  CHECK(hoeffding_budget(2.0 * std::exp(-2.0), 1.0, 1.0) == 1);
  CHECK(hoeffding_budget(0.01, 1.0, 0.1) == 265);
  CHECK(hoeffding_budget(0.01, 2.0, 0.1) == 4 * 265);
  CHECK(hoeffding_budget(0.05, 1.0, 0.05) ==
        static_cast<uint64_t>(
            std::ceil(std::log(2.0 / 0.05) / (2.0 * 0.05 * 0.05))));
}
