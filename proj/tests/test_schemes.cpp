#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>
#include <stdexcept>

#include "qlab/modmath.hpp"
#include "qlab/rng.hpp"
#include "qlab/schemes.hpp"

using namespace qlab;

TEST_CASE("word serialization round-trips and has a frozen byte layout") {
  const std::vector<uint64_t> words = {0x0102030405060708ull, 0, 0xffull};
  const std::vector<uint8_t> bytes = serialize_words(words);
  REQUIRE(bytes.size() == 4 + 8 * words.size());
  // u32 count little-endian, then LSB-first words.
  CHECK(bytes[0] == 3);
  CHECK(bytes[1] == 0);
  CHECK(bytes[4] == 0x08);
  CHECK(bytes[11] == 0x01);
  CHECK(deserialize_words(bytes) == words);
  CHECK(to_hex({0x00, 0xab, 0x0f}) == "00ab0f");

  CHECK(deserialize_words(serialize_words({})) == std::vector<uint64_t>{});
  std::vector<uint8_t> truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS(deserialize_words(truncated));
}

TEST_CASE("keyed function family is deterministic and length-exact") {
  const PrfFamily f(32, 16);
  CHECK(f.in_mask() == 0xffffffffull);
  CHECK(f.out_mask() == 0xffffull);
  const uint64_t y = f.eval(12345, 678);
  CHECK(f.eval(12345, 678) == y);
  CHECK((y & ~f.out_mask()) == 0);
  // Input masking: bits above in_bits are ignored.
  CHECK(f.eval(12345, 678 | (1ull << 40)) == y);
  // Key sensitivity and input sensitivity (overwhelmingly likely).
  CHECK(f.eval(12346, 678) != y);
  CHECK(f.eval(12345, 679) != y);

  const PrfFamily full(64, 64);
  CHECK(full.out_mask() == ~0ull);
  CHECK_THROWS(PrfFamily(0, 16));
  CHECK_THROWS(PrfFamily(16, 65));
}

TEST_CASE("masked one-time-pad scheme: exact correctness and fresh nonces") {
  Rng rng(21);
  const Scheme s = prf_scheme(32);
  CHECK(s.message_bits == 32);
  CHECK_FALSE(s.lossy);
  const Key k = s.keygen(rng);

  std::set<uint64_t> nonces;
  for (int i = 0; i < 1000; ++i) {
    const uint64_t m = rng.uniform_int(1ull << 32);
    const Cipher c = s.enc(k, m, rng);
    REQUIRE(c.words.size() == 2);
    CHECK(s.dec(k, c) == m);
    nonces.insert(c.words[0]);
  }
  // 1000 draws from 2^32: collisions are a ~1e-4 event; demand all-distinct.
  CHECK(nonces.size() == 1000);

  CHECK_THROWS(s.enc(k, 1ull << 32, rng));  // message out of range
}

TEST_CASE("inner-product masking scheme: round-trips and loss flags") {
  Rng rng(22);
  const ErrorDistribution chi = ErrorDistribution::bounded_uniform(1, 23);
  const Scheme s = lwe_skes(8, 23, chi);
  CHECK(s.message_bits == 1);
  CHECK_FALSE(s.lossy);  // eta = 1 <= 5 never misdecodes at q = 23
  const Key k = s.keygen(rng);
  REQUIRE(k.size() == 8);
  for (uint64_t w : k) CHECK(w < 23);

  for (int i = 0; i < 1000; ++i) {
    const uint64_t b = rng.uniform_int(2);
    const Cipher c = s.enc(k, b, rng);
    REQUIRE(c.words.size() == 9);
    CHECK(s.dec(k, c) == b);
  }
  CHECK_THROWS(s.enc(k, 2, rng));

  // Loss threshold at q = 23: any eta <= 5 is exact, eta = 6 can misdecode.
  for (int64_t eta = 0; eta <= 5; ++eta)
    CHECK_FALSE(
        lwe_skes(4, 23, ErrorDistribution::bounded_uniform(eta, 23)).lossy);
  CHECK(lwe_skes(4, 23, ErrorDistribution::bounded_uniform(6, 23)).lossy);
  // q = 5: floor(q/4) = 1 and floor(q/2) = 2, so even eta = 1 is lossy.
  CHECK(lwe_skes(4, 5, ErrorDistribution::bounded_uniform(1, 5)).lossy);
}

TEST_CASE("inner-product masking scheme: rounded-gaussian noise variant") {
  Rng rng(23);
  const ErrorDistribution chi = ErrorDistribution::rounded_gaussian(1, 23);
  const Scheme s = lwe_skes(6, 23, chi);
  CHECK_FALSE(s.lossy);
  const Key k = s.keygen(rng);
  for (int i = 0; i < 500; ++i) {
    const uint64_t b = rng.uniform_int(2);
    CHECK(s.dec(k, s.enc(k, b, rng)) == b);
  }
}

TEST_CASE("hidden-period map repeats with period p and nothing shorter") {
  const uint32_t n = 6;
  const uint64_t key = 0x2d;
  const uint64_t p = 47;  // prime in [2^6/2, 2^6) = [32, 64)
  const uint64_t domain = 1ull << (2 * n + 3);
  for (uint64_t x = 0; x + p < domain; x += 997)
    CHECK(periodized_eval(n, key, p, x) == periodized_eval(n, key, p, x + p));
  // Distinct residues give distinct values somewhere below p.
  bool varies = false;
  for (uint64_t x = 1; x < p; ++x)
    varies = varies ||
             periodized_eval(n, key, p, x) != periodized_eval(n, key, p, 0);
  CHECK(varies);
}

TEST_CASE("hidden-period scheme: key shape, round-trips, prime period") {
  Rng rng(24);
  const uint32_t n = 8;
  const Scheme s = periodized_prf_scheme(n);
  CHECK(s.message_bits == 2 * n + 3);
  const Key k = s.keygen(rng);
  REQUIRE(k.size() == 2);
  CHECK(k[0] < (1ull << n));
  CHECK(is_prime(static_cast<int64_t>(k[1])));
  CHECK(k[1] >= (1ull << n) / 2);
  CHECK(k[1] < (1ull << n));

  for (int i = 0; i < 1000; ++i) {
    const uint64_t m = rng.uniform_int(1ull << (2 * n + 3));
    const Cipher c = s.enc(k, m, rng);
    CHECK(s.dec(k, c) == m);
  }
  CHECK_THROWS(periodized_prf_scheme(1));  // needs n >= 2
}

TEST_CASE("distinct keys decrypt to garbage, not silently to the message") {
  Rng rng(25);
  const Scheme s = prf_scheme(32);
  const Key k1 = s.keygen(rng), k2 = s.keygen(rng);
  REQUIRE(k1 != k2);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const uint64_t m = rng.uniform_int(1ull << 32);
    if (s.dec(k2, s.enc(k1, m, rng)) != m) ++mismatches;
  }
  CHECK(mismatches > 190);  // wrong key looks like a fresh pad
}
