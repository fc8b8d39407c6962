#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qlab/modmath.hpp"
#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Keys, ciphertexts, serialization
// ---------------------------------------------------------------------------

/// Keys and ciphertexts are word vectors; each scheme documents its layout.
using Key = std::vector<uint64_t>;

struct Cipher {
  std::vector<uint64_t> words;
  bool operator==(const Cipher& other) const { return words == other.words; }
};

/// Length-prefixed little-endian byte layout: u32 word count, then each word
/// as 8 bytes LSB-first. Used by game transcripts.
std::vector<uint8_t> serialize_words(const std::vector<uint64_t>& words);
std::vector<uint64_t> deserialize_words(const std::vector<uint8_t>& bytes);
std::string to_hex(const std::vector<uint8_t>& bytes);

// ---------------------------------------------------------------------------
// Keyed deterministic function family
// ---------------------------------------------------------------------------

/// Fixed keyed mixing construction on 64-bit blocks (SplitMix64 finalizer,
/// two rounds, key and block index folded in), masked to out_bits. It is the
/// library's stand-in for an abstract keyed function family: deterministic,
/// length-exact, and documented — an instantiation contract, not a security
/// claim. in_bits and out_bits are limited to 64.
struct PrfFamily {
  uint32_t in_bits = 0;
  uint32_t out_bits = 0;

  PrfFamily(uint32_t in_bits_, uint32_t out_bits_);

  uint64_t in_mask() const;
  uint64_t out_mask() const;

  /// Deterministic evaluation f_k(x); x is masked to in_bits first.
  uint64_t eval(uint64_t key, uint64_t x) const;
};

// ---------------------------------------------------------------------------
// Symmetric-key encryption schemes
// ---------------------------------------------------------------------------

/// A symmetric-key encryption triple with declared spaces. Messages are
/// bit-packed uint64 values of `message_bits` (1 for the single-bit scheme);
/// bits are little-endian within the word.
struct Scheme {
  std::string name;
  std::string key_space, message_space, cipher_space;  // descriptors
  uint32_t message_bits = 1;
  bool lossy = false;  // set when correctness is not exact (see lwe_skes)

  std::function<Key(Rng&)> keygen;
  std::function<Cipher(const Key&, uint64_t, Rng&)> enc;
  std::function<uint64_t(const Key&, const Cipher&)> dec;
};

/// One-time-pad-through-f_k scheme over n-bit messages:
///   KeyGen: k uniform in {0,1}^n.
///   Enc_k(m): sample r uniform in {0,1}^n, output (r, f_k(r) XOR m).
///   Dec_k(r, c): c XOR f_k(r).
/// Cipher layout: words = {r, c}. Correctness is exact.
Scheme prf_scheme(uint32_t n);

/// Single-bit scheme over Z_q with inner-product masking:
///   KeyGen: k uniform in (Z_q)^n.
///   Enc_k(b): a uniform in (Z_q)^n, e ~ chi; c = <a,k> + b*floor(q/2) + e.
///   Dec_k(a, c): 0 iff the centered distance |c - <a,k>| <= floor(q/4).
/// Cipher layout: words = {a_0..a_{n-1}, c}. The scheme is flagged lossy iff
/// some |e| <= eta can misdecode either bit value (exact case analysis; for
/// q = 23, eta <= 5 decryption never fails).
Scheme lwe_skes(uint32_t n, int64_t q, const ErrorDistribution& chi);

/// Periodized variant over (2n+3)-bit messages:
///   KeyGen: k uniform in {0,1}^n and a prime p from [2^n/2, 2^n).
///   Enc/Dec as in prf_scheme but through f'_{k,p}(x) = f_k(x mod p), where
///   the (2n+3)-bit string x is read as an unsigned little-endian integer.
/// Key layout: {k, p}. Cipher layout: {r, c}. Requires n >= 2.
Scheme periodized_prf_scheme(uint32_t n);

/// The hidden-period map f'_{k,p} itself, for direct property checks.
uint64_t periodized_eval(uint32_t n, uint64_t key, uint64_t p, uint64_t x);

}  // namespace qlab
