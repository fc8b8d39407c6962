#include "qlab/schemes.hpp"

#include <stdexcept>

namespace qlab {

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

std::vector<uint8_t> serialize_words(const std::vector<uint64_t>& words) {
  std::vector<uint8_t> bytes;
  bytes.reserve(4 + 8 * words.size());
  const uint32_t count = static_cast<uint32_t>(words.size());
  for (int b = 0; b < 4; ++b) bytes.push_back((count >> (8 * b)) & 0xff);
  for (uint64_t w : words) {
    for (int b = 0; b < 8; ++b) bytes.push_back((w >> (8 * b)) & 0xff);
  }
  return bytes;
}

std::vector<uint64_t> deserialize_words(const std::vector<uint8_t>& bytes) {
  if (bytes.size() < 4) throw std::invalid_argument("truncated word buffer");
  uint32_t count = 0;
  for (int b = 0; b < 4; ++b) count |= static_cast<uint32_t>(bytes[b]) << (8 * b);
  if (bytes.size() != 4 + 8ULL * count)
    throw std::invalid_argument("word buffer length mismatch");
  std::vector<uint64_t> words(count, 0);
  for (uint32_t w = 0; w < count; ++w) {
    for (int b = 0; b < 8; ++b)
      words[w] |= static_cast<uint64_t>(bytes[4 + 8 * w + b]) << (8 * b);
  }
  return words;
}

std::string to_hex(const std::vector<uint8_t>& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(2 * bytes.size());
  for (uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xf]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Keyed function family
// ---------------------------------------------------------------------------

PrfFamily::PrfFamily(uint32_t in_bits_, uint32_t out_bits_)
    : in_bits(in_bits_), out_bits(out_bits_) {
  if (in_bits == 0 || in_bits > 64 || out_bits == 0 || out_bits > 64)
    throw std::invalid_argument("bit widths must lie in [1, 64]");
}

uint64_t PrfFamily::in_mask() const {
  return in_bits == 64 ? ~0ULL : (1ULL << in_bits) - 1;
}

uint64_t PrfFamily::out_mask() const {
  return out_bits == 64 ? ~0ULL : (1ULL << out_bits) - 1;
}

uint64_t PrfFamily::eval(uint64_t key, uint64_t x) const {
  x &= in_mask();
  // Two finalizer rounds with the key folded in twice; domain-separated by
  // the widths so distinct families disagree even on shared keys.
  const uint64_t k1 = mix64(key ^ 0x7f4a7c15a9e3779bULL);
  const uint64_t k2 = mix64(key + 0x9e3779b97f4a7c15ULL * (in_bits | (uint64_t{out_bits} << 8)));
  uint64_t z = mix64(x + k1);
  z = mix64(z ^ k2);
  return z & out_mask();
}

// ---------------------------------------------------------------------------
// Scheme constructions
// ---------------------------------------------------------------------------

Scheme prf_scheme(uint32_t n) {
  if (n == 0 || n > 64) throw std::invalid_argument("n must lie in [1, 64]");
  PrfFamily family(n, n);
  Scheme scheme;
  scheme.name = "prf";
  scheme.key_space = "{0,1}^" + std::to_string(n);
  scheme.message_space = "{0,1}^" + std::to_string(n);
  scheme.cipher_space = "{0,1}^" + std::to_string(n) + " x {0,1}^" + std::to_string(n);
  scheme.message_bits = n;
  scheme.keygen = [family](Rng& rng) {
    return Key{rng.next_u64() & family.in_mask()};
  };
  scheme.enc = [family](const Key& k, uint64_t m, Rng& rng) {
    if ((m & ~family.out_mask()) != 0)
      throw std::invalid_argument("message exceeds the declared length");
    const uint64_t r = rng.next_u64() & family.in_mask();
    return Cipher{{r, family.eval(k[0], r) ^ m}};
  };
  scheme.dec = [family](const Key& k, const Cipher& c) {
    if (c.words.size() != 2) throw std::invalid_argument("malformed ciphertext");
    return c.words[1] ^ family.eval(k[0], c.words[0]);
  };
  return scheme;
}

Scheme lwe_skes(uint32_t n, int64_t q, const ErrorDistribution& chi) {
  if (q < 5) throw std::invalid_argument("modulus must be >= 5");
  if (n == 0) throw std::invalid_argument("dimension must be >= 1");
  const int64_t half = q / 2;
  const int64_t band = q / 4;

  Scheme scheme;
  scheme.name = "lwe";
  scheme.key_space = "(Z_" + std::to_string(q) + ")^" + std::to_string(n);
  scheme.message_space = "{0,1}";
  scheme.cipher_space =
      "(Z_" + std::to_string(q) + ")^" + std::to_string(n) + " x Z_" + std::to_string(q);
  scheme.message_bits = 1;

  // Exact correctness analysis: bit 0 misdecodes iff some |e| <= eta has
  // centered distance > band; bit 1 misdecodes iff some floor(q/2)+e lands
  // within the band.
  for (int64_t e = -chi.eta; e <= chi.eta; ++e) {
    if (centered_abs(e, q) > band) scheme.lossy = true;
    if (centered_abs(half + e, q) <= band) scheme.lossy = true;
  }

  scheme.keygen = [n, q](Rng& rng) {
    Key k(n);
    for (auto& v : k) v = rng.uniform_int(static_cast<uint64_t>(q));
    return k;
  };
  scheme.enc = [n, q, half, chi](const Key& k, uint64_t b, Rng& rng) {
    if (b > 1) throw std::invalid_argument("message must be a single bit");
    Cipher c;
    c.words.resize(n + 1);
    int64_t dot = 0;
    for (uint32_t j = 0; j < n; ++j) {
      const int64_t a = static_cast<int64_t>(rng.uniform_int(static_cast<uint64_t>(q)));
      c.words[j] = static_cast<uint64_t>(a);
      dot = mod_add(dot, mod_mul(a, static_cast<int64_t>(k[j]), q), q);
    }
    const int64_t e = sample_error(chi, rng);
    c.words[n] = static_cast<uint64_t>(
        mod_reduce(dot + static_cast<int64_t>(b) * half + e, q));
    return c;
  };
  scheme.dec = [n, q, band](const Key& k, const Cipher& c) {
    if (c.words.size() != n + 1) throw std::invalid_argument("malformed ciphertext");
    int64_t dot = 0;
    for (uint32_t j = 0; j < n; ++j)
      dot = mod_add(dot, mod_mul(static_cast<int64_t>(c.words[j]),
                                 static_cast<int64_t>(k[j]), q),
                    q);
    const int64_t dist = centered_abs(static_cast<int64_t>(c.words[n]) - dot, q);
    return static_cast<uint64_t>(dist <= band ? 0 : 1);
  };
  return scheme;
}

uint64_t periodized_eval(uint32_t n, uint64_t key, uint64_t p, uint64_t x) {
  PrfFamily family(n, 2 * n + 3);
  // The (2n+3)-bit input string is read as an unsigned little-endian integer
  // and reduced mod the hidden period before the keyed map is applied.
  return family.eval(key, x % p);
}

Scheme periodized_prf_scheme(uint32_t n) {
  if (n < 2 || n > 30) throw std::invalid_argument("n must lie in [2, 30]");
  const uint32_t width = 2 * n + 3;
  PrfFamily family(n, width);

  Scheme scheme;
  scheme.name = "periodized";
  scheme.key_space = "{0,1}^" + std::to_string(n) + " x Primes[2^" +
                     std::to_string(n) + "/2, 2^" + std::to_string(n) + ")";
  scheme.message_space = "{0,1}^" + std::to_string(width);
  scheme.cipher_space =
      "{0,1}^" + std::to_string(width) + " x {0,1}^" + std::to_string(width);
  scheme.message_bits = width;

  const uint64_t msg_mask = (1ULL << width) - 1;
  scheme.keygen = [n, family](Rng& rng) {
    return Key{rng.next_u64() & family.in_mask(), sample_prime(n, rng)};
  };
  scheme.enc = [n, msg_mask](const Key& k, uint64_t m, Rng& rng) {
    if ((m & ~msg_mask) != 0)
      throw std::invalid_argument("message exceeds the declared length");
    const uint64_t r = rng.next_u64() & msg_mask;
    return Cipher{{r, periodized_eval(n, k[0], k[1], r) ^ m}};
  };
  scheme.dec = [n](const Key& k, const Cipher& c) {
    if (c.words.size() != 2) throw std::invalid_argument("malformed ciphertext");
    return c.words[1] ^ periodized_eval(n, k[0], k[1], c.words[0]);
  };
  return scheme;
}

}  // namespace qlab
