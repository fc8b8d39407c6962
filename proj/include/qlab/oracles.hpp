#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "qlab/modmath.hpp"
#include "qlab/qudit_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Oracle descriptions
// ---------------------------------------------------------------------------

enum class NoiseKind {
  None,               // exact function evaluation
  BernoulliParity,    // one global additive flip e ~ Bernoulli(eta) per sample
  IndependentAdditive // i.i.d. additive error e_x ~ chi per superposed input
};

struct OracleNoise {
  NoiseKind kind = NoiseKind::None;
  double eta = 0.0;          // BernoulliParity rate, in [0, 1/2)
  ErrorDistribution chi;     // IndependentAdditive error law

  static OracleNoise none() { return {}; }
  static OracleNoise bernoulli_parity(double eta) {
    return {NoiseKind::BernoulliParity, eta, {}};
  }
  static OracleNoise independent_additive(const ErrorDistribution& chi) {
    return {NoiseKind::IndependentAdditive, 0.0, chi};
  }
};

/// A total function f: (Z_q)^n -> (Z_q)^out_digits plus a noise model,
/// realizable as a membership unitary or an example-state generator.
/// Inputs and outputs are passed packed little-endian (base q).
struct OracleSpec {
  uint32_t n = 1;          // input digits
  uint32_t q = 2;          // digit dimension
  uint32_t out_digits = 1; // output register digits
  std::function<uint64_t(uint64_t)> f;  // packed input -> packed output
  OracleNoise noise;

  /// Cap on q^n for operations that must enumerate every input (default 2^16).
  uint64_t enumeration_cap = 1ULL << 16;

  uint64_t input_dim() const;
  uint64_t output_dim() const;

  /// f_s(x) = <s, x> mod q (single output digit).
  static OracleSpec inner_product(uint32_t n, uint32_t q,
                                  const std::vector<int64_t>& s);
  /// Constant function f(x) = value.
  static OracleSpec constant(uint32_t n, uint32_t q, uint64_t value,
                             uint32_t out_digits = 1);
  /// Dense lookup table (size q^n) of packed outputs.
  static OracleSpec from_table(uint32_t n, uint32_t q,
                               std::vector<uint64_t> table,
                               uint32_t out_digits = 1);
};

// ---------------------------------------------------------------------------
// Oracle realizations
// ---------------------------------------------------------------------------

/// Membership unitary |x>|y> -> |x>|y + f(x)>, digit-wise addition mod q on
/// the output register (XOR when q = 2). The state must have exactly
/// n + out_digits digits: inputs at digits 0..n-1, outputs at n..n+out-1.
/// Membership oracles are noiseless; a spec with noise is rejected.
[[nodiscard]] QuditState membership_apply(const QuditState& state,
                                          const OracleSpec& spec);

/// One uniform example state draw. For NoiseKind::None the state is exactly
/// (1/sqrt(q^n)) sum_x |x>|f(x)>; BernoulliParity adds one shared error e
/// with Pr[e != 0] = eta (e = 1 for q = 2); IndependentAdditive adds an
/// i.i.d. error e_x ~ chi to every term (requires q^n <= enumeration_cap).
struct ExampleDraw {
  QuditState state;
  bool parity_flipped = false;     // BernoulliParity: whether e != 0
  std::vector<int64_t> errors;     // IndependentAdditive: realized e_x.
};

ExampleDraw example_state_draw(const OracleSpec& spec, Rng& rng);

/// Convenience wrapper returning only the state.
QuditState example_state(const OracleSpec& spec, Rng& rng);

}  // namespace qlab
