#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qlab/modmath.hpp"
#include "qlab/oracles.hpp"
#include "qlab/qudit_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Results
// ---------------------------------------------------------------------------

/// Outcome of one learner run. `hypothesis` is empty on abstention. When the
/// full output distribution is tractable, `exact_success_prob` carries the
/// sampling-free success probability for the realized oracle draw.
struct LearnResult {
  std::optional<std::vector<int64_t>> hypothesis;
  bool success = false;
  std::optional<double> exact_success_prob;
  uint64_t queries_used = 0;
  bool degenerate_secret = false;
};

/// Ground-truth secret for white-box success checking.
struct SecretSpec {
  uint32_t n = 1;
  uint32_t q = 2;
  std::vector<int64_t> s;

  static SecretSpec random(uint32_t n, uint32_t q, Rng& rng);
  bool is_zero() const;
};

// ---------------------------------------------------------------------------
// Learners
// ---------------------------------------------------------------------------

enum class DjVerdict { Constant, Balanced, PromiseViolated };

struct DjResult {
  DjVerdict verdict = DjVerdict::Constant;
  double p_all_zero = 0.0;  // exact probability of the all-zeros outcome
  uint64_t queries_used = 1;
};

/// Single-query constant-vs-balanced decision for a Boolean oracle (q = 2).
/// The exact all-zeros probability |(1/2^n) sum_x (-1)^f(x)|^2 is reported;
/// values off {0, 1} flag a promise violation.
DjResult deutsch_jozsa(const OracleSpec& f, Rng& rng);

/// Single-query recovery of s from the parity oracle f_s(x) = <s,x> mod 2.
/// Deterministic: the output distribution is a point mass on s.
LearnResult bernstein_vazirani(const SecretSpec& secret, Rng& rng);

/// Single-sample parity learning from a (possibly noisy) example oracle
/// (q = 2). Pipeline: example state with one Bernoulli(eta) parity flip,
/// Hadamard on all n+1 qubits, full measurement, then the read-out rule:
/// eta = 0: read the first n bits as s iff the last qubit measured 1;
/// eta > 0: read the first n bits iff they are nonzero. Success probability
/// is exactly 1/2 for s != 0, independent of eta.
LearnResult quantum_parity_learn(const SecretSpec& secret, double eta, Rng& rng);

/// Single-sample recovery of s in (Z_q)^n from the noiseless inner-product
/// example oracle: Fourier transform on all n+1 digits, measure
/// (z_1..z_n, z_{n+1}), and output s~_i = -z_i / z_{n+1} mod q when
/// gcd(z_{n+1}, q) = 1, else abstain. Exact success = totient(q)/q.
LearnResult extended_bv(const SecretSpec& secret, Rng& rng);

struct EbvLweResult {
  LearnResult base;
  double success_bound = 0.0;        // totient(q) / (24 eta q)
  std::vector<int64_t> errors;       // realized error vector e_x
  double formula_success = 0.0;      // closed-form interference sum
};

/// The same pipeline against an LWE example oracle with i.i.d. additive
/// errors drawn from chi (|e| <= eta, eta >= 1). Reports both the exact
/// success probability for the realized error vector (from the statevector)
/// and its closed-form value
///   (1/q^(2n+1)) sum_{gcd(z,q)=1} |sum_x omega^(e_x z)|^2.
EbvLweResult extended_bv_lwe(const SecretSpec& secret,
                             const ErrorDistribution& chi, Rng& rng);

// ---------------------------------------------------------------------------
// Amplification
// ---------------------------------------------------------------------------

struct AmplifyResult {
  LearnResult result;
  uint64_t trials_budgeted = 0;
  uint64_t trials_run = 0;
};

/// Budget: ceil(log(delta) / log(p_fail)) independent trials.
uint64_t amplify_budget(double delta, double p_fail);

/// Repeat a one-shot learner until a verified hypothesis appears or the
/// budget runs out. `verify` decides acceptance of a candidate hypothesis
/// (white-box ground-truth check or fresh-sample predicate).
AmplifyResult amplify(
    const std::function<LearnResult(Rng&)>& trial,
    const std::function<bool(const std::vector<int64_t>&)>& verify,
    double delta, double p_fail, Rng& rng);

// ---------------------------------------------------------------------------
// Classical baseline
// ---------------------------------------------------------------------------

/// Probability that n uniform rows over F_2^n are linearly independent:
/// prod_{j=0}^{n-1} (1 - 2^(j-n)).
double independent_rows_prob(uint32_t n);

}  // namespace qlab
