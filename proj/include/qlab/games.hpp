#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlab/modmath.hpp"
#include "qlab/oracles.hpp"
#include "qlab/qudit_state.hpp"
#include "qlab/schemes.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Indistinguishability games (chosen-plaintext / pre-challenge decryption)
// ---------------------------------------------------------------------------

enum class GameMode { CPA, CCA1 };

/// Thrown when an adversary requests decryption in a phase or mode where the
/// game denies it (CPA always; CCA1 after the challenge).
struct AccessViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct QueryRecord {
  enum class Type { Enc, Dec } type;
  bool post_challenge = false;
};

/// Oracle front-end handed to adversary callbacks; enforces phase rules and
/// records every query.
class GameIO {
 public:
  GameIO(const Scheme& scheme, const Key& key, GameMode mode, Rng& rng);

  Cipher enc(uint64_t message);
  uint64_t dec(const Cipher& cipher);  // throws AccessViolation when denied

  void enter_challenge_phase() { post_challenge_ = true; }
  const std::vector<QueryRecord>& log() const { return log_; }
  GameMode mode() const { return mode_; }
  uint32_t message_bits() const;
  Rng& rng() { return rng_; }

 private:
  const Scheme& scheme_;
  const Key& key_;
  GameMode mode_;
  Rng& rng_;
  bool post_challenge_ = false;
  std::vector<QueryRecord> log_;
};

/// Adversary as a callback bundle. The harness wires the same GameIO through
/// all four phases; `state` is scratch shared across them (one trial).
struct Adversary {
  std::string name;
  std::function<void(GameIO&)> pre_challenge;
  std::function<std::pair<uint64_t, uint64_t>(GameIO&)> choose_challenge;
  std::function<void(GameIO&, const Cipher&)> post_challenge;
  std::function<int(GameIO&, const Cipher&)> guess;
};

struct GameTranscript {
  uint64_t seed = 0;
  std::string scheme;
  GameMode mode = GameMode::CPA;
  uint64_t enc_queries = 0, dec_queries = 0;
  uint64_t m0 = 0, m1 = 0;
  int b = 0, b_prime = 0;
  bool win = false;
  bool aborted = false;  // access violation
};

struct WinRateReport {
  uint64_t trials = 0, wins = 0, aborted = 0;
  double rate = 0.0;
  double wilson_low = 0.0, wilson_high = 0.0;  // 99% interval
  std::vector<GameTranscript> transcripts;     // filled when requested
};

/// Wilson score interval at 99% confidence.
std::pair<double, double> wilson_interval(uint64_t wins, uint64_t trials);

/// Run `trials` independent games: fresh key and challenge bit per trial,
/// adversary callbacks wired through a phase-enforcing GameIO. Trials whose
/// adversary triggers an access violation are aborted and counted as losses.
WinRateReport run_ind_game(const Scheme& scheme, const Adversary& adversary,
                           GameMode mode, uint64_t trials, uint64_t seed,
                           bool keep_transcripts = false);

// ---------------------------------------------------------------------------
// Key recovery through a decryption oracle
// ---------------------------------------------------------------------------

enum class KeyEstimator {
  BandVote,   // circular estimator: each reply votes for the consistent band
  PlainMean,  // arithmetic mean of X[m] = c_m - b_m * floor(q/2) (biased)
};

/// Per-coordinate key recovery from a decryption oracle for the single-bit
/// inner-product scheme: M queries Dec_k(e_i, c) with uniform c. With the
/// band-vote estimator each reply (c, b) votes for every key value consistent
/// with the decryption rule (b = 0: k in [c - floor(q/4), c + floor(q/4)]
/// mod q; b = 1: the complement); the estimate is the vote argmax.
Key key_recovery_attack(
    const std::function<uint64_t(const Cipher&)>& dec_oracle, uint32_t n,
    int64_t q, uint64_t M, Rng& rng,
    KeyEstimator estimator = KeyEstimator::BandVote);

/// The adversary induced by the attack: recovers the key via pre-challenge
/// decryption queries, then decrypts the challenge itself. In CPA mode (no
/// decryption access) it degrades to a coin flip.
Adversary key_recovery_adversary(uint32_t n, int64_t q, uint64_t M);

// ---------------------------------------------------------------------------
// Classical relabeling experiment
// ---------------------------------------------------------------------------

struct ClassicalRelabelReport {
  uint64_t n = 0, m = 0, T = 0;
  bool capped = false;            // T > 2^n was clamped
  Rational exact_win{0};          // exhaustive-optimal win probability
  Rational exact_advantage{0};    // exact_win - 1/2
  Rational bound{0};              // T / 2^n
  // Sampled mode (query-then-compare distinguisher), when trials > 0:
  uint64_t trials = 0, wins = 0;
  double sampled_rate = 0.0;
};

/// Distinguish oracle access to a hidden uniformly random function
/// f: {0,1}^n -> {0,1}^m from its relabeling f XOR s at a challenge point.
/// Exact mode evaluates the Bayes-optimal distinguisher's win rate
/// 1/2 + (T/2^(n+1)) (1 - 2^-m) in rational arithmetic; sampled mode
/// Monte-Carlos the same query-then-compare strategy. n, m in [1, 20].
ClassicalRelabelReport classical_relabeling(uint32_t n, uint32_t m, uint64_t T,
                                            uint64_t trials, uint64_t seed);

// ---------------------------------------------------------------------------
// Quantum relabeling experiment
// ---------------------------------------------------------------------------

struct RelabelConfig {
  uint32_t n = 4;   // input bits
  uint32_t m = 2;   // output bits
  uint32_t mu = 4;  // relabeled suffix length, in [0, n] (mu = n: one point)
  uint32_t T = 1;   // oracle calls in the circuit
};

/// A T-query oracle circuit: unitaries U_0..U_T interleaved with oracle
/// calls, |psi> = U_T O U_{T-1} ... U_1 O U_0 |advice>.
struct OracleCircuit {
  std::vector<std::vector<UnitaryOp>> layers;  // T+1 layers of gates
};

/// Random circuit: per layer, an independent Haar 2x2 on every qubit followed
/// by a fixed CNOT chain (0,1), (1,2), ... across the full register.
OracleCircuit random_oracle_circuit(uint32_t qubits, uint32_t T, Rng& rng);

struct QuantumRelabelDraw {
  std::vector<uint32_t> r_star;  // suffix (mu bits)
  uint64_t s = 0;                // output shift (m bits, nonzero)
  double delta = 0.0;            // trace distance between the two worlds
};

struct QuantumRelabelReport {
  RelabelConfig cfg;
  double bound = 0.0;        // 2 T / sqrt(2^mu)
  double mean_delta = 0.0;   // over the sampled (r*, s) draws
  double max_delta = 0.0;
  uint64_t draws = 0;
  uint64_t flagged = 0;      // single draws above 3x the bound, for inspection
};

/// Build f* from f by XOR-ing s onto f(x) for every x whose mu most
/// significant input bits equal r* (inputs are packed little-endian, so the
/// "last mu bits" of x written as z || r* are digits n-mu .. n-1). Runs the
/// circuit under both oracles with identical unitaries and advice, measures
/// the trace distance per draw, and compares the draw mean with the bound.
/// The advice state is a one-query precomputation under the base oracle:
/// O_f H^(n+m) |0>.
QuantumRelabelReport quantum_relabeling_tracedist(const RelabelConfig& cfg,
                                                  uint64_t draws,
                                                  uint64_t seed);

/// Single-draw variant against a caller-supplied circuit and draw, for tests.
QuantumRelabelDraw quantum_relabel_single(const RelabelConfig& cfg,
                                          const OracleCircuit& circuit,
                                          const OracleSpec& base,
                                          const std::vector<uint32_t>& r_star,
                                          uint64_t s);

// ---------------------------------------------------------------------------
// Transcript export
// ---------------------------------------------------------------------------

/// One JSON object per transcript, line-delimited.
std::string transcripts_to_jsonl(const WinRateReport& report);

}  // namespace qlab
