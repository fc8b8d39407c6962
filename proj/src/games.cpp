#include "qlab/games.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include <nlohmann/json.hpp>

#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// GameIO
// ---------------------------------------------------------------------------

GameIO::GameIO(const Scheme& scheme, const Key& key, GameMode mode, Rng& rng)
    : scheme_(scheme), key_(key), mode_(mode), rng_(rng) {}

Cipher GameIO::enc(uint64_t message) {
  log_.push_back({QueryRecord::Type::Enc, post_challenge_});
  return scheme_.enc(key_, message, rng_);
}

uint64_t GameIO::dec(const Cipher& cipher) {
  log_.push_back({QueryRecord::Type::Dec, post_challenge_});
  if (mode_ == GameMode::CPA)
    throw AccessViolation("decryption oracle unavailable in CPA mode");
  if (post_challenge_)
    throw AccessViolation("decryption oracle closed after the challenge");
  return scheme_.dec(key_, cipher);
}

uint32_t GameIO::message_bits() const { return scheme_.message_bits; }

// ---------------------------------------------------------------------------
// Wilson interval and game harness
// ---------------------------------------------------------------------------

std::pair<double, double> wilson_interval(uint64_t wins, uint64_t trials) {
  if (trials == 0) return {0.0, 1.0};
  const double z = 2.5758293035489004;  // 99.5th percentile of N(0,1)
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(wins) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = p + z2 / (2.0 * nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, (center - half) / denom),
          std::min(1.0, (center + half) / denom)};
}

WinRateReport run_ind_game(const Scheme& scheme, const Adversary& adversary,
                           GameMode mode, uint64_t trials, uint64_t seed,
                           bool keep_transcripts) {
  WinRateReport report;
  report.trials = trials;
  for (uint64_t t = 0; t < trials; ++t) {
    Rng rng = Rng::substream(seed, t);
    GameTranscript tr;
    tr.seed = seed;
    tr.scheme = scheme.name;
    tr.mode = mode;

    const Key key = scheme.keygen(rng);
    GameIO io(scheme, key, mode, rng);
    tr.b = rng.bernoulli(0.5) ? 1 : 0;
    try {
      if (adversary.pre_challenge) adversary.pre_challenge(io);
      auto [m0, m1] = adversary.choose_challenge(io);
      tr.m0 = m0;
      tr.m1 = m1;
      const Cipher challenge =
          scheme.enc(key, tr.b == 0 ? m0 : m1, rng);
      io.enter_challenge_phase();
      if (adversary.post_challenge) adversary.post_challenge(io, challenge);
      tr.b_prime = adversary.guess(io, challenge) ? 1 : 0;
      tr.win = (tr.b_prime == tr.b);
    } catch (const AccessViolation&) {
      tr.aborted = true;
      tr.win = false;
      ++report.aborted;
    }
    for (const auto& rec : io.log())
      (rec.type == QueryRecord::Type::Enc ? tr.enc_queries : tr.dec_queries)++;
    if (tr.win) ++report.wins;
    if (keep_transcripts) report.transcripts.push_back(std::move(tr));
  }
  report.rate =
      trials ? static_cast<double>(report.wins) / static_cast<double>(trials)
             : 0.0;
  std::tie(report.wilson_low, report.wilson_high) =
      wilson_interval(report.wins, trials);
  return report;
}

// ---------------------------------------------------------------------------
// Key recovery
// ---------------------------------------------------------------------------

Key key_recovery_attack(
    const std::function<uint64_t(const Cipher&)>& dec_oracle, uint32_t n,
    int64_t q, uint64_t M, Rng& rng, KeyEstimator estimator) {
  if (q < 5) throw std::invalid_argument("key_recovery_attack: q must be >= 5");
  const int64_t band = q / 4;
  const int64_t half = q / 2;
  Key key(n, 0);
  for (uint32_t i = 0; i < n; ++i) {
    std::vector<uint64_t> votes(static_cast<size_t>(q), 0);
    long double mean_acc = 0.0L;
    for (uint64_t mq = 0; mq < M; ++mq) {
      const int64_t c = static_cast<int64_t>(rng.uniform_int(
          static_cast<uint64_t>(q)));
      Cipher cipher;
      cipher.words.assign(n + 1, 0);
      cipher.words[i] = 1;  // a = e_i, so <a, k> = k_i
      cipher.words[n] = static_cast<uint64_t>(c);
      const uint64_t bit = dec_oracle(cipher);
      if (estimator == KeyEstimator::BandVote) {
        // Dec replies 0 exactly when |c - k_i| (centered) <= floor(q/4):
        // a 0-reply votes for the band around c, a 1-reply for its complement.
        for (int64_t d = -band; d <= band; ++d) {
          const int64_t k = mod_reduce(c + d, q);
          if (bit == 0)
            ++votes[static_cast<size_t>(k)];
        }
        if (bit == 1) {
          for (int64_t k = 0; k < q; ++k) {
            if (centered_abs(mod_reduce(c - k, q), q) > band)
              ++votes[static_cast<size_t>(k)];
          }
        }
      } else {
        // Plain mean of X = c - b * floor(q/2) (mod q): unbiased only when
        // the key sits far from the wrap-around point. Kept for comparison.
        const int64_t x = mod_reduce(c - static_cast<int64_t>(bit) * half, q);
        mean_acc += static_cast<long double>(x);
      }
    }
    if (estimator == KeyEstimator::BandVote) {
      key[i] = static_cast<uint64_t>(
          std::max_element(votes.begin(), votes.end()) - votes.begin());
    } else {
      const long double mean = M ? mean_acc / static_cast<long double>(M) : 0;
      key[i] = static_cast<uint64_t>(
          mod_reduce(llroundl(mean), q));
    }
  }
  return key;
}

Adversary key_recovery_adversary(uint32_t n, int64_t q, uint64_t M) {
  auto recovered = std::make_shared<std::optional<Key>>();
  Adversary adv;
  adv.name = "key-recovery";
  adv.pre_challenge = [recovered, n, q, M](GameIO& io) {
    recovered->reset();
    if (io.mode() != GameMode::CCA1) return;  // no decryption access
    auto oracle = [&io](const Cipher& c) { return io.dec(c); };
    *recovered = key_recovery_attack(oracle, n, q, M, io.rng());
  };
  adv.choose_challenge = [](GameIO&) {
    return std::pair<uint64_t, uint64_t>(0, 1);
  };
  adv.post_challenge = nullptr;
  adv.guess = [recovered, n, q](GameIO& io, const Cipher& challenge) -> int {
    if (!recovered->has_value()) return io.rng().bernoulli(0.5) ? 1 : 0;
    const Key& k = **recovered;
    int64_t dot = 0;
    for (uint32_t j = 0; j < n; ++j)
      dot = mod_add(dot, mod_mul(static_cast<int64_t>(challenge.words[j]),
                                 static_cast<int64_t>(k[j]), q),
                    q);
    const int64_t c = static_cast<int64_t>(challenge.words[n]);
    const int64_t r = mod_reduce(c - dot, q);
    return centered_abs(r, q) <= q / 4 ? 0 : 1;
  };
  return adv;
}

// ---------------------------------------------------------------------------
// Classical relabeling
// ---------------------------------------------------------------------------

ClassicalRelabelReport classical_relabeling(uint32_t n, uint32_t m, uint64_t T,
                                            uint64_t trials, uint64_t seed) {
  if (n == 0 || n > 20 || m == 0 || m > 20)
    throw std::invalid_argument("classical_relabeling: n, m must be in [1,20]");
  ClassicalRelabelReport rep;
  rep.n = n;
  rep.m = m;
  rep.T = T;
  const uint64_t domain = 1ull << n;
  const uint64_t range = 1ull << m;
  uint64_t t_eff = T;
  if (t_eff > domain) {
    t_eff = domain;
    rep.capped = true;
  }
  // Optimal distinguisher: cover t_eff points; on a covered challenge point,
  // claim "shifted" iff the revealed value differs from the stored one. Win:
  //   1/2 + (t_eff / 2^(n+1)) * (1 - 2^-m).
  const Rational coverage(static_cast<long long>(t_eff),
                          static_cast<long long>(domain));
  const Rational half(1, 2);
  rep.exact_advantage =
      coverage * half *
      (Rational(1) - Rational(1, static_cast<long long>(range)));
  rep.exact_win = half + rep.exact_advantage;
  rep.bound = Rational(static_cast<long long>(T),
                       static_cast<long long>(domain));

  // Sampled mode: Monte-Carlo the same strategy against fresh games.
  rep.trials = trials;
  for (uint64_t tr = 0; tr < trials; ++tr) {
    Rng rng = Rng::substream(seed, tr);
    const uint64_t x_star = rng.uniform_int(domain);
    const uint64_t f_xstar = rng.uniform_int(range);  // only f(x*) matters
    const uint64_t s = rng.uniform_int(range);
    const int b = rng.bernoulli(0.5) ? 1 : 0;
    const uint64_t y_star = (b == 1) ? (f_xstar ^ s) : f_xstar;
    // Queried set: t_eff distinct points; by symmetry take 0..t_eff-1 and
    // draw x* uniformly, so coverage has the right probability.
    int guess;
    if (x_star < t_eff)
      guess = (y_star != f_xstar) ? 1 : 0;
    else
      guess = rng.bernoulli(0.5) ? 1 : 0;
    if (guess == b) ++rep.wins;
  }
  rep.sampled_rate =
      trials ? static_cast<double>(rep.wins) / static_cast<double>(trials)
             : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Quantum relabeling
// ---------------------------------------------------------------------------

OracleCircuit random_oracle_circuit(uint32_t qubits, uint32_t T, Rng& rng) {
  OracleCircuit circuit;
  circuit.layers.resize(T + 1);
  for (auto& layer : circuit.layers) {
    for (uint32_t w = 0; w < qubits; ++w)
      layer.push_back(UnitaryOp{{w}, random_su2(rng)});
    for (uint32_t w = 0; w + 1 < qubits; ++w)
      layer.push_back(UnitaryOp{{w, w + 1}, cnot()});
  }
  return circuit;
}

namespace {

/// |psi> = U_T O ... U_1 O U_0 |advice>.
QuditState run_oracle_circuit(const OracleCircuit& circuit,
                              const OracleSpec& oracle,
                              const QuditState& advice) {
  QuditState state = advice;
  for (size_t t = 0; t < circuit.layers.size(); ++t) {
    if (t > 0) state = membership_apply(state, oracle);
    for (const auto& gate : circuit.layers[t])
      state = apply_unitary(state, gate);
  }
  return state;
}

}  // namespace

QuantumRelabelDraw quantum_relabel_single(const RelabelConfig& cfg,
                                          const OracleCircuit& circuit,
                                          const OracleSpec& base,
                                          const std::vector<uint32_t>& r_star,
                                          uint64_t s) {
  if (r_star.size() != cfg.mu)
    throw std::invalid_argument("quantum_relabel_single: |r*| != mu");
  const uint32_t n = cfg.n;
  const uint32_t mu = cfg.mu;
  uint64_t suffix = 0;  // r* packed into the mu most significant input bits
  for (uint32_t j = 0; j < mu; ++j)
    suffix |= static_cast<uint64_t>(r_star[j] & 1) << (n - mu + j);
  const uint64_t mask = ((mu == 0 ? 0ull : ((1ull << mu) - 1)) << (n - mu));

  OracleSpec shifted = base;
  auto f = base.f;
  shifted.f = [f, suffix, mask, s](uint64_t x) {
    const uint64_t y = f(x);
    return ((x & mask) == suffix) ? (y ^ s) : y;
  };

  // Advice: one query on the uniform superposition, shared by both worlds.
  QuditState advice = QuditState::basis_index(2, n + cfg.m, 0);
  apply_qft_all(advice);
  advice = membership_apply(advice, base);

  const QuditState world_f = run_oracle_circuit(circuit, base, advice);
  const QuditState world_g = run_oracle_circuit(circuit, shifted, advice);

  QuantumRelabelDraw draw;
  draw.r_star = r_star;
  draw.s = s;
  draw.delta = trace_distance(world_f, world_g);
  return draw;
}

QuantumRelabelReport quantum_relabeling_tracedist(const RelabelConfig& cfg,
                                                  uint64_t draws,
                                                  uint64_t seed) {
  if (cfg.mu > cfg.n)
    throw std::invalid_argument("quantum_relabeling: mu must be <= n");
  if (cfg.m == 0 || cfg.m > 16)
    throw std::invalid_argument("quantum_relabeling: m must be in [1,16]");
  QuantumRelabelReport rep;
  rep.cfg = cfg;
  rep.draws = draws;
  rep.bound = 2.0 * static_cast<double>(cfg.T) /
              std::sqrt(std::pow(2.0, static_cast<double>(cfg.mu)));
  double sum = 0.0;
  for (uint64_t d = 0; d < draws; ++d) {
    Rng rng = Rng::substream(seed, d);
    // Fresh hidden function, circuit, suffix and shift per draw.
    const uint64_t domain = 1ull << cfg.n;
    std::vector<uint64_t> table(domain);
    for (auto& y : table) y = rng.uniform_int(1ull << cfg.m);
    OracleSpec base = OracleSpec::from_table(cfg.n, 2, table, cfg.m);
    OracleCircuit circuit = random_oracle_circuit(cfg.n + cfg.m, cfg.T, rng);
    std::vector<uint32_t> r_star(cfg.mu);
    for (auto& b : r_star) b = static_cast<uint32_t>(rng.uniform_int(2));
    const uint64_t s = 1 + rng.uniform_int((1ull << cfg.m) - 1);  // nonzero
    const QuantumRelabelDraw one =
        quantum_relabel_single(cfg, circuit, base, r_star, s);
    sum += one.delta;
    rep.max_delta = std::max(rep.max_delta, one.delta);
    if (one.delta > 3.0 * rep.bound) ++rep.flagged;
  }
  rep.mean_delta = draws ? sum / static_cast<double>(draws) : 0.0;
  return rep;
}

// ---------------------------------------------------------------------------
// Transcript export
// ---------------------------------------------------------------------------

std::string transcripts_to_jsonl(const WinRateReport& report) {
  std::string out;
  for (const auto& tr : report.transcripts) {
    nlohmann::json j{
        {"seed", tr.seed},
        {"scheme", tr.scheme},
        {"mode", tr.mode == GameMode::CPA ? "cpa" : "cca1"},
        {"enc_queries", tr.enc_queries},
        {"dec_queries", tr.dec_queries},
        {"m0", tr.m0},
        {"m1", tr.m1},
        {"b", tr.b},
        {"b_prime", tr.b_prime},
        {"win", tr.win},
        {"aborted", tr.aborted},
    };
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace qlab
