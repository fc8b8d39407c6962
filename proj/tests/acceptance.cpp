// Acceptance suite: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Each criterion states its tolerance and wall-clock budget; a criterion
// fails when either the checks or the budget are missed.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <string>
#include <vector>

#include "qlab/channels.hpp"
#include "qlab/games.hpp"
#include "qlab/learn.hpp"
#include "qlab/modmath.hpp"
#include "qlab/oracles.hpp"
#include "qlab/qudit_state.hpp"
#include "qlab/rng.hpp"
#include "qlab/schemes.hpp"

using namespace qlab;

namespace {

int g_failures = 0;

class Criterion {
 public:
  Criterion(int id, const char* label, double budget_s)
      : id_(id), label_(label), budget_s_(budget_s),
        start_(std::chrono::steady_clock::now()) {}

  void require(bool ok, const std::string& what) {
    if (!ok && first_failure_.empty()) first_failure_ = what;
    ok_ = ok_ && ok;
  }

  void note(const std::string& text) { notes_ = text; }

  void finish() {
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      start_)
            .count();
    const bool in_budget = elapsed < budget_s_;
    const bool pass = ok_ && in_budget;
    if (!pass) ++g_failures;
    std::printf("%s  %2d  %s", pass ? "PASS" : "FAIL", id_, label_);
    if (!notes_.empty()) std::printf("  [%s]", notes_.c_str());
    std::printf("  (%.2fs of %.0fs budget)\n", elapsed, budget_s_);
    if (!ok_ && !first_failure_.empty())
      std::printf("          first failure: %s\n", first_failure_.c_str());
    if (!in_budget) std::printf("          over budget\n");
  }

 private:
  int id_;
  const char* label_;
  double budget_s_;
  std::chrono::steady_clock::time_point start_;
  bool ok_ = true;
  std::string first_failure_;
  std::string notes_;
};

std::string cell_str(const char* fmt, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return std::string(buf);
}

// --------------------------------------------------------------------------
// 1. Single-query mod-q secret recovery succeeds at exactly the coprime
//    fraction phi(q)/q of the time, for every modulus and register size.
// --------------------------------------------------------------------------
void criterion_1() {
  Criterion c(1, "mod-q secret recovery rate equals phi(q)/q (tol 1e-9)", 60);
  Rng rng(101);
  double max_dev = 0.0;
  for (uint32_t q = 2; q <= 16; ++q) {
    const double expect =
        static_cast<double>(totient(q)) / static_cast<double>(q);
    for (uint32_t n = 1; n <= 3; ++n) {
      for (int rep = 0; rep < 25; ++rep) {
        const SecretSpec secret = SecretSpec::random(n, q, rng);
        const LearnResult r = extended_bv(secret, rng);
        const double dev = std::abs(r.exact_success_prob.value() - expect);
        max_dev = std::max(max_dev, dev);
        c.require(dev <= 1e-9, cell_str("q=%u n=%u dev=%.3e", q, n, dev));
      }
    }
  }
  c.note(cell_str("15 moduli x 3 sizes x 25 secrets, max dev %.2e", max_dev));
  c.finish();
}

// --------------------------------------------------------------------------
// 2. Parity-secret recovery is deterministic: the output distribution puts
//    all mass on the secret, exhaustively over every secret.
// --------------------------------------------------------------------------
void criterion_2() {
  Criterion c(2, "parity recovery is a point mass on the secret (tol 1e-12)",
              10);
  Rng rng(102);
  for (uint32_t n = 1; n <= 6; ++n) {
    for (uint64_t packed = 0; packed < (1ull << n); ++packed) {
      std::vector<int64_t> bits(n);
      for (uint32_t j = 0; j < n; ++j) bits[j] = (packed >> j) & 1;
      SecretSpec secret;
      secret.n = n;
      secret.q = 2;
      secret.s = bits;

      const LearnResult r = bernstein_vazirani(secret, rng);
      c.require(r.hypothesis.has_value() && *r.hypothesis == bits,
                cell_str("n=%u s=%llu wrong hypothesis", n,
                         (unsigned long long)packed));
      c.require(std::abs(r.exact_success_prob.value() - 1.0) <= 1e-12,
                cell_str("n=%u s=%llu p(s) off 1", n,
                         (unsigned long long)packed));

      // Off-mass check through the public circuit pieces: the full marginal
      // over the first n digits must vanish away from the secret.
      QuditState psi = QuditState::basis_index(2, n + 1, 1ull << n);
      apply_qft_all(psi);
      psi = membership_apply(psi, OracleSpec::inner_product(n, 2, bits));
      std::vector<uint32_t> firsts(n);
      std::iota(firsts.begin(), firsts.end(), 0);
      apply_qft(psi, firsts);
      const std::vector<double> dist = exact_distribution(psi);
      for (uint64_t m = 0; m < (1ull << n); ++m) {
        const double p_m = dist[m] + dist[m + (1ull << n)];
        const double expect = m == packed ? 1.0 : 0.0;
        c.require(std::abs(p_m - expect) <= 1e-12,
                  cell_str("n=%u s=%llu p(%llu)=%.3e", n,
                           (unsigned long long)packed, (unsigned long long)m,
                           p_m));
      }
    }
  }
  c.note("exhaustive secrets and outcomes, n = 1..6");
  c.finish();
}

// --------------------------------------------------------------------------
// 3. Single-sample noisy-parity learning succeeds with probability exactly
//    1/2 for every nonzero secret, independent of the noise rate.
// --------------------------------------------------------------------------
void criterion_3() {
  Criterion c(3, "noisy-parity success is 1/2 at every noise rate (tol 1e-9)",
              10);
  Rng rng(103);
  for (double eta : {0.0, 0.1, 0.25, 0.49}) {
    for (int rep = 0; rep < 20; ++rep) {
      const uint32_t n = 1 + static_cast<uint32_t>(rng.uniform_int(6));
      SecretSpec secret = SecretSpec::random(n, 2, rng);
      while (secret.is_zero()) secret = SecretSpec::random(n, 2, rng);
      const LearnResult r = quantum_parity_learn(secret, eta, rng);
      c.require(std::abs(r.exact_success_prob.value() - 0.5) <= 1e-9,
                cell_str("eta=%.2f n=%u p=%.12f", eta, n,
                         r.exact_success_prob.value()));
    }
  }
  c.note("eta in {0, 0.1, 0.25, 0.49}, 20 nonzero secrets each, n <= 6");
  c.finish();
}

// --------------------------------------------------------------------------
// 4. Noisy mod-q recovery: for every realized error draw the exact success
//    probability clears the phi(q)/(24 eta q) floor.
// --------------------------------------------------------------------------
void criterion_4() {
  Criterion c(4, "noisy mod-q recovery clears the phi(q)/(24 eta q) floor",
              120);
  Rng rng(104);
  const struct {
    int64_t q;
    int64_t eta;
  } cells[] = {{5, 1}, {7, 1}, {11, 1}, {13, 1}, {13, 2}};
  double min_margin = 1e300;
  for (const auto& cell : cells) {
    const ErrorDistribution chi =
        ErrorDistribution::bounded_uniform(cell.eta, cell.q);
    for (uint32_t n = 1; n <= 2; ++n) {
      for (int rep = 0; rep < 10; ++rep) {
        const SecretSpec secret =
            SecretSpec::random(n, static_cast<uint32_t>(cell.q), rng);
        const EbvLweResult r = extended_bv_lwe(secret, chi, rng);
        const double exact = r.base.exact_success_prob.value();
        c.require(std::abs(exact - r.formula_success) <= 1e-9,
                  cell_str("q=%lld eta=%lld n=%u closed form off by %.3e",
                           (long long)cell.q, (long long)cell.eta, n,
                           std::abs(exact - r.formula_success)));
        c.require(exact >= r.success_bound - 1e-12,
                  cell_str("q=%lld eta=%lld n=%u exact=%.6f < bound=%.6f",
                           (long long)cell.q, (long long)cell.eta, n, exact,
                           r.success_bound));
        min_margin = std::min(min_margin, exact - r.success_bound);
        for (int64_t e : r.errors)
          c.require(std::abs(e) <= cell.eta, "error magnitude out of range");
      }
    }
  }
  c.note(cell_str("q in {5,7,11,13}, 10 draws per cell, min margin %.4f",
                  min_margin));
  c.finish();
}

// --------------------------------------------------------------------------
// 5. A decryption oracle leaks the key: budgeted queries recover it almost
//    always, the induced adversary wins the pre-challenge-decryption game,
//    and the same adversary without decryption access is a coin flip.
// --------------------------------------------------------------------------
void criterion_5() {
  Criterion c(5,
              "decryption access separates the two game modes "
              "(recovery >= 0.99, wins >= 0.95, coin flip in [0.47, 0.53])",
              120);
  const uint32_t n = 8;
  const int64_t q = 23;
  const Scheme s = lwe_skes(n, q, ErrorDistribution::bounded_uniform(1, q));
  const uint64_t M = hoeffding_budget(0.01, 1, 0.1);

  int recovered = 0;
  for (uint64_t t = 0; t < 100; ++t) {
    Rng rng(mix64(0x51ec0ull ^ t));
    const Key k = s.keygen(rng);
    const auto oracle = [&](const Cipher& ct) { return s.dec(k, ct); };
    recovered += key_recovery_attack(oracle, n, q, M, rng) == k ? 1 : 0;
  }
  c.require(recovered >= 99, cell_str("recovered %d/100", recovered));

  const Adversary a = key_recovery_adversary(n, q, M);
  const WinRateReport cca1 = run_ind_game(s, a, GameMode::CCA1, 1000, 0xA1);
  c.require(cca1.rate >= 0.95, cell_str("dec-game rate %.4f", cca1.rate));
  c.require(cca1.aborted == 0, "dec-game adversary tripped the access rules");

  const WinRateReport cpa = run_ind_game(s, a, GameMode::CPA, 1000, 0xA2);
  c.require(cpa.rate >= 0.47 && cpa.rate <= 0.53,
            cell_str("no-dec rate %.4f outside [0.47, 0.53]", cpa.rate));
  c.require(cpa.aborted == 0, "no-dec adversary tripped the access rules");

  c.note(cell_str("M=%llu, recovery %d/100, with-dec %.3f, without %.3f",
                  (unsigned long long)M, recovered, cca1.rate, cpa.rate));
  c.finish();
}

// --------------------------------------------------------------------------
// 6. Classical relabeling: the exhaustive-optimal distinguishing advantage
//    never exceeds T/2^n, in exact rational arithmetic.
// --------------------------------------------------------------------------
void criterion_6() {
  Criterion c(6, "classical relabeling advantage <= T/2^n (exact rationals)",
              60);
  for (uint32_t n = 1; n <= 12; ++n) {
    for (uint64_t T : {1ull, 4ull, 16ull, 64ull}) {
      const ClassicalRelabelReport r = classical_relabeling(n, 4, T, 0, 0);
      c.require(r.exact_advantage <= r.bound,
                cell_str("n=%u T=%llu advantage above bound", n,
                         (unsigned long long)T));
    }
  }
  c.note("n = 1..12, T in {1, 4, 16, 64}, m = 4");
  c.finish();
}

// --------------------------------------------------------------------------
// 7. Quantum relabeling: the mean trace distance between the base-oracle and
//    shifted-oracle worlds stays below 2T/sqrt(2^mu) over 100 seeded draws.
// --------------------------------------------------------------------------
void criterion_7() {
  Criterion c(7, "quantum relabeling mean trace distance <= 2T/sqrt(2^mu)",
              300);
  std::string cells;
  for (uint32_t mu : {4u, 6u, 8u}) {
    for (uint32_t T : {1u, 2u, 4u}) {
      RelabelConfig cfg;
      cfg.n = 8;
      cfg.m = 4;
      cfg.mu = mu;
      cfg.T = T;
      const QuantumRelabelReport r =
          quantum_relabeling_tracedist(cfg, 100, 0x7E1A ^ (mu * 16 + T));
      c.require(r.mean_delta <= r.bound,
                cell_str("mu=%u T=%u mean=%.4f > bound=%.4f", mu, T,
                         r.mean_delta, r.bound));
      if (!cells.empty()) cells += " ";
      cells += cell_str("mu%u/T%u:%.3f<=%.3f", mu, T, r.mean_delta,
                        std::min(r.bound, 1.0));
    }
  }
  c.note("n=8 m=4, 100 draws per cell");
  c.finish();
}

// --------------------------------------------------------------------------
// 8. Fourier-transform algebra over Z_q: unitarity, root orthogonality, and
//    shift diagonality, all within 1e-10.
// --------------------------------------------------------------------------
void criterion_8() {
  Criterion c(8, "Fourier algebra: unitary, orthogonal roots, diagonal shift "
                 "(tol 1e-10)",
              5);
  for (uint32_t q = 2; q <= 16; ++q) {
    c.require(unitarity_defect(qft_matrix(q)) <= 1e-10,
              cell_str("q=%u transform not unitary", q));
    c.require(check_root_orthogonality(q, 1e-10).pass,
              cell_str("q=%u root orthogonality fails", q));
    c.require(check_shift_diagonality(q, 1e-10).pass,
              cell_str("q=%u shift diagonality fails", q));
  }
  c.note("q = 2..16");
  c.finish();
}

// --------------------------------------------------------------------------
// 9. Noise channels keep density matrices valid; the 3-qubit flip code fixes
//    every single-position error; the repetition-code formula matches
//    Monte-Carlo within 3 sigma.
// --------------------------------------------------------------------------
void criterion_9() {
  Criterion c(9, "channels stay physical; flip code corrects; repetition "
                 "formula matches sampling",
              30);
  Rng rng(109);
  const ChannelKind kinds[] = {ChannelKind::BitFlip, ChannelKind::PhaseFlip,
                               ChannelKind::AmplitudeDamping,
                               ChannelKind::Depolarizing};
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = random_qubit_density(rng, i % 2 == 1);
    const ChannelKind kind = kinds[i % 4];
    const double param = rng.next_double();
    const DensityMatrix out = channel_apply(rho, kind, param);
    c.require(out.is_valid(),
              cell_str("channel %d param %.3f broke validity", i % 4, param));
  }

  for (int rep = 0; rep < 10; ++rep) {
    QuditState logical(2, 1);
    logical.amps[0] = cdouble(rng.normal(), rng.normal());
    logical.amps[1] = cdouble(rng.normal(), rng.normal());
    logical.normalize();
    const CodeCycleResult clean = bitflip_code_cycle(logical, {});
    c.require(clean.syndrome == 0 && clean.fidelity >= 1.0 - 1e-9,
              "clean cycle disturbed the state");
    for (int pos = 0; pos < 3; ++pos) {
      const CodeCycleResult hit = bitflip_code_cycle(logical, {pos});
      c.require(hit.syndrome == pos + 1,
                cell_str("flip at %d gave syndrome %d", pos, hit.syndrome));
      c.require(hit.fidelity >= 1.0 - 1e-9,
                cell_str("flip at %d not corrected", pos));
    }
  }

  for (double p : {0.05, 0.1, 0.3}) {
    const uint64_t shots = 100000;
    const double expect = repetition_success_prob(p);
    const double mc = repetition_monte_carlo(p, shots, rng);
    const double sigma = std::sqrt(expect * (1.0 - expect) /
                                   static_cast<double>(shots));
    c.require(std::abs(mc - expect) <= 3.0 * sigma,
              cell_str("p=%.2f mc=%.5f formula=%.5f", p, mc, expect));
  }
  c.note("1000 random states, 10 code cycles, 3 noise levels");
  c.finish();
}

// --------------------------------------------------------------------------
// 10. Number theory: the totient-ratio lower bound holds for every modulus
//     up to 10^6, and three totient computations agree up to 10^4.
// --------------------------------------------------------------------------
void criterion_10() {
  Criterion c(10, "totient ratio beats its closed-form floor to 1e6; "
                  "totient implementations agree to 1e4",
              60);
  const std::vector<uint32_t> sieve = totient_sieve(1000000);
  double min_slack = 1e300;
  for (uint64_t q = 3; q <= 1000000; ++q) {
    const double ratio =
        static_cast<double>(sieve[q]) / static_cast<double>(q);
    const double floor_val = totient_ratio_lower_bound(q);
    min_slack = std::min(min_slack, ratio - floor_val);
    if (ratio <= floor_val) {
      c.require(false, cell_str("q=%llu ratio %.6f <= floor %.6f",
                                (unsigned long long)q, ratio, floor_val));
      break;
    }
  }

  for (uint64_t q = 1; q <= 10000; ++q) {
    uint64_t count = 0;
    for (uint64_t k = 1; k <= q; ++k) count += gcd_u64(k, q) == 1 ? 1 : 0;
    c.require(count == totient(q) && count == sieve[q],
              cell_str("q=%llu totients disagree", (unsigned long long)q));
  }
  c.note(cell_str("min slack over the floor %.4f", min_slack));
  c.finish();
}

// --------------------------------------------------------------------------
// 11. Scheme correctness: exact round-trips for both keyed-function schemes
//     and zero decryption failures for the inner-product scheme while the
//     noise stays inside the decoding band.
// --------------------------------------------------------------------------
void criterion_11() {
  Criterion c(11, "schemes round-trip exactly; in-band noise never misdecodes",
              30);
  Rng rng(111);

  const Scheme masked = prf_scheme(32);
  for (int i = 0; i < 1000; ++i) {
    const Key k = masked.keygen(rng);
    const uint64_t m = rng.uniform_int(1ull << 32);
    c.require(masked.dec(k, masked.enc(k, m, rng)) == m,
              "masked scheme round-trip failed");
  }

  const Scheme periodized = periodized_prf_scheme(8);
  for (int i = 0; i < 1000; ++i) {
    const Key k = periodized.keygen(rng);
    const uint64_t m = rng.uniform_int(1ull << 19);
    c.require(periodized.dec(k, periodized.enc(k, m, rng)) == m,
              "periodized scheme round-trip failed");
  }

  // Noise bound at the decoding radius floor(q/4): still zero failures.
  const int64_t q = 23;
  const Scheme lwe = lwe_skes(8, q, ErrorDistribution::bounded_uniform(5, q));
  int failures = 0;
  const Key k = lwe.keygen(rng);
  for (int i = 0; i < 10000; ++i) {
    const uint64_t b = rng.uniform_int(2);
    if (lwe.dec(k, lwe.enc(k, b, rng)) != b) ++failures;
  }
  c.require(failures == 0, cell_str("%d in-band decryption failures",
                                    failures));
  c.note("10^3 round-trips per keyed scheme, 10^4 noisy decryptions");
  c.finish();
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  std::printf("----------------\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  std::printf("----------------\n");
  if (g_failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", g_failures);
  return 1;
}
