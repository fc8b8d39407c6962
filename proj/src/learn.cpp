#include "qlab/learn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace qlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

SecretSpec SecretSpec::random(uint32_t n, uint32_t q, Rng& rng) {
  SecretSpec spec;
  spec.n = n;
  spec.q = q;
  spec.s.resize(n);
  for (auto& d : spec.s) d = static_cast<int64_t>(rng.uniform_int(q));
  return spec;
}

bool SecretSpec::is_zero() const {
  return std::all_of(s.begin(), s.end(), [](int64_t d) { return d == 0; });
}

// ---------------------------------------------------------------------------
// Deutsch-Jozsa
// ---------------------------------------------------------------------------

DjResult deutsch_jozsa(const OracleSpec& f, Rng& rng) {
  if (f.q != 2 || f.out_digits != 1)
    throw std::invalid_argument("constant-vs-balanced decision needs a Boolean oracle");
  const uint32_t n = f.n;

  // |0^n>|1>, Hadamard everywhere, one oracle query, Hadamard on the inputs.
  QuditState state = QuditState::basis_index(2, n + 1, 1ULL << n);
  apply_qft_all(state);  // q = 2: Hadamard transform
  state = membership_apply(state, f);
  std::vector<uint32_t> inputs(n);
  std::iota(inputs.begin(), inputs.end(), 0);
  apply_qft(state, inputs);

  // Exact probability that the first n qubits read all zeros.
  const uint64_t in_dim = 1ULL << n;
  double p0 = std::norm(state.amps[0]) + std::norm(state.amps[in_dim]);

  DjResult result;
  result.p_all_zero = p0;
  const auto measured = measure_all(state, rng);
  const bool all_zero = std::all_of(measured.outcome.begin(),
                                    measured.outcome.end() - 1,
                                    [](uint32_t b) { return b == 0; });
  result.verdict = all_zero ? DjVerdict::Constant : DjVerdict::Balanced;
  if (std::abs(p0) > kStateTol && std::abs(p0 - 1.0) > kStateTol)
    result.verdict = DjVerdict::PromiseViolated;
  return result;
}

// ---------------------------------------------------------------------------
// Bernstein-Vazirani
// ---------------------------------------------------------------------------

LearnResult bernstein_vazirani(const SecretSpec& secret, Rng& rng) {
  if (secret.q != 2) throw std::invalid_argument("parity recovery requires q = 2");
  const uint32_t n = secret.n;
  const OracleSpec oracle = OracleSpec::inner_product(n, 2, secret.s);

  QuditState state = QuditState::basis_index(2, n + 1, 1ULL << n);
  apply_qft_all(state);
  state = membership_apply(state, oracle);
  std::vector<uint32_t> inputs(n);
  std::iota(inputs.begin(), inputs.end(), 0);
  apply_qft(state, inputs);

  // Exact distribution of the first n qubits: point mass at s.
  const uint64_t in_dim = 1ULL << n;
  const uint64_t s_index = pack_digits(
      std::vector<uint32_t>(secret.s.begin(), secret.s.end()), 2);
  const double p_s =
      std::norm(state.amps[s_index]) + std::norm(state.amps[s_index + in_dim]);

  LearnResult result;
  result.queries_used = 1;
  result.exact_success_prob = p_s;
  const auto measured = measure_all(state, rng);
  std::vector<int64_t> hypothesis(n);
  for (uint32_t j = 0; j < n; ++j) hypothesis[j] = measured.outcome[j];
  result.hypothesis = hypothesis;
  result.success = std::equal(hypothesis.begin(), hypothesis.end(),
                              secret.s.begin());
  return result;
}

// ---------------------------------------------------------------------------
// Parity learning from example states
// ---------------------------------------------------------------------------

namespace {

/// Read-out rule shared by the sampled and the exact path. The outcome is the
/// full (n+1)-bit measurement result.
std::optional<std::vector<int64_t>> parity_read_out(
    const std::vector<uint32_t>& outcome, uint32_t n, bool noisy_rule) {
  std::vector<int64_t> first(n);
  bool nonzero = false;
  for (uint32_t j = 0; j < n; ++j) {
    first[j] = outcome[j];
    nonzero = nonzero || outcome[j] != 0;
  }
  if (noisy_rule) {
    // Noisy variant: read out any nonzero string.
    if (!nonzero) return std::nullopt;
    return first;
  }
  // Noiseless variant: read out s iff the last register measured 1.
  if (outcome[n] != 1) return std::nullopt;
  return first;
}

/// Success probability of one noise branch (shared flip e), computed from the
/// exact post-Hadamard distribution.
double parity_branch_success(const SecretSpec& secret, bool flipped,
                             bool noisy_rule) {
  OracleSpec oracle = OracleSpec::inner_product(secret.n, 2, secret.s);
  QuditState state(2, secret.n + 1);
  const uint64_t in_dim = 1ULL << secret.n;
  state.amps.assign(in_dim * 2, cdouble(0));
  const double amp = 1.0 / std::sqrt(static_cast<double>(in_dim));
  for (uint64_t x = 0; x < in_dim; ++x) {
    const uint64_t fx = (oracle.f(x) + (flipped ? 1 : 0)) & 1;
    state.amps[x + in_dim * fx] = amp;
  }
  apply_qft_all(state);

  double success = 0.0;
  for (uint64_t idx = 0; idx < state.dim(); ++idx) {
    const double p = std::norm(state.amps[idx]);
    if (p < 1e-15) continue;
    const auto outcome = unpack_digits(idx, 2, secret.n + 1);
    const auto hyp = parity_read_out(outcome, secret.n, noisy_rule);
    if (hyp && std::equal(hyp->begin(), hyp->end(), secret.s.begin()))
      success += p;
  }
  return success;
}

}  // namespace

LearnResult quantum_parity_learn(const SecretSpec& secret, double eta, Rng& rng) {
  if (secret.q != 2) throw std::invalid_argument("parity learning requires q = 2");
  if (eta < 0.0 || eta >= 0.5)
    throw std::domain_error("noise rate must lie in [0, 1/2)");
  const bool noisy_rule = eta > 0.0;

  OracleSpec oracle = OracleSpec::inner_product(secret.n, 2, secret.s);
  oracle.noise = noisy_rule ? OracleNoise::bernoulli_parity(eta)
                            : OracleNoise::none();

  // Sampled path: one example draw, Hadamard everywhere, measure, read out.
  ExampleDraw draw = example_state_draw(oracle, rng);
  apply_qft_all(draw.state);
  const auto measured = measure_all(draw.state, rng);

  LearnResult result;
  result.queries_used = 1;
  result.degenerate_secret = secret.is_zero();
  result.hypothesis = parity_read_out(measured.outcome, secret.n, noisy_rule);
  result.success = result.hypothesis &&
                   std::equal(result.hypothesis->begin(),
                              result.hypothesis->end(), secret.s.begin());

  // Exact path: success marginalized over the Bernoulli flip.
  const double p_clean = parity_branch_success(secret, false, noisy_rule);
  const double p_flip =
      noisy_rule ? parity_branch_success(secret, true, noisy_rule) : p_clean;
  result.exact_success_prob = (1.0 - eta) * p_clean + eta * p_flip;
  return result;
}

// ---------------------------------------------------------------------------
// Extended Bernstein-Vazirani (noiseless and LWE variants)
// ---------------------------------------------------------------------------

namespace {

/// Decode one measurement outcome (z_1..z_n, z_last): the hypothesis
/// s~_i = -z_i / z_last mod q when gcd(z_last, q) = 1, else abstain.
std::optional<std::vector<int64_t>> ebv_decode(const std::vector<uint32_t>& z,
                                               uint32_t n, uint32_t q) {
  const uint32_t z_last = z[n];
  if (gcd_u64(z_last, q) != 1) return std::nullopt;
  const int64_t inv = *mod_inverse(z_last, q);
  std::vector<int64_t> hyp(n);
  for (uint32_t j = 0; j < n; ++j)
    hyp[j] = mod_mul(mod_reduce(-static_cast<int64_t>(z[j]), q), inv, q);
  return hyp;
}

/// Exact success probability: walk the full post-transform distribution and
/// accumulate the mass of outcomes that decode to s exactly.
double ebv_exact_success(const QuditState& state, const SecretSpec& secret) {
  const uint32_t q = secret.q;
  const uint32_t n = secret.n;
  double success = 0.0;
  for (uint64_t idx = 0; idx < state.dim(); ++idx) {
    const double p = std::norm(state.amps[idx]);
    if (p < 1e-18) continue;
    // Unpack digits in place (little-endian).
    uint64_t t = idx;
    std::vector<uint32_t> z(n + 1);
    for (uint32_t j = 0; j <= n; ++j) {
      z[j] = static_cast<uint32_t>(t % q);
      t /= q;
    }
    const auto hyp = ebv_decode(z, n, q);
    if (hyp && std::equal(hyp->begin(), hyp->end(), secret.s.begin()))
      success += p;
  }
  return success;
}

LearnResult ebv_run(const SecretSpec& secret, QuditState state, Rng& rng) {
  apply_qft_all(state);

  LearnResult result;
  result.queries_used = 1;
  result.exact_success_prob = ebv_exact_success(state, secret);

  const auto measured = measure_all(state, rng);
  result.hypothesis = ebv_decode(measured.outcome, secret.n, secret.q);
  result.success = result.hypothesis &&
                   std::equal(result.hypothesis->begin(),
                              result.hypothesis->end(), secret.s.begin());
  return result;
}

}  // namespace

LearnResult extended_bv(const SecretSpec& secret, Rng& rng) {
  OracleSpec oracle = OracleSpec::inner_product(secret.n, secret.q, secret.s);
  QuditState state = example_state(oracle, rng);
  return ebv_run(secret, std::move(state), rng);
}

EbvLweResult extended_bv_lwe(const SecretSpec& secret,
                             const ErrorDistribution& chi, Rng& rng) {
  if (chi.eta < 1) throw std::domain_error("noise magnitude bound must be >= 1");
  OracleSpec oracle = OracleSpec::inner_product(secret.n, secret.q, secret.s);
  oracle.noise = OracleNoise::independent_additive(chi);

  ExampleDraw draw = example_state_draw(oracle, rng);

  EbvLweResult result;
  result.errors = draw.errors;
  result.base = ebv_run(secret, std::move(draw.state), rng);

  const uint32_t q = secret.q;
  result.success_bound =
      static_cast<double>(totient(q)) / (24.0 * static_cast<double>(chi.eta) * q);

  // Closed-form interference sum over the realized error vector:
  //   (1/q^(2n+1)) sum_{gcd(z,q)=1} |sum_x omega^(e_x z)|^2,
  // evaluated through the error-value histogram.
  std::vector<uint64_t> counts(q, 0);
  for (int64_t e : result.errors) ++counts[mod_reduce(e, q)];
  const double in_dim = std::pow(static_cast<double>(q), secret.n);
  double total = 0.0;
  for (uint32_t z = 1; z < q; ++z) {
    if (gcd_u64(z, q) != 1) continue;
    cdouble sum(0);
    for (uint32_t c = 0; c < q; ++c) {
      if (counts[c] == 0) continue;
      const double phase = 2.0 * kPi * static_cast<double>(c) * z / q;
      sum += static_cast<double>(counts[c]) *
             cdouble(std::cos(phase), std::sin(phase));
    }
    total += std::norm(sum);
  }
  result.formula_success = total / (in_dim * in_dim * q);
  return result;
}

// ---------------------------------------------------------------------------
// Amplification and classical baseline
// ---------------------------------------------------------------------------

uint64_t amplify_budget(double delta, double p_fail) {
  if (delta <= 0.0 || delta >= 1.0) throw std::domain_error("delta in (0,1)");
  if (p_fail <= 0.0 || p_fail >= 1.0) throw std::domain_error("p_fail in (0,1)");
  return static_cast<uint64_t>(
      std::ceil(std::log(delta) / std::log(p_fail) - 1e-12));
}

AmplifyResult amplify(
    const std::function<LearnResult(Rng&)>& trial,
    const std::function<bool(const std::vector<int64_t>&)>& verify,
    double delta, double p_fail, Rng& rng) {
  AmplifyResult out;
  out.trials_budgeted = amplify_budget(delta, p_fail);
  uint64_t queries = 0;
  for (uint64_t t = 0; t < out.trials_budgeted; ++t) {
    LearnResult r = trial(rng);
    ++out.trials_run;
    queries += r.queries_used;
    if (r.hypothesis && verify(*r.hypothesis)) {
      r.queries_used = queries;
      r.success = true;
      out.result = std::move(r);
      return out;
    }
  }
  out.result = LearnResult{};  // abstention with failure flag
  out.result.queries_used = queries;
  return out;
}

double independent_rows_prob(uint32_t n) {
  double p = 1.0;
  for (uint32_t j = 0; j < n; ++j)
    p *= 1.0 - std::pow(2.0, static_cast<double>(j) - n);
  return p;
}

}  // namespace qlab
