#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <boost/rational.hpp>

#include "qlab/channels.hpp"
#include "qlab/games.hpp"
#include "qlab/learn.hpp"
#include "qlab/modmath.hpp"
#include "qlab/oracles.hpp"
#include "qlab/qudit_state.hpp"
#include "qlab/report.hpp"
#include "qlab/rng.hpp"
#include "qlab/schemes.hpp"

namespace qlab::cli {

namespace {

// ---------------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------------

struct CommonOpts {
  uint64_t seed = 0;
  std::string out;
  std::string format;  // "", "csv", "json"
};

/// Inclusive integer sweep: "a..b", single values, and comma lists of either
/// ("1,4..6,9" -> 1 4 5 6 9).
std::vector<int64_t> parse_sweep(const std::string& text,
                                 const std::string& flag) {
  std::vector<int64_t> values;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    if (piece.empty())
      throw CLI::ValidationError(flag, "empty element in '" + text + "'");
    const auto dots = piece.find("..");
    try {
      if (dots == std::string::npos) {
        values.push_back(std::stoll(piece));
      } else {
        const int64_t lo = std::stoll(piece.substr(0, dots));
        const int64_t hi = std::stoll(piece.substr(dots + 2));
        if (hi < lo)
          throw CLI::ValidationError(flag, "descending range '" + piece + "'");
        for (int64_t v = lo; v <= hi; ++v) values.push_back(v);
      }
    } catch (const std::invalid_argument&) {
      throw CLI::ValidationError(flag, "cannot parse '" + piece + "'");
    } catch (const std::out_of_range&) {
      throw CLI::ValidationError(flag, "out of range: '" + piece + "'");
    }
  }
  if (values.empty())
    throw CLI::ValidationError(flag, "empty sweep '" + text + "'");
  return values;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, ',')) {
    try {
      values.push_back(std::stod(piece));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "cannot parse '" + piece + "'");
    }
  }
  if (values.empty())
    throw CLI::ValidationError(flag, "empty list '" + text + "'");
  return values;
}

std::string rational_str(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

/// Report builder that tracks failed cells. Every table ends with a "pass"
/// column; a failing row is remembered with a printable label.
class Table {
 public:
  Table(std::string experiment, std::vector<std::string> columns,
        const CommonOpts& common)
      : common_(common), start_(std::chrono::steady_clock::now()) {
    columns.push_back("pass");
    report_ = std::make_unique<ExperimentReport>(std::move(experiment),
                                                 std::move(columns));
    report_->set_meta("seed", common.seed);
  }

  void meta(const std::string& key, Cell value) {
    report_->set_meta(key, std::move(value));
  }

  void row(std::vector<Cell> cells, bool pass, const std::string& label) {
    cells.push_back(pass);
    report_->add_row(std::move(cells));
    if (!pass) failures_.push_back(label);
  }

  /// Print, optionally write, and convert to an exit code.
  int finish() {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start_);
    report_->set_meta("wall_time_ms",
                      static_cast<uint64_t>(elapsed.count()));
    std::cout << report_->to_csv();
    if (!common_.out.empty()) {
      std::string fmt = common_.format;
      if (fmt.empty()) {
        fmt = std::filesystem::path(common_.out).extension() == ".json"
                  ? "json"
                  : "csv";
      }
      const std::filesystem::path p(common_.out);
      if (p.has_parent_path())
        std::filesystem::create_directories(p.parent_path());
      std::ofstream file(p);
      if (!file) {
        std::cerr << "error: cannot write " << common_.out << "\n";
        return 2;
      }
      file << (fmt == "json" ? report_->to_json() : report_->to_csv());
    }
    if (failures_.empty()) {
      std::cout << "PASS (" << report_->rows() << " cells)\n";
      return 0;
    }
    std::cout << "FAIL (" << failures_.size() << "/" << report_->rows()
              << " cells):\n";
    for (const auto& f : failures_) std::cout << "  " << f << "\n";
    return 1;
  }

 private:
  const CommonOpts& common_;
  std::chrono::steady_clock::time_point start_;
  std::unique_ptr<ExperimentReport> report_;
  std::vector<std::string> failures_;
};

uint64_t cell_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  return mix64(seed ^ mix64((a << 32) ^ b));
}

std::vector<int64_t> bits_of(uint64_t x, uint32_t n) {
  std::vector<int64_t> bits(n);
  for (uint32_t j = 0; j < n; ++j) bits[j] = (x >> j) & 1;
  return bits;
}

SecretSpec random_nonzero_secret(uint32_t n, uint32_t q, Rng& rng) {
  SecretSpec s = SecretSpec::random(n, q, rng);
  while (s.is_zero()) s = SecretSpec::random(n, q, rng);
  return s;
}

QuditState random_logical_qubit(Rng& rng) {
  QuditState psi(2, 1);
  psi.amps[0] = cdouble(rng.normal(), rng.normal());
  psi.amps[1] = cdouble(rng.normal(), rng.normal());
  psi.normalize();
  return psi;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct DjOpts {
  std::string n_sweep = "1..4";
};

int cmd_dj(const DjOpts& o, const CommonOpts& common) {
  Table table("dj", {"n", "kind", "p_all_zero", "verdict"}, common);
  const auto ns = parse_sweep(o.n_sweep, "--n");
  for (int64_t n : ns) {
    if (n < 1 || n > 20) throw CLI::ValidationError("--n", "need 1 <= n <= 20");
    const auto un = static_cast<uint32_t>(n);
    struct Case {
      std::string kind;
      OracleSpec spec;
      DjVerdict expect;
      double expect_p0;
    };
    std::vector<Case> cases;
    cases.push_back({"constant-0", OracleSpec::constant(un, 2, 0),
                     DjVerdict::Constant, 1.0});
    cases.push_back({"constant-1", OracleSpec::constant(un, 2, 1),
                     DjVerdict::Constant, 1.0});

    Rng rng = Rng::substream(common.seed, cell_seed(0, static_cast<uint64_t>(n)));
    const uint64_t dim = 1ull << un;
    std::vector<uint64_t> tablef(dim, 0);
    for (uint64_t i = dim / 2; i < dim; ++i) tablef[i] = 1;
    for (uint64_t i = dim - 1; i > 0; --i)
      std::swap(tablef[i], tablef[rng.uniform_int(i + 1)]);
    cases.push_back({"balanced", OracleSpec::from_table(un, 2, tablef),
                     DjVerdict::Balanced, 0.0});

    for (auto& c : cases) {
      Rng run_rng = Rng::substream(common.seed, cell_seed(1, n, 0));
      const DjResult r = deutsch_jozsa(c.spec, run_rng);
      const bool pass = r.verdict == c.expect &&
                        std::abs(r.p_all_zero - c.expect_p0) <= 1e-12;
      const char* verdict = r.verdict == DjVerdict::Constant ? "constant"
                            : r.verdict == DjVerdict::Balanced
                                ? "balanced"
                                : "promise-violated";
      table.row({n, c.kind, r.p_all_zero, std::string(verdict)}, pass,
                "dj n=" + std::to_string(n) + " " + c.kind);
    }
  }
  return table.finish();
}

struct BvOpts {
  std::string n_sweep = "1..6";
  uint64_t secrets = 10;      // 0 = exhaustive over all 2^n secrets
  bool exhaustive = false;
};

int cmd_bv(const BvOpts& o, const CommonOpts& common) {
  Table table("bv", {"n", "s", "p_s", "recovered"}, common);
  for (int64_t n : parse_sweep(o.n_sweep, "--n")) {
    if (n < 1 || n > 20) throw CLI::ValidationError("--n", "need 1 <= n <= 20");
    const auto un = static_cast<uint32_t>(n);
    const uint64_t dim = 1ull << un;
    std::vector<uint64_t> secrets;
    if (o.exhaustive || o.secrets == 0) {
      for (uint64_t s = 0; s < dim; ++s) secrets.push_back(s);
    } else {
      Rng rng = Rng::substream(common.seed, cell_seed(2, n));
      for (uint64_t i = 0; i < o.secrets; ++i)
        secrets.push_back(rng.uniform_int(dim));
    }
    for (uint64_t s : secrets) {
      Rng rng = Rng::substream(common.seed, cell_seed(3, n, s));
      const SecretSpec spec{un, 2, bits_of(s, un)};
      const LearnResult r = bernstein_vazirani(spec, rng);
      const double p_s = r.exact_success_prob.value_or(0.0);
      const bool recovered = r.success && r.hypothesis.has_value();
      const bool pass = recovered && std::abs(p_s - 1.0) <= 1e-12;
      table.row({n, s, p_s, recovered}, pass,
                "bv n=" + std::to_string(n) + " s=" + std::to_string(s));
    }
  }
  return table.finish();
}

struct LpnOpts {
  std::string n_sweep = "1..6";
  std::string etas = "0,0.1,0.25,0.49";
  uint64_t secrets = 5;
};

int cmd_lpn(const LpnOpts& o, const CommonOpts& common) {
  Table table("lpn", {"n", "eta", "s", "exact_success"}, common);
  const auto etas = parse_double_list(o.etas, "--eta");
  for (double eta : etas)
    if (eta < 0.0 || eta >= 0.5)
      throw CLI::ValidationError("--eta", "need 0 <= eta < 1/2");
  for (int64_t n : parse_sweep(o.n_sweep, "--n")) {
    if (n < 1 || n > 20) throw CLI::ValidationError("--n", "need 1 <= n <= 20");
    const auto un = static_cast<uint32_t>(n);
    for (uint64_t i = 0; i < o.secrets; ++i) {
      Rng srng = Rng::substream(common.seed, cell_seed(4, n, i));
      const SecretSpec secret = random_nonzero_secret(un, 2, srng);
      uint64_t packed = 0;
      for (uint32_t j = 0; j < un; ++j)
        packed |= static_cast<uint64_t>(secret.s[j]) << j;
      for (size_t e = 0; e < etas.size(); ++e) {
        Rng rng = Rng::substream(common.seed, cell_seed(5, n, i * 64 + e));
        const LearnResult r = quantum_parity_learn(secret, etas[e], rng);
        const double exact = r.exact_success_prob.value_or(-1.0);
        const bool pass = std::abs(exact - 0.5) <= 1e-9;
        table.row({n, etas[e], packed, exact}, pass,
                  "lpn n=" + std::to_string(n) +
                      " eta=" + std::to_string(etas[e]) +
                      " s=" + std::to_string(packed));
      }
    }
  }
  return table.finish();
}

struct EbvOpts {
  std::string q_sweep = "2..16";
  std::string n_sweep = "1..3";
  uint64_t secrets = 5;
  bool exact = true;
};

int cmd_ebv(const EbvOpts& o, const CommonOpts& common) {
  Table table("ebv", {"q", "n", "secret", "exact_success", "phi_over_q", "dev"},
              common);
  for (int64_t q : parse_sweep(o.q_sweep, "--q")) {
    if (q < 2 || q > 64) throw CLI::ValidationError("--q", "need 2 <= q <= 64");
    const double phi_over_q =
        static_cast<double>(totient(static_cast<uint64_t>(q))) /
        static_cast<double>(q);
    for (int64_t n : parse_sweep(o.n_sweep, "--n")) {
      if (n < 1) throw CLI::ValidationError("--n", "need n >= 1");
      for (uint64_t i = 0; i < o.secrets; ++i) {
        Rng rng = Rng::substream(common.seed, cell_seed(6, q * 64 + n, i));
        const SecretSpec secret = SecretSpec::random(
            static_cast<uint32_t>(n), static_cast<uint32_t>(q), rng);
        const LearnResult r = extended_bv(secret, rng);
        const double exact = r.exact_success_prob.value_or(-1.0);
        const double dev = std::abs(exact - phi_over_q);
        table.row({q, n, static_cast<int64_t>(i), exact, phi_over_q, dev},
                  dev <= 1e-9,
                  "ebv q=" + std::to_string(q) + " n=" + std::to_string(n) +
                      " secret#" + std::to_string(i));
      }
    }
  }
  return table.finish();
}

struct EbvLweOpts {
  std::string q_sweep = "5,7,11,13";
  std::string n_sweep = "1..2";
  std::string etas = "1";
  std::string dist = "uniform";
  uint64_t secrets = 3;
};

int cmd_ebv_lwe(const EbvLweOpts& o, const CommonOpts& common) {
  Table table("ebv-lwe",
              {"q", "n", "eta", "secret", "exact_success", "formula_success",
               "bound"},
              common);
  if (o.dist != "uniform" && o.dist != "gaussian")
    throw CLI::ValidationError("--dist", "must be uniform or gaussian");
  for (int64_t q : parse_sweep(o.q_sweep, "--q")) {
    if (q < 2) throw CLI::ValidationError("--q", "need q >= 2");
    for (int64_t n : parse_sweep(o.n_sweep, "--n")) {
      for (int64_t eta : parse_sweep(o.etas, "--eta")) {
        if (eta < 1)
          throw CLI::ValidationError("--eta", "need eta >= 1 for the noisy run");
        const ErrorDistribution chi =
            o.dist == "uniform"
                ? ErrorDistribution::bounded_uniform(eta, q)
                : ErrorDistribution::rounded_gaussian(eta, q);
        for (uint64_t i = 0; i < o.secrets; ++i) {
          Rng rng = Rng::substream(
              common.seed, cell_seed(7, (q * 64 + n) * 64 + eta, i));
          const SecretSpec secret = SecretSpec::random(
              static_cast<uint32_t>(n), static_cast<uint32_t>(q), rng);
          const EbvLweResult r = extended_bv_lwe(secret, chi, rng);
          const double exact = r.base.exact_success_prob.value_or(-1.0);
          const bool pass = exact + 1e-12 >= r.success_bound &&
                            std::abs(exact - r.formula_success) <= 1e-9;
          table.row({q, n, eta, static_cast<int64_t>(i), exact,
                     r.formula_success, r.success_bound},
                    pass,
                    "ebv-lwe q=" + std::to_string(q) +
                        " n=" + std::to_string(n) +
                        " eta=" + std::to_string(eta) + " secret#" +
                        std::to_string(i));
        }
      }
    }
  }
  return table.finish();
}

struct KeyrecOpts {
  uint32_t n = 8;
  int64_t q = 23;
  int64_t eta = 1;
  double delta = 0.01;
  double eps = 0.1;
  uint64_t trials = 100;
  std::string estimator = "band";
  double min_rate = 0.99;
};

int cmd_keyrec(const KeyrecOpts& o, const CommonOpts& common) {
  Table table("keyrec",
              {"n", "q", "eta", "M", "estimator", "trials", "recovered",
               "rate"},
              common);
  if (o.estimator != "band" && o.estimator != "mean")
    throw CLI::ValidationError("--estimator", "must be band or mean");
  const KeyEstimator est = o.estimator == "band" ? KeyEstimator::BandVote
                                                 : KeyEstimator::PlainMean;
  const uint64_t M = hoeffding_budget(o.delta, 1.0, o.eps);
  const ErrorDistribution chi = ErrorDistribution::bounded_uniform(o.eta, o.q);
  const Scheme scheme = lwe_skes(o.n, o.q, chi);
  uint64_t recovered = 0;
  for (uint64_t t = 0; t < o.trials; ++t) {
    Rng rng = Rng::substream(common.seed, cell_seed(8, t));
    const Key key = scheme.keygen(rng);
    auto oracle = [&](const Cipher& c) { return scheme.dec(key, c); };
    const Key guess = key_recovery_attack(oracle, o.n, o.q, M, rng, est);
    if (guess == key) ++recovered;
  }
  const double rate = o.trials == 0
                          ? 0.0
                          : static_cast<double>(recovered) /
                                static_cast<double>(o.trials);
  table.row({static_cast<uint64_t>(o.n), o.q, o.eta, M, o.estimator, o.trials,
             recovered, rate},
            rate >= o.min_rate, "keyrec rate=" + std::to_string(rate));
  return table.finish();
}

struct IndGameOpts {
  std::string scheme = "lwe";
  std::string mode = "both";
  std::string adversary = "keyrec";
  uint64_t trials = 1000;
  uint32_t n = 8;
  int64_t q = 23;
  int64_t eta = 1;
  double delta = 0.01;
  double eps = 0.1;
  double min_rate = 0.95;
  double cpa_low = 0.47;
  double cpa_high = 0.53;
  std::string transcripts;
};

int cmd_ind_game(const IndGameOpts& o, const CommonOpts& common) {
  Table table("ind-game",
              {"scheme", "mode", "adversary", "trials", "wins", "rate",
               "wilson_low", "wilson_high", "aborted"},
              common);
  Scheme scheme;
  if (o.scheme == "lwe") {
    scheme = lwe_skes(o.n, o.q, ErrorDistribution::bounded_uniform(o.eta, o.q));
  } else if (o.scheme == "prf") {
    scheme = prf_scheme(o.n);
  } else if (o.scheme == "prf-periodized") {
    scheme = periodized_prf_scheme(o.n);
  } else {
    throw CLI::ValidationError("--scheme",
                               "must be lwe, prf, or prf-periodized");
  }
  Adversary adv;
  if (o.adversary == "keyrec") {
    if (o.scheme != "lwe")
      throw CLI::ValidationError("--adversary",
                                 "keyrec targets the lwe scheme only");
    adv = key_recovery_adversary(o.n, o.q, hoeffding_budget(o.delta, 1.0, o.eps));
  } else if (o.adversary == "guess") {
    adv.name = "guess";
    adv.choose_challenge = [](GameIO&) {
      return std::pair<uint64_t, uint64_t>(0, 1);
    };
    adv.guess = [](GameIO& io, const Cipher&) -> int {
      return io.rng().bernoulli(0.5) ? 1 : 0;
    };
  } else {
    throw CLI::ValidationError("--adversary", "must be keyrec or guess");
  }

  std::vector<GameMode> modes;
  if (o.mode == "cpa") modes = {GameMode::CPA};
  else if (o.mode == "cca1") modes = {GameMode::CCA1};
  else if (o.mode == "both") modes = {GameMode::CCA1, GameMode::CPA};
  else throw CLI::ValidationError("--mode", "must be cpa, cca1, or both");

  std::string jsonl;
  for (GameMode mode : modes) {
    const bool keep = !o.transcripts.empty();
    const WinRateReport r = run_ind_game(
        scheme, adv, mode, o.trials,
        cell_seed(common.seed, mode == GameMode::CPA ? 101 : 102), keep);
    if (keep) jsonl += transcripts_to_jsonl(r);
    const std::string mode_name = mode == GameMode::CPA ? "cpa" : "cca1";
    bool pass;
    if (o.adversary == "guess")
      pass = r.wilson_low <= 0.5 && 0.5 <= r.wilson_high;
    else if (mode == GameMode::CCA1)
      pass = r.rate >= o.min_rate;
    else
      pass = r.rate >= o.cpa_low && r.rate <= o.cpa_high;
    table.row({scheme.name, mode_name, adv.name, r.trials, r.wins, r.rate,
               r.wilson_low, r.wilson_high, r.aborted},
              pass, "ind-game " + mode_name + " rate=" + std::to_string(r.rate));
  }
  if (!o.transcripts.empty()) {
    const std::filesystem::path p(o.transcripts);
    if (p.has_parent_path())
      std::filesystem::create_directories(p.parent_path());
    std::ofstream file(p);
    if (!file) {
      std::cerr << "error: cannot write " << o.transcripts << "\n";
      return 2;
    }
    file << jsonl;
  }
  return table.finish();
}

struct RelabelClassicalOpts {
  std::string n_sweep = "2..12";
  uint32_t m = 4;
  std::string t_list = "1,4,16,64";
  uint64_t trials = 0;
};

int cmd_relabel_classical(const RelabelClassicalOpts& o,
                          const CommonOpts& common) {
  Table table("relabel-classical",
              {"n", "m", "T", "exact_win", "exact_advantage", "bound",
               "win_approx", "sampled_rate"},
              common);
  for (int64_t n : parse_sweep(o.n_sweep, "--n")) {
    for (int64_t T : parse_sweep(o.t_list, "--T")) {
      if (T < 0) throw CLI::ValidationError("--T", "need T >= 0");
      const ClassicalRelabelReport r = classical_relabeling(
          static_cast<uint32_t>(n), o.m, static_cast<uint64_t>(T), o.trials,
          cell_seed(common.seed, n, T));
      const bool pass = r.exact_advantage <= r.bound;
      table.row({n, static_cast<uint64_t>(o.m), T, rational_str(r.exact_win),
                 rational_str(r.exact_advantage), rational_str(r.bound),
                 boost::rational_cast<double>(r.exact_win), r.sampled_rate},
                pass,
                "relabel-classical n=" + std::to_string(n) +
                    " T=" + std::to_string(T));
    }
  }
  return table.finish();
}

struct RelabelQuantumOpts {
  uint32_t n = 8;
  uint32_t m = 4;
  std::string mu_list = "4,6,8";
  std::string t_list = "1,2,4";
  uint64_t draws = 100;
};

int cmd_relabel_quantum(const RelabelQuantumOpts& o, const CommonOpts& common) {
  Table table("relabel-quantum",
              {"n", "m", "mu", "T", "draws", "mean_delta", "max_delta",
               "bound", "flagged"},
              common);
  for (int64_t mu : parse_sweep(o.mu_list, "--mu")) {
    if (mu < 0 || static_cast<uint32_t>(mu) > o.n)
      throw CLI::ValidationError("--mu", "need 0 <= mu <= n");
    for (int64_t T : parse_sweep(o.t_list, "--T")) {
      if (T < 1) throw CLI::ValidationError("--T", "need T >= 1");
      RelabelConfig cfg;
      cfg.n = o.n;
      cfg.m = o.m;
      cfg.mu = static_cast<uint32_t>(mu);
      cfg.T = static_cast<uint32_t>(T);
      const QuantumRelabelReport r = quantum_relabeling_tracedist(
          cfg, o.draws, cell_seed(common.seed, mu, T));
      const bool pass = r.mean_delta <= r.bound;
      table.row({static_cast<uint64_t>(o.n), static_cast<uint64_t>(o.m), mu, T,
                 r.draws, r.mean_delta, r.max_delta, r.bound, r.flagged},
                pass,
                "relabel-quantum mu=" + std::to_string(mu) +
                    " T=" + std::to_string(T));
    }
  }
  return table.finish();
}

struct QftCheckOpts {
  std::string q_sweep = "2..16";
};

int cmd_qft_check(const QftCheckOpts& o, const CommonOpts& common) {
  Table table("qft-check",
              {"q", "unitarity_dev", "orthogonality_dev", "shift_dev"},
              common);
  for (int64_t q : parse_sweep(o.q_sweep, "--q")) {
    if (q < 2 || q > 4096)
      throw CLI::ValidationError("--q", "need 2 <= q <= 4096");
    const auto uq = static_cast<uint32_t>(q);
    const double unit = unitarity_defect(qft_matrix(uq));
    const AlgebraReport orth = check_root_orthogonality(uq);
    const AlgebraReport shift = check_shift_diagonality(uq);
    const bool pass = unit <= kMatrixTol &&
                      orth.max_deviation <= kMatrixTol &&
                      shift.max_deviation <= kMatrixTol;
    table.row({q, unit, orth.max_deviation, shift.max_deviation}, pass,
              "qft-check q=" + std::to_string(q));
  }
  return table.finish();
}

struct ChannelsOpts {
  uint64_t samples = 1000;
  double eta = 0.1;
  double gamma = 0.3;
  bool mixed = false;
};

int cmd_channels(const ChannelsOpts& o, const CommonOpts& common) {
  Table table("channels",
              {"channel", "param", "samples", "max_trace_dev",
               "min_eigenvalue", "all_valid"},
              common);
  const std::vector<std::pair<std::string, std::pair<ChannelKind, double>>>
      kinds = {
          {"bit-flip", {ChannelKind::BitFlip, o.eta}},
          {"phase-flip", {ChannelKind::PhaseFlip, o.eta}},
          {"amplitude-damping", {ChannelKind::AmplitudeDamping, o.gamma}},
          {"depolarizing", {ChannelKind::Depolarizing, o.eta}},
      };
  for (size_t k = 0; k < kinds.size(); ++k) {
    const auto& [name, kp] = kinds[k];
    Rng rng = Rng::substream(common.seed, cell_seed(9, k));
    bool all_valid = true;
    double max_trace_dev = 0.0;
    double min_eig = 1.0;
    for (uint64_t i = 0; i < o.samples; ++i) {
      const DensityMatrix rho = random_qubit_density(rng, o.mixed);
      const DensityMatrix out = channel_apply(rho, kp.first, kp.second);
      all_valid = all_valid && out.is_valid();
      max_trace_dev = std::max(max_trace_dev, std::abs(out.trace_real() - 1.0));
      min_eig = std::min(min_eig, out.min_eigenvalue());
    }
    table.row({name, kp.second, o.samples, max_trace_dev, min_eig, all_valid},
              all_valid, "channels " + name);
  }
  return table.finish();
}

struct Code3Opts {
  std::string p_list = "0.05,0.1,0.3";
  uint64_t shots = 10000;
  uint64_t states = 5;
};

int cmd_code3(const Code3Opts& o, const CommonOpts& common) {
  Table table("code3",
              {"check", "param", "observed", "expected", "tolerance"}, common);
  // Quantum: every single-position error must decode back exactly.
  const std::vector<std::pair<std::string, std::vector<int>>> cases = {
      {"none", {}}, {"pos-0", {0}}, {"pos-1", {1}}, {"pos-2", {2}}};
  for (const auto& [label, positions] : cases) {
    double worst = 1.0;
    Rng rng = Rng::substream(common.seed, cell_seed(10, positions.size()));
    for (uint64_t i = 0; i < o.states; ++i) {
      const QuditState logical = random_logical_qubit(rng);
      const CodeCycleResult r = bitflip_code_cycle(logical, positions);
      worst = std::min(worst, r.fidelity);
    }
    table.row({std::string("code3-recover"), label, worst, 1.0, 1e-9},
              worst >= 1.0 - 1e-9, "code3 " + label);
  }
  // Classical majority vote against its closed form.
  for (double p : parse_double_list(o.p_list, "--p")) {
    if (p < 0.0 || p > 1.0)
      throw CLI::ValidationError("--p", "need 0 <= p <= 1");
    Rng rng = Rng::substream(common.seed,
                             cell_seed(11, static_cast<uint64_t>(p * 1e9)));
    const double formula = repetition_success_prob(p);
    const double mc = repetition_monte_carlo(p, o.shots, rng);
    const double sigma3 =
        3.0 * std::sqrt(formula * (1.0 - formula) /
                        static_cast<double>(o.shots));
    table.row({std::string("repetition"), "p=" + std::to_string(p), mc,
               formula, sigma3},
              std::abs(mc - formula) <= sigma3,
              "repetition p=" + std::to_string(p));
  }
  return table.finish();
}

struct NumbersOpts {
  uint64_t rs_max = 1000000;
  uint64_t tot_max = 10000;
  uint32_t prime_bits = 16;
  uint64_t prime_draws = 1000;
};

int cmd_numbers(const NumbersOpts& o, const CommonOpts& common) {
  Table table("numbers", {"check", "range", "violations"}, common);
  if (o.rs_max < 3 || o.rs_max > 100000000)
    throw CLI::ValidationError("--rs-max", "need 3 <= rs-max <= 1e8");
  if (o.tot_max < 2 || o.tot_max > o.rs_max)
    throw CLI::ValidationError("--tot-max", "need 2 <= tot-max <= rs-max");

  const std::vector<uint32_t> phi =
      totient_sieve(static_cast<uint32_t>(o.rs_max));

  // Totient ratio lower bound over the full range.
  uint64_t rs_violations = 0;
  for (uint64_t q = 3; q <= o.rs_max; ++q) {
    const double ratio = static_cast<double>(phi[q]) / static_cast<double>(q);
    if (!(ratio > totient_ratio_lower_bound(q))) ++rs_violations;
  }
  table.row({std::string("totient-ratio-lower-bound"),
             "q in [3," + std::to_string(o.rs_max) + "]", rs_violations},
            rs_violations == 0, "totient-ratio-lower-bound");

  // Sieve vs. factorization vs. exact product form.
  uint64_t tot_violations = 0;
  for (uint64_t q = 2; q <= o.tot_max; ++q) {
    const uint64_t direct = totient(q);
    if (direct != phi[q]) ++tot_violations;
    if (euler_product(q) != Rational(static_cast<long long>(direct),
                                     static_cast<long long>(q)))
      ++tot_violations;
  }
  table.row({std::string("totient-cross-check"),
             "q in [2," + std::to_string(o.tot_max) + "]", tot_violations},
            tot_violations == 0, "totient-cross-check");

  // Prime sampler: in-range and prime on every draw.
  uint64_t prime_violations = 0;
  Rng rng = Rng::substream(common.seed, cell_seed(12, o.prime_bits));
  const uint64_t lo = (1ull << o.prime_bits) / 2;
  const uint64_t hi = 1ull << o.prime_bits;
  for (uint64_t i = 0; i < o.prime_draws; ++i) {
    const uint64_t p = sample_prime(o.prime_bits, rng);
    if (p < lo || p >= hi || !is_prime(p)) ++prime_violations;
  }
  table.row({std::string("sample-prime"),
             "n=" + std::to_string(o.prime_bits) + ", " +
                 std::to_string(o.prime_draws) + " draws",
             prime_violations},
            prime_violations == 0, "sample-prime");
  return table.finish();
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

int run_main(int argc, const char* const* argv) {
  CLI::App app{
      "qlab: seeded experiment runner for qudit-register learners,\n"
      "noise channels, and symmetric-scheme attack games.\n"
      "Exit codes: 0 = all bounds pass, 1 = bound violation, 2 = usage error."};
  app.require_subcommand(1);

  CommonOpts common;
  const char* env_seed = std::getenv("QLAB_SEED");
  if (env_seed != nullptr) {
    try {
      common.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      std::cerr << "error: QLAB_SEED is not an integer\n";
      return 2;
    }
  }
  app.add_option("--seed", common.seed,
                 "Global seed (env QLAB_SEED supplies the default)")
      ->capture_default_str();
  app.add_option("--out", common.out, "Report file (.csv or .json)");
  app.add_option("--format", common.format,
                 "Force report format (default: by --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  app.set_config("--config", "",
                 "key=value config file ([subcommand] sections scope "
                 "subcommand flags; flags override the file)");

  int exit_code = 0;
  const auto wire = [&](CLI::App* sub, auto opts, auto fn) {
    sub->fallthrough();
    sub->callback([&exit_code, &common, opts, fn]() {
      exit_code = fn(*opts, common);
    });
  };

  {
    auto o = std::make_shared<DjOpts>();
    auto* sub = app.add_subcommand(
        "dj", "Constant-vs-balanced decision on Boolean oracles");
    sub->add_option("--n", o->n_sweep, "Input bits (sweep a..b or list)")
        ->capture_default_str();
    wire(sub, o, cmd_dj);
  }
  {
    auto o = std::make_shared<BvOpts>();
    auto* sub = app.add_subcommand(
        "bv", "One-query parity-secret recovery (point-mass check)");
    sub->add_option("--n", o->n_sweep, "Input bits (sweep)")
        ->capture_default_str();
    sub->add_option("--secrets", o->secrets, "Random secrets per n")
        ->capture_default_str();
    sub->add_flag("--exhaustive", o->exhaustive, "Test every secret");
    wire(sub, o, cmd_bv);
  }
  {
    auto o = std::make_shared<LpnOpts>();
    auto* sub = app.add_subcommand(
        "lpn", "Noisy-parity single-sample learner (success 1/2, any eta)");
    sub->add_option("--n", o->n_sweep, "Input bits (sweep)")
        ->capture_default_str();
    sub->add_option("--eta", o->etas, "Flip rates (comma list in [0, 0.5))")
        ->capture_default_str();
    sub->add_option("--secrets", o->secrets, "Nonzero secrets per n")
        ->capture_default_str();
    wire(sub, o, cmd_lpn);
  }
  {
    auto o = std::make_shared<EbvOpts>();
    auto* sub = app.add_subcommand(
        "ebv", "Mod-q secret recovery; success totient(q)/q exactly");
    sub->add_option("--q", o->q_sweep, "Digit dimensions (sweep)")
        ->capture_default_str();
    sub->add_option("--n", o->n_sweep, "Secret length (sweep)")
        ->capture_default_str();
    sub->add_option("--secrets", o->secrets, "Random secrets per cell")
        ->capture_default_str();
    sub->add_flag("--exact", o->exact,
                  "Exact-distribution mode (always on; flag kept for scripts)");
    wire(sub, o, cmd_ebv);
  }
  {
    auto o = std::make_shared<EbvLweOpts>();
    auto* sub = app.add_subcommand(
        "ebv-lwe", "Noisy mod-q recovery vs. the totient(q)/(24 eta q) bound");
    sub->add_option("--q", o->q_sweep, "Moduli (sweep)")->capture_default_str();
    sub->add_option("--n", o->n_sweep, "Secret length (sweep)")
        ->capture_default_str();
    sub->add_option("--eta", o->etas, "Error bounds (sweep, eta >= 1)")
        ->capture_default_str();
    sub->add_option("--dist", o->dist, "Error law: uniform | gaussian")
        ->capture_default_str();
    sub->add_option("--secrets", o->secrets, "Random secrets per cell")
        ->capture_default_str();
    wire(sub, o, cmd_ebv_lwe);
  }
  {
    auto o = std::make_shared<KeyrecOpts>();
    auto* sub = app.add_subcommand(
        "keyrec", "Full-key recovery through a decryption oracle");
    sub->add_option("--n", o->n, "Key length")->capture_default_str();
    sub->add_option("--q", o->q, "Modulus")->capture_default_str();
    sub->add_option("--eta", o->eta, "Encryption error bound")
        ->capture_default_str();
    sub->add_option("--delta", o->delta, "Per-coordinate failure budget")
        ->capture_default_str();
    sub->add_option("--eps", o->eps, "Mean-deviation target for the budget")
        ->capture_default_str();
    sub->add_option("--trials", o->trials, "Seeded recovery runs")
        ->capture_default_str();
    sub->add_option("--estimator", o->estimator,
                    "Coordinate estimator: band | mean")
        ->capture_default_str();
    sub->add_option("--min-rate", o->min_rate, "Required recovery rate")
        ->capture_default_str();
    wire(sub, o, cmd_keyrec);
  }
  {
    auto o = std::make_shared<IndGameOpts>();
    auto* sub = app.add_subcommand(
        "ind-game", "Indistinguishability games (CPA / CCA1) with adversaries");
    sub->add_option("--scheme", o->scheme, "lwe | prf | prf-periodized")
        ->capture_default_str();
    sub->add_option("--mode", o->mode, "cpa | cca1 | both")
        ->capture_default_str();
    sub->add_option("--adversary", o->adversary, "keyrec | guess")
        ->capture_default_str();
    sub->add_option("--trials", o->trials, "Games per mode")
        ->capture_default_str();
    sub->add_option("--n", o->n, "Key length")->capture_default_str();
    sub->add_option("--q", o->q, "Modulus (lwe scheme)")->capture_default_str();
    sub->add_option("--eta", o->eta, "Error bound (lwe scheme)")
        ->capture_default_str();
    sub->add_option("--delta", o->delta, "Recovery failure budget")
        ->capture_default_str();
    sub->add_option("--eps", o->eps, "Recovery mean-deviation target")
        ->capture_default_str();
    sub->add_option("--min-rate", o->min_rate, "Required CCA1 win rate")
        ->capture_default_str();
    sub->add_option("--cpa-low", o->cpa_low, "CPA win-rate band, low")
        ->capture_default_str();
    sub->add_option("--cpa-high", o->cpa_high, "CPA win-rate band, high")
        ->capture_default_str();
    sub->add_option("--transcripts", o->transcripts,
                    "Write per-game JSON lines to this path");
    wire(sub, o, cmd_ind_game);
  }
  {
    auto o = std::make_shared<RelabelClassicalOpts>();
    auto* sub = app.add_subcommand(
        "relabel-classical",
        "Exact optimal advantage for the classical relabeling game");
    sub->add_option("--n", o->n_sweep, "Input bits (sweep)")
        ->capture_default_str();
    sub->add_option("--m", o->m, "Output bits")->capture_default_str();
    sub->add_option("--T", o->t_list, "Query budgets (sweep or list)")
        ->capture_default_str();
    sub->add_option("--trials", o->trials,
                    "Monte-Carlo games (0 = exact only)")
        ->capture_default_str();
    wire(sub, o, cmd_relabel_classical);
  }
  {
    auto o = std::make_shared<RelabelQuantumOpts>();
    auto* sub = app.add_subcommand(
        "relabel-quantum",
        "Trace-distance sweep for suffix-relabeled quantum oracles");
    sub->add_option("--n", o->n, "Input qubits")->capture_default_str();
    sub->add_option("--m", o->m, "Output qubits")->capture_default_str();
    sub->add_option("--mu", o->mu_list, "Relabeled suffix lengths (sweep)")
        ->capture_default_str();
    sub->add_option("--T", o->t_list, "Oracle-call budgets (sweep)")
        ->capture_default_str();
    sub->add_option("--draws", o->draws, "(r*, s) draws per cell")
        ->capture_default_str();
    wire(sub, o, cmd_relabel_quantum);
  }
  {
    auto o = std::make_shared<QftCheckOpts>();
    auto* sub = app.add_subcommand(
        "qft-check", "Fourier-matrix algebra checks over Z_q");
    sub->add_option("--q", o->q_sweep, "Dimensions (sweep)")
        ->capture_default_str();
    wire(sub, o, cmd_qft_check);
  }
  {
    auto o = std::make_shared<ChannelsOpts>();
    auto* sub = app.add_subcommand(
        "channels", "Single-qubit noise channels on random density matrices");
    sub->add_option("--samples", o->samples, "Random inputs per channel")
        ->capture_default_str();
    sub->add_option("--eta", o->eta, "Flip / depolarizing probability")
        ->capture_default_str();
    sub->add_option("--gamma", o->gamma, "Damping rate")
        ->capture_default_str();
    sub->add_flag("--mixed", o->mixed, "Sample mixed inputs instead of pure");
    wire(sub, o, cmd_channels);
  }
  {
    auto o = std::make_shared<Code3Opts>();
    auto* sub = app.add_subcommand(
        "code3", "3-qubit bit-flip code cycle and 3-bit majority formula");
    sub->add_option("--p", o->p_list, "Flip probabilities (comma list)")
        ->capture_default_str();
    sub->add_option("--shots", o->shots, "Monte-Carlo shots per p")
        ->capture_default_str();
    sub->add_option("--states", o->states, "Random logical states per case")
        ->capture_default_str();
    wire(sub, o, cmd_code3);
  }
  {
    auto o = std::make_shared<NumbersOpts>();
    auto* sub = app.add_subcommand(
        "numbers", "Number-theory cross-checks (totient bound, sieve, primes)");
    sub->add_option("--rs-max", o->rs_max, "Ratio-bound sweep limit")
        ->capture_default_str();
    sub->add_option("--tot-max", o->tot_max, "Cross-check sweep limit")
        ->capture_default_str();
    sub->add_option("--prime-bits", o->prime_bits, "Sampler width n")
        ->capture_default_str();
    sub->add_option("--prime-draws", o->prime_draws, "Sampler draws")
        ->capture_default_str();
    wire(sub, o, cmd_numbers);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("qlab");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& s : full) argv.push_back(s.c_str());
  return run_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace qlab::cli
