#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qlab/qudit_state.hpp"
#include "qlab/rng.hpp"

namespace qlab {

// ---------------------------------------------------------------------------
// Density matrices
// ---------------------------------------------------------------------------

/// Mixed state over m digits of dimension q: a q^m x q^m density operator.
struct DensityMatrix {
  uint32_t q = 2;
  uint32_t m = 1;
  Eigen::MatrixXcd rho;

  static DensityMatrix pure(const QuditState& psi);
  static DensityMatrix maximally_mixed(uint32_t q, uint32_t m);

  double trace_real() const { return rho.trace().real(); }

  /// Validity: trace 1, Hermitian, eigenvalues >= -tol (all at `tol`).
  bool is_valid(double tol = kStateTol) const;

  /// Smallest eigenvalue (Hermitian part), for PSD diagnostics.
  double min_eigenvalue() const;
};

// ---------------------------------------------------------------------------
// Single-qubit noise channels
// ---------------------------------------------------------------------------

enum class ChannelKind { BitFlip, PhaseFlip, AmplitudeDamping, Depolarizing };

/// Apply a single-qubit channel (q = 2, m = 1 only):
///   BitFlip(eta):           (1-eta) rho + eta X rho X
///   PhaseFlip(eta):         (1-eta) rho + eta Z rho Z
///   AmplitudeDamping(gamma): E0 rho E0^t + E1 rho E1^t with
///       E0 = [[1,0],[0,sqrt(1-gamma)]], E1 = [[0,sqrt(gamma)],[0,0]]
///   Depolarizing(eta):      (1-eta) rho + eta I/2
/// Parameters must lie in [0, 1].
DensityMatrix channel_apply(const DensityMatrix& rho, ChannelKind kind,
                            double param);

/// A random single-qubit pure-state density matrix (Haar direction).
DensityMatrix random_qubit_density(Rng& rng, bool mixed = false);

// ---------------------------------------------------------------------------
// Three-bit / three-qubit bit-flip codes
// ---------------------------------------------------------------------------

/// Success probability of the classical 3-bit majority repetition code when
/// each bit independently flips with probability p: 1 - 3p^2 + 2p^3.
double repetition_success_prob(double p);

/// Monte-Carlo estimate of the same success probability (seeded).
double repetition_monte_carlo(double p, uint64_t shots, Rng& rng);

struct CodeCycleResult {
  int syndrome = 0;        // 0: no error; j in {1,2,3}: flip on qubit j-1
  QuditState recovered;    // decoded single-qubit state
  double fidelity = 0.0;   // |<input|recovered>|
};

/// One full cycle of the 3-qubit bit-flip code: encode the single-qubit input
/// as c0|000> + c1|111>, inject X errors at the listed positions (0, 1, 2;
/// empty = no error), measure the four code-space projectors, apply the
/// indicated correction, and decode. Recovery is exact for <= 1 error; two or
/// more injected errors decode to the wrong state by design of the code.
CodeCycleResult bitflip_code_cycle(const QuditState& logical,
                                   const std::vector<int>& error_positions);

}  // namespace qlab
