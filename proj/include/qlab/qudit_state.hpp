#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qlab/rng.hpp"

namespace qlab {

using cdouble = std::complex<double>;

/// Tolerances used throughout: state-level checks at 1e-9, matrix identities
/// at 1e-10.
constexpr double kStateTol = 1e-9;
constexpr double kMatrixTol = 1e-10;

// ---------------------------------------------------------------------------
// QuditState: dense statevector over m digits of dimension q
// ---------------------------------------------------------------------------

/// Dense complex amplitude vector over (Z_q)^m.
///
/// Digit-to-index packing is little-endian and fixed everywhere in this
/// library: basis state |x_0, x_1, ..., x_{m-1}> sits at index
/// x = sum_j x_j * q^j, so digit 0 is the least significant. All register
/// diagrams in the docs follow this convention.
struct QuditState {
  uint32_t q = 2;               // dimension per digit (>= 2)
  uint32_t m = 1;               // number of digits (>= 1)
  std::vector<cdouble> amps;    // length q^m

  QuditState() : amps(2, cdouble(0)) { amps[0] = 1.0; }
  QuditState(uint32_t q_, uint32_t m_);

  /// Basis state |digits> (digits[j] = value of digit j).
  static QuditState basis(uint32_t q, uint32_t m,
                          const std::vector<uint32_t>& digits);
  /// Basis state at a packed index.
  static QuditState basis_index(uint32_t q, uint32_t m, uint64_t index);

  uint64_t dim() const { return amps.size(); }

  double norm_sq() const;
  bool is_normalized(double tol = kStateTol) const;
  void normalize();
};

/// q^m as a 64-bit value; throws if it overflows the desk-scale cap (2^26).
uint64_t pow_dim(uint32_t q, uint32_t m);

/// Packed index -> digit vector (little-endian) and back.
std::vector<uint32_t> unpack_digits(uint64_t index, uint32_t q, uint32_t m);
uint64_t pack_digits(const std::vector<uint32_t>& digits, uint32_t q);

// ---------------------------------------------------------------------------
// Unitaries
// ---------------------------------------------------------------------------

/// A unitary acting on an ordered list of target digits. The matrix is
/// (q^k x q^k) for k targets, indexed by little-endian packing of the target
/// digits in the order given (targets[0] least significant).
struct UnitaryOp {
  std::vector<uint32_t> targets;
  Eigen::MatrixXcd matrix;
};

/// Max-norm unitarity defect ||U U^dagger - I||_max.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Apply `op` to `state`. Throws on target/dimension mismatch. In debug
/// builds the matrix is checked for unitarity (at kMatrixTol) on first use.
[[nodiscard]] QuditState apply_unitary(const QuditState& state,
                                       const UnitaryOp& op);

// Standard q=2 gates and general-q building blocks.
Eigen::MatrixXcd pauli_x();
Eigen::MatrixXcd pauli_z();
Eigen::MatrixXcd hadamard();
Eigen::MatrixXcd cnot();  // control = target digit 0, target = digit 1

/// Fourier matrix over Z_q: entries omega^(x*y)/sqrt(q), omega = e^(2 pi i/q).
Eigen::MatrixXcd qft_matrix(uint32_t q, bool inverse = false);

/// Cyclic shift by s over Z_q: |x> -> |x + s mod q>.
Eigen::MatrixXcd shift_matrix(uint32_t q, uint32_t s = 1);

/// Haar-random 2x2 unitary (Gram-Schmidt of a complex Gaussian matrix).
Eigen::MatrixXcd random_su2(Rng& rng);

/// Apply the Fourier transform digit-wise to each listed target (in place
/// per digit, scratch-buffered; no full-state copy).
void apply_qft(QuditState& state, const std::vector<uint32_t>& targets,
               bool inverse = false);

/// Convenience: Fourier transform on all digits.
void apply_qft_all(QuditState& state, bool inverse = false);

// ---------------------------------------------------------------------------
// Algebra checks
// ---------------------------------------------------------------------------

struct AlgebraReport {
  double max_deviation = 0.0;
  bool pass = false;
};

/// Verify sum_y omega^(x y) * conj(omega^(x' y)) = q * delta_{x,x'} for all
/// pairs (x, x') in Z_q; reports the largest deviation.
AlgebraReport check_root_orthogonality(uint32_t q, double tol = kStateTol);

/// Verify F U(1) F^dagger = diag(omega^y) entrywise.
AlgebraReport check_shift_diagonality(uint32_t q, double tol = kStateTol);

// ---------------------------------------------------------------------------
// Measurement and distances
// ---------------------------------------------------------------------------

/// |amps[x]|^2 for every basis index x (sums to 1 for normalized states).
std::vector<double> exact_distribution(const QuditState& state);

struct MeasureResult {
  std::vector<uint32_t> outcome;  // digit values
  QuditState post_state;          // collapsed and renormalized
};

/// Projective measurement of all digits in the computational basis.
MeasureResult measure_all(const QuditState& state, Rng& rng);

/// Projective measurement of a subset of digits; the post-state keeps the
/// full register with the measured digits collapsed.
MeasureResult measure_digits(const QuditState& state,
                             const std::vector<uint32_t>& digits, Rng& rng);

std::complex<double> overlap(const QuditState& a, const QuditState& b);

/// Pure-state trace distance sqrt(1 - |<a|b>|^2).
double trace_distance(const QuditState& a, const QuditState& b);

double fidelity(const QuditState& a, const QuditState& b);

}  // namespace qlab
