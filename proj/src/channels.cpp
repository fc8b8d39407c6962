#include "qlab/channels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace qlab {

DensityMatrix DensityMatrix::pure(const QuditState& psi) {
  DensityMatrix d;
  d.q = psi.q;
  d.m = psi.m;
  Eigen::VectorXcd v(psi.dim());
  for (uint64_t i = 0; i < psi.dim(); ++i) v(static_cast<long>(i)) = psi.amps[i];
  d.rho = v * v.adjoint();
  return d;
}

DensityMatrix DensityMatrix::maximally_mixed(uint32_t q, uint32_t m) {
  DensityMatrix d;
  d.q = q;
  d.m = m;
  const uint64_t dim = pow_dim(q, m);
  d.rho = Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim);
  return d;
}

bool DensityMatrix::is_valid(double tol) const {
  if (std::abs(rho.trace().real() - 1.0) > tol) return false;
  if (std::abs(rho.trace().imag()) > tol) return false;
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) return false;
  return min_eigenvalue() >= -tol;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(rho);
  return solver.eigenvalues().minCoeff();
}

DensityMatrix channel_apply(const DensityMatrix& input, ChannelKind kind,
                            double param) {
  if (input.q != 2 || input.m != 1)
    throw std::invalid_argument("noise channels act on a single qubit");
  if (param < 0.0 || param > 1.0)
    throw std::domain_error("channel parameter must lie in [0, 1]");

  DensityMatrix out = input;
  switch (kind) {
    case ChannelKind::BitFlip: {
      const Eigen::MatrixXcd x = pauli_x();
      out.rho = (1.0 - param) * input.rho + param * x * input.rho * x.adjoint();
      break;
    }
    case ChannelKind::PhaseFlip: {
      const Eigen::MatrixXcd z = pauli_z();
      out.rho = (1.0 - param) * input.rho + param * z * input.rho * z.adjoint();
      break;
    }
    case ChannelKind::AmplitudeDamping: {
      Eigen::MatrixXcd e0(2, 2), e1(2, 2);
      e0 << 1, 0, 0, std::sqrt(1.0 - param);
      e1 << 0, std::sqrt(param), 0, 0;
      out.rho = e0 * input.rho * e0.adjoint() + e1 * input.rho * e1.adjoint();
      break;
    }
    case ChannelKind::Depolarizing: {
      out.rho = (1.0 - param) * input.rho +
                param * Eigen::MatrixXcd::Identity(2, 2) / 2.0;
      break;
    }
  }
  return out;
}

DensityMatrix random_qubit_density(Rng& rng, bool mixed) {
  // Haar-random pure qubit; optionally mixed with I/2 by a random weight.
  Eigen::MatrixXcd u = random_su2(rng);
  Eigen::Vector2cd v = u.col(0);
  DensityMatrix d;
  d.q = 2;
  d.m = 1;
  d.rho = v * v.adjoint();
  if (mixed) {
    const double w = rng.next_double();
    d.rho = w * d.rho + (1.0 - w) * Eigen::MatrixXcd::Identity(2, 2) / 2.0;
  }
  return d;
}

double repetition_success_prob(double p) { return 1.0 - 3.0 * p * p + 2.0 * p * p * p; }

double repetition_monte_carlo(double p, uint64_t shots, Rng& rng) {
  uint64_t successes = 0;
  for (uint64_t s = 0; s < shots; ++s) {
    int flips = 0;
    for (int b = 0; b < 3; ++b) flips += rng.bernoulli(p) ? 1 : 0;
    if (flips <= 1) ++successes;  // majority vote corrects at most one flip
  }
  return static_cast<double>(successes) / static_cast<double>(shots);
}

CodeCycleResult bitflip_code_cycle(const QuditState& logical,
                                   const std::vector<int>& error_positions) {
  if (logical.q != 2 || logical.m != 1)
    throw std::invalid_argument("code input must be a single qubit");
  if (!logical.is_normalized())
    throw std::domain_error("code input must be normalized");

  const cdouble c0 = logical.amps[0];
  const cdouble c1 = logical.amps[1];

  // Encode |psi> -> c0|000> + c1|111> (little-endian indices 0 and 7).
  QuditState enc(2, 3);
  enc.amps.assign(8, cdouble(0));
  enc.amps[0] = c0;
  enc.amps[7] = c1;

  for (int pos : error_positions) {
    if (pos < 0 || pos > 2) throw std::out_of_range("error position in {0,1,2}");
    enc = apply_unitary(enc, UnitaryOp{{static_cast<uint32_t>(pos)}, pauli_x()});
  }

  // Code-space projectors: P0 = {000, 111}, and Pj = the pair reached by a
  // single flip of qubit j-1: P1 = {100, 011}, P2 = {010, 101}, P3 = {001, 110}
  // (strings written (x0, x1, x2); packed little-endian).
  const uint64_t subspace[4][2] = {{0, 7}, {1, 6}, {2, 5}, {4, 3}};
  int syndrome = 0;
  double best = -1.0;
  for (int j = 0; j < 4; ++j) {
    const double mass =
        std::norm(enc.amps[subspace[j][0]]) + std::norm(enc.amps[subspace[j][1]]);
    if (mass > best) {
      best = mass;
      syndrome = j;
    }
  }
  // The injected error is deterministic, so the state lies entirely in one
  // subspace; project (exactly) and correct.
  QuditState projected(2, 3);
  projected.amps.assign(8, cdouble(0));
  projected.amps[subspace[syndrome][0]] = enc.amps[subspace[syndrome][0]];
  projected.amps[subspace[syndrome][1]] = enc.amps[subspace[syndrome][1]];
  projected.normalize();
  if (syndrome > 0) {
    projected = apply_unitary(
        projected, UnitaryOp{{static_cast<uint32_t>(syndrome - 1)}, pauli_x()});
  }

  // Decode: the corrected state is a0|000> + a1|111>.
  CodeCycleResult result;
  result.syndrome = syndrome;
  result.recovered = QuditState(2, 1);
  result.recovered.amps[0] = projected.amps[0];
  result.recovered.amps[1] = projected.amps[7];
  result.recovered.normalize();
  result.fidelity = fidelity(logical, result.recovered);
  return result;
}

}  // namespace qlab
