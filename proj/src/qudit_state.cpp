#include "qlab/qudit_state.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace qlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr uint64_t kDimCap = 1ULL << 26;  // desk-scale statevector cap
}  // namespace

uint64_t pow_dim(uint32_t q, uint32_t m) {
  if (q < 2) throw std::invalid_argument("digit dimension must be >= 2");
  if (m < 1) throw std::invalid_argument("register count must be >= 1");
  uint64_t dim = 1;
  for (uint32_t j = 0; j < m; ++j) {
    if (dim > kDimCap / q) throw std::length_error("statevector dimension cap exceeded");
    dim *= q;
  }
  return dim;
}

QuditState::QuditState(uint32_t q_, uint32_t m_) : q(q_), m(m_) {
  amps.assign(pow_dim(q_, m_), cdouble(0));
  amps[0] = 1.0;
}

QuditState QuditState::basis(uint32_t q, uint32_t m,
                             const std::vector<uint32_t>& digits) {
  if (digits.size() != m) throw std::invalid_argument("digit count mismatch");
  return basis_index(q, m, pack_digits(digits, q));
}

QuditState QuditState::basis_index(uint32_t q, uint32_t m, uint64_t index) {
  QuditState s(q, m);
  if (index >= s.dim()) throw std::out_of_range("basis index out of range");
  s.amps[0] = 0.0;
  s.amps[index] = 1.0;
  return s;
}

double QuditState::norm_sq() const {
  double acc = 0.0;
  for (const auto& a : amps) acc += std::norm(a);
  return acc;
}

bool QuditState::is_normalized(double tol) const {
  return std::abs(norm_sq() - 1.0) <= tol;
}

void QuditState::normalize() {
  const double n = std::sqrt(norm_sq());
  if (n <= 0.0) throw std::domain_error("cannot normalize the zero vector");
  for (auto& a : amps) a /= n;
}

std::vector<uint32_t> unpack_digits(uint64_t index, uint32_t q, uint32_t m) {
  std::vector<uint32_t> digits(m);
  for (uint32_t j = 0; j < m; ++j) {
    digits[j] = static_cast<uint32_t>(index % q);
    index /= q;
  }
  return digits;
}

uint64_t pack_digits(const std::vector<uint32_t>& digits, uint32_t q) {
  uint64_t index = 0;
  for (size_t j = digits.size(); j-- > 0;) {
    if (digits[j] >= q) throw std::out_of_range("digit value out of range");
    index = index * q + digits[j];
  }
  return index;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd d =
      u * u.adjoint() - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff();
}

QuditState apply_unitary(const QuditState& state, const UnitaryOp& op) {
  const uint32_t q = state.q;
  const size_t k = op.targets.size();
  if (k == 0) throw std::invalid_argument("no target digits");
  uint64_t block = 1;
  for (size_t j = 0; j < k; ++j) {
    if (op.targets[j] >= state.m) throw std::out_of_range("target digit out of range");
    for (size_t i = j + 1; i < k; ++i)
      if (op.targets[i] == op.targets[j])
        throw std::invalid_argument("duplicate target digit");
    block *= q;
  }
  if (static_cast<uint64_t>(op.matrix.rows()) != block ||
      static_cast<uint64_t>(op.matrix.cols()) != block)
    throw std::invalid_argument("gate matrix dimension mismatch");
#ifndef NDEBUG
  assert(unitarity_defect(op.matrix) <= 1e-9 && "non-unitary gate matrix");
#endif

  // Strides of each target digit in the packed index.
  std::vector<uint64_t> stride(k);
  for (size_t j = 0; j < k; ++j) {
    uint64_t s = 1;
    for (uint32_t d = 0; d < op.targets[j]; ++d) s *= q;
    stride[j] = s;
  }

  QuditState out = state;
  std::vector<cdouble> in_block(block), out_block(block);
  std::vector<bool> is_target(state.m, false);
  for (auto t : op.targets) is_target[t] = true;

  // Enumerate assignments of the non-target digits via their packed index.
  uint64_t outer_dim = state.dim() / block;
  for (uint64_t outer = 0; outer < outer_dim; ++outer) {
    // Spread `outer` over the non-target digit positions to get a base index.
    uint64_t base = 0, rem = outer, placed = 1;
    for (uint32_t d = 0; d < state.m; ++d) {
      if (!is_target[d]) {
        const uint64_t digit = rem % q;
        rem /= q;
        base += digit * placed;
      }
      placed *= q;
    }
    // Gather the q^k amplitudes of this fiber, apply the matrix, scatter.
    for (uint64_t t = 0; t < block; ++t) {
      uint64_t idx = base, tt = t;
      for (size_t j = 0; j < k; ++j) {
        idx += (tt % q) * stride[j];
        tt /= q;
      }
      in_block[t] = state.amps[idx];
    }
    for (uint64_t r = 0; r < block; ++r) {
      cdouble acc(0);
      for (uint64_t c = 0; c < block; ++c) acc += op.matrix(r, c) * in_block[c];
      out_block[r] = acc;
    }
    for (uint64_t t = 0; t < block; ++t) {
      uint64_t idx = base, tt = t;
      for (size_t j = 0; j < k; ++j) {
        idx += (tt % q) * stride[j];
        tt /= q;
      }
      out.amps[idx] = out_block[t];
    }
  }
  return out;
}

Eigen::MatrixXcd pauli_x() {
  Eigen::MatrixXcd x(2, 2);
  x << 0, 1, 1, 0;
  return x;
}

Eigen::MatrixXcd pauli_z() {
  Eigen::MatrixXcd z(2, 2);
  z << 1, 0, 0, -1;
  return z;
}

Eigen::MatrixXcd hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd h(2, 2);
  h << s, s, s, -s;
  return h;
}

Eigen::MatrixXcd cnot() {
  // Control = target digit 0 (least significant of the pair), target = digit 1.
  // Basis order in the 4x4 block: |c, t> packed little-endian: c + 2t.
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  u(0, 0) = 1;  // |00> -> |00>
  u(3, 1) = 1;  // |10> (c=1,t=0, idx 1) -> |11> (idx 3)
  u(2, 2) = 1;  // |01> -> |01>
  u(1, 3) = 1;  // |11> -> |10>
  return u;
}

Eigen::MatrixXcd qft_matrix(uint32_t q, bool inverse) {
  const double sign = inverse ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  Eigen::MatrixXcd f(q, q);
  for (uint32_t y = 0; y < q; ++y) {
    for (uint32_t x = 0; x < q; ++x) {
      const double phase =
          sign * 2.0 * kPi * static_cast<double>(x) * y / q;
      f(y, x) = scale * cdouble(std::cos(phase), std::sin(phase));
    }
  }
  return f;
}

Eigen::MatrixXcd shift_matrix(uint32_t q, uint32_t s) {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(q, q);
  for (uint32_t x = 0; x < q; ++x) u((x + s) % q, x) = 1.0;
  return u;
}

Eigen::MatrixXcd random_su2(Rng& rng) {
  // Gram-Schmidt of a complex Gaussian 2x2 matrix is Haar-distributed.
  Eigen::MatrixXcd g(2, 2);
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) g(r, c) = cdouble(rng.normal(), rng.normal());
  Eigen::Vector2cd v0 = g.col(0).normalized();
  Eigen::Vector2cd v1 = g.col(1) - v0 * (v0.adjoint() * g.col(1));
  v1.normalize();
  Eigen::MatrixXcd u(2, 2);
  u.col(0) = v0;
  u.col(1) = v1;
  return u;
}

void apply_qft(QuditState& state, const std::vector<uint32_t>& targets,
               bool inverse) {
  const uint32_t q = state.q;
  const double sign = inverse ? -1.0 : 1.0;
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  // Precomputed row of q-th roots: omega^k, k in [0, q).
  std::vector<cdouble> omega(q);
  for (uint32_t k = 0; k < q; ++k) {
    const double phase = sign * 2.0 * kPi * k / q;
    omega[k] = cdouble(std::cos(phase), std::sin(phase));
  }

  std::vector<cdouble> fiber(q), transformed(q);
  for (uint32_t target : targets) {
    if (target >= state.m) throw std::out_of_range("target digit out of range");
    uint64_t stride = 1;
    for (uint32_t d = 0; d < target; ++d) stride *= q;
    const uint64_t dim = state.dim();
    const uint64_t span = stride * q;
    // Walk every fiber along `target`, transform it in place.
    for (uint64_t high = 0; high < dim; high += span) {
      for (uint64_t low = 0; low < stride; ++low) {
        const uint64_t base = high + low;
        for (uint32_t x = 0; x < q; ++x) fiber[x] = state.amps[base + x * stride];
        for (uint32_t y = 0; y < q; ++y) {
          cdouble acc(0);
          uint32_t exp = 0;
          for (uint32_t x = 0; x < q; ++x) {
            acc += omega[exp] * fiber[x];
            exp += y;
            if (exp >= q) exp -= q;
          }
          transformed[y] = scale * acc;
        }
        for (uint32_t y = 0; y < q; ++y) state.amps[base + y * stride] = transformed[y];
      }
    }
  }
}

void apply_qft_all(QuditState& state, bool inverse) {
  std::vector<uint32_t> all(state.m);
  std::iota(all.begin(), all.end(), 0);
  apply_qft(state, all, inverse);
}

AlgebraReport check_root_orthogonality(uint32_t q, double tol) {
  AlgebraReport report;
  for (uint32_t x = 0; x < q; ++x) {
    for (uint32_t xp = 0; xp < q; ++xp) {
      cdouble sum(0);
      for (uint32_t y = 0; y < q; ++y) {
        const double phase =
            2.0 * kPi * (static_cast<double>(x) - xp) * y / q;
        sum += cdouble(std::cos(phase), std::sin(phase));
      }
      const double expected = (x == xp) ? static_cast<double>(q) : 0.0;
      report.max_deviation =
          std::max(report.max_deviation, std::abs(sum - cdouble(expected)));
    }
  }
  report.pass = report.max_deviation <= tol * q;
  return report;
}

AlgebraReport check_shift_diagonality(uint32_t q, double tol) {
  const Eigen::MatrixXcd f = qft_matrix(q);
  const Eigen::MatrixXcd lhs = f * shift_matrix(q) * f.adjoint();
  AlgebraReport report;
  for (uint32_t r = 0; r < q; ++r) {
    for (uint32_t c = 0; c < q; ++c) {
      cdouble expected(0);
      if (r == c) {
        const double phase = 2.0 * kPi * r / q;
        expected = cdouble(std::cos(phase), std::sin(phase));
      }
      report.max_deviation =
          std::max(report.max_deviation, std::abs(lhs(r, c) - expected));
    }
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

std::vector<double> exact_distribution(const QuditState& state) {
  std::vector<double> probs(state.dim());
  for (uint64_t i = 0; i < state.dim(); ++i) probs[i] = std::norm(state.amps[i]);
  return probs;
}

MeasureResult measure_all(const QuditState& state, Rng& rng) {
  if (!state.is_normalized())
    throw std::domain_error("measurement requires a normalized state");
  const double r = rng.next_double();
  double acc = 0.0;
  uint64_t picked = state.dim() - 1;
  for (uint64_t i = 0; i < state.dim(); ++i) {
    acc += std::norm(state.amps[i]);
    if (r < acc) {
      picked = i;
      break;
    }
  }
  MeasureResult result;
  result.outcome = unpack_digits(picked, state.q, state.m);
  result.post_state = QuditState::basis_index(state.q, state.m, picked);
  return result;
}

MeasureResult measure_digits(const QuditState& state,
                             const std::vector<uint32_t>& digits, Rng& rng) {
  if (!state.is_normalized())
    throw std::domain_error("measurement requires a normalized state");
  const uint32_t q = state.q;
  std::vector<uint64_t> stride(digits.size());
  for (size_t j = 0; j < digits.size(); ++j) {
    if (digits[j] >= state.m) throw std::out_of_range("digit out of range");
    uint64_t s = 1;
    for (uint32_t d = 0; d < digits[j]; ++d) s *= q;
    stride[j] = s;
  }

  // Marginal over the measured digits.
  uint64_t outcomes = 1;
  for (size_t j = 0; j < digits.size(); ++j) outcomes *= q;
  std::vector<double> marginal(outcomes, 0.0);
  for (uint64_t i = 0; i < state.dim(); ++i) {
    uint64_t key = 0, w = 1;
    for (size_t j = 0; j < digits.size(); ++j) {
      key += ((i / stride[j]) % q) * w;
      w *= q;
    }
    marginal[key] += std::norm(state.amps[i]);
  }

  const double r = rng.next_double();
  double acc = 0.0;
  uint64_t picked = outcomes - 1;
  for (uint64_t k = 0; k < outcomes; ++k) {
    acc += marginal[k];
    if (r < acc) {
      picked = k;
      break;
    }
  }

  MeasureResult result;
  result.outcome.resize(digits.size());
  {
    uint64_t t = picked;
    for (size_t j = 0; j < digits.size(); ++j) {
      result.outcome[j] = static_cast<uint32_t>(t % q);
      t /= q;
    }
  }
  // Collapse: zero out amplitudes inconsistent with the outcome, renormalize.
  result.post_state = state;
  for (uint64_t i = 0; i < state.dim(); ++i) {
    bool consistent = true;
    for (size_t j = 0; j < digits.size(); ++j) {
      if ((i / stride[j]) % q != result.outcome[j]) {
        consistent = false;
        break;
      }
    }
    if (!consistent) result.post_state.amps[i] = 0.0;
  }
  result.post_state.normalize();
  return result;
}

std::complex<double> overlap(const QuditState& a, const QuditState& b) {
  if (a.q != b.q || a.m != b.m) throw std::invalid_argument("dimension mismatch");
  cdouble acc(0);
  for (uint64_t i = 0; i < a.dim(); ++i) acc += std::conj(a.amps[i]) * b.amps[i];
  return acc;
}

double trace_distance(const QuditState& a, const QuditState& b) {
  const double f = std::norm(overlap(a, b));
  return std::sqrt(std::max(0.0, 1.0 - f));
}

double fidelity(const QuditState& a, const QuditState& b) {
  return std::abs(overlap(a, b));
}

}  // namespace qlab
