#include "qlab/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace qlab {

uint64_t OracleSpec::input_dim() const { return pow_dim(q, n); }
uint64_t OracleSpec::output_dim() const { return pow_dim(q, out_digits); }

OracleSpec OracleSpec::inner_product(uint32_t n, uint32_t q,
                                     const std::vector<int64_t>& s) {
  if (s.size() != n) throw std::invalid_argument("secret length mismatch");
  for (int64_t v : s) {
    if (v < 0 || v >= static_cast<int64_t>(q))
      throw std::out_of_range("secret digit out of range");
  }
  OracleSpec spec;
  spec.n = n;
  spec.q = q;
  spec.out_digits = 1;
  spec.f = [n, q, s](uint64_t x) {
    uint64_t acc = 0;
    for (uint32_t j = 0; j < n; ++j) {
      acc += static_cast<uint64_t>(s[j]) * (x % q);
      x /= q;
    }
    return acc % q;
  };
  return spec;
}

OracleSpec OracleSpec::constant(uint32_t n, uint32_t q, uint64_t value,
                                uint32_t out_digits) {
  OracleSpec spec;
  spec.n = n;
  spec.q = q;
  spec.out_digits = out_digits;
  if (value >= pow_dim(q, out_digits))
    throw std::out_of_range("constant value out of range");
  spec.f = [value](uint64_t) { return value; };
  return spec;
}

OracleSpec OracleSpec::from_table(uint32_t n, uint32_t q,
                                  std::vector<uint64_t> table,
                                  uint32_t out_digits) {
  OracleSpec spec;
  spec.n = n;
  spec.q = q;
  spec.out_digits = out_digits;
  if (table.size() != spec.input_dim())
    throw std::invalid_argument("table size must be q^n");
  const uint64_t out_dim = spec.output_dim();
  for (uint64_t v : table) {
    if (v >= out_dim) throw std::out_of_range("table value out of range");
  }
  spec.f = [table = std::move(table)](uint64_t x) { return table[x]; };
  return spec;
}

namespace {

/// Digit-wise (y + delta) mod q over `digits` base-q digits of packed values.
uint64_t digitwise_add(uint64_t y, uint64_t delta, uint32_t q, uint32_t digits) {
  uint64_t result = 0, w = 1;
  for (uint32_t j = 0; j < digits; ++j) {
    result += ((y % q + delta % q) % q) * w;
    y /= q;
    delta /= q;
    w *= q;
  }
  return result;
}

}  // namespace

QuditState membership_apply(const QuditState& state, const OracleSpec& spec) {
  if (spec.noise.kind != NoiseKind::None)
    throw std::invalid_argument("membership oracles are noiseless");
  if (state.q != spec.q || state.m != spec.n + spec.out_digits)
    throw std::invalid_argument("register shape mismatch");

  const uint64_t in_dim = spec.input_dim();
  const uint64_t out_dim = spec.output_dim();
  QuditState result = state;
  // Permutation of basis states: index = x + in_dim * y (little-endian, the
  // output register occupies the high digits).
  for (uint64_t x = 0; x < in_dim; ++x) {
    const uint64_t fx = spec.f(x);
    if (fx >= out_dim) throw std::out_of_range("oracle output out of range");
    if (fx == 0) continue;
    for (uint64_t y = 0; y < out_dim; ++y) {
      const uint64_t yp = digitwise_add(y, fx, spec.q, spec.out_digits);
      result.amps[x + in_dim * yp] = state.amps[x + in_dim * y];
    }
  }
  return result;
}

ExampleDraw example_state_draw(const OracleSpec& spec, Rng& rng) {
  const uint64_t in_dim = spec.input_dim();
  const uint64_t out_dim = spec.output_dim();
  // The cap guards the per-input error sampling of IndependentAdditive;
  // noiseless and shared-flip samples are bounded by the statevector cap.
  if (spec.noise.kind == NoiseKind::IndependentAdditive &&
      in_dim > spec.enumeration_cap)
    throw std::length_error("example state requires q^n <= enumeration cap");

  ExampleDraw draw;
  draw.state = QuditState(spec.q, spec.n + spec.out_digits);
  draw.state.amps.assign(in_dim * out_dim, cdouble(0));
  const double amp = 1.0 / std::sqrt(static_cast<double>(in_dim));

  switch (spec.noise.kind) {
    case NoiseKind::None: {
      for (uint64_t x = 0; x < in_dim; ++x)
        draw.state.amps[x + in_dim * spec.f(x)] = amp;
      break;
    }
    case NoiseKind::BernoulliParity: {
      if (spec.noise.eta < 0.0 || spec.noise.eta >= 0.5)
        throw std::domain_error("parity noise rate must lie in [0, 1/2)");
      // One shared additive flip on the whole sample (e = 1 when it fires).
      draw.parity_flipped = rng.bernoulli(spec.noise.eta);
      const uint64_t e = draw.parity_flipped ? 1 : 0;
      for (uint64_t x = 0; x < in_dim; ++x) {
        const uint64_t fx = digitwise_add(spec.f(x), e, spec.q, spec.out_digits);
        draw.state.amps[x + in_dim * fx] = amp;
      }
      break;
    }
    case NoiseKind::IndependentAdditive: {
      draw.errors.resize(in_dim);
      for (uint64_t x = 0; x < in_dim; ++x) {
        const int64_t e = sample_error(spec.noise.chi, rng);
        draw.errors[x] = e;
        const uint64_t fx = digitwise_add(
            spec.f(x), static_cast<uint64_t>(mod_reduce(e, spec.q)), spec.q,
            spec.out_digits);
        draw.state.amps[x + in_dim * fx] = amp;
      }
      break;
    }
  }
  return draw;
}

QuditState example_state(const OracleSpec& spec, Rng& rng) {
  return example_state_draw(spec, rng).state;
}

}  // namespace qlab
