#include "hfc/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hfc {

namespace {

constexpr uint32_t kMaxQubits = 24;

void check_register(uint32_t n) {
  if (n == 0 || n > kMaxQubits) {
    throw std::invalid_argument("state vector supports 1..24 qubits, got " +
                                std::to_string(n));
  }
}

cd i_pow_y(int ny) {
  switch (ny & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

StateVector::StateVector(uint32_t n_qubits)
    : n_(n_qubits), amps_(size_t(1) << n_qubits, cd(0, 0)) {
  check_register(n_qubits);
  amps_[0] = 1.0;
}

StateVector StateVector::basis_state(uint32_t n_qubits, uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.size()) {
    throw std::invalid_argument("basis index out of range");
  }
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

void StateVector::apply_x(uint32_t qubit) {
  if (qubit >= n_) throw std::invalid_argument("qubit index out of range");
  const uint64_t bit = 1ull << qubit;
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
  }
}

void StateVector::apply_h(uint32_t qubit) {
  if (qubit >= n_) throw std::invalid_argument("qubit index out of range");
  const uint64_t bit = 1ull << qubit;
  const double inv_sqrt2 = 0.7071067811865475244;
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) continue;
    const cd a0 = amps_[i], a1 = amps_[i | bit];
    amps_[i] = (a0 + a1) * inv_sqrt2;
    amps_[i | bit] = (a0 - a1) * inv_sqrt2;
  }
}

void StateVector::apply_sdg(uint32_t qubit) {
  if (qubit >= n_) throw std::invalid_argument("qubit index out of range");
  const uint64_t bit = 1ull << qubit;
  const cd minus_i(0, -1);
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    if (i & bit) amps_[i] *= minus_i;
  }
}

void StateVector::apply_pauli(const PauliString& p) {
  if (p.n_qubits() != n_) throw std::invalid_argument("register size mismatch");
  const uint64_t x = p.x_mask(), z = p.z_mask();
  const cd iy = i_pow_y(p.num_y());
  if (x == 0) {
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      if (std::popcount(i & z) & 1) amps_[i] = -amps_[i];
    }
    return;
  }
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    const uint64_t j = i ^ x;
    if (j < i) continue;
    // P|i> = w(i)|j>, w(i) = iy * (-1)^popcount(i & z).
    const cd wi = (std::popcount(i & z) & 1) ? -iy : iy;
    const cd wj = (std::popcount(j & z) & 1) ? -iy : iy;
    const cd ai = amps_[i];
    amps_[i] = wj * amps_[j];
    amps_[j] = wi * ai;
  }
}

void StateVector::apply_pauli_rotation(const PauliString& p, double theta) {
  if (p.n_qubits() != n_) throw std::invalid_argument("register size mismatch");
  const uint64_t x = p.x_mask(), z = p.z_mask();
  const double c = std::cos(0.5 * theta), s = std::sin(0.5 * theta);
  if (x == 0) {
    const cd f_plus(c, -s), f_minus(c, s);  // exp(-i theta/2 * (+-1))
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      amps_[i] *= (std::popcount(i & z) & 1) ? f_minus : f_plus;
    }
    return;
  }
  const cd iy = i_pow_y(p.num_y());
  const cd mis(0, -1);  // -i factor on the sine branch
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    const uint64_t j = i ^ x;
    if (j < i) continue;
    const cd wi = (std::popcount(i & z) & 1) ? -iy : iy;
    const cd wj = (std::popcount(j & z) & 1) ? -iy : iy;
    const cd ai = amps_[i], aj = amps_[j];
    amps_[i] = c * ai + mis * s * (wj * aj);
    amps_[j] = c * aj + mis * s * (wi * ai);
  }
}

double StateVector::expectation(const PauliString& p) const {
  if (p.n_qubits() != n_) throw std::invalid_argument("register size mismatch");
  const uint64_t x = p.x_mask(), z = p.z_mask();
  const cd iy = i_pow_y(p.num_y());
  cd acc(0, 0);
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    const cd wi = (std::popcount(i & z) & 1) ? -iy : iy;
    acc += std::conj(amps_[i ^ x]) * wi * amps_[i];
  }
  return acc.real();
}

cd StateVector::expectation(const PauliSum& sum) const {
  if (sum.n_qubits() != n_) throw std::invalid_argument("register size mismatch");
  cd acc(0, 0);
  for (const auto& term : sum.terms()) {
    const uint64_t x = term.string.x_mask(), z = term.string.z_mask();
    const cd iy = i_pow_y(term.string.num_y());
    cd t(0, 0);
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      const cd wi = (std::popcount(i & z) & 1) ? -iy : iy;
      t += std::conj(amps_[i ^ x]) * wi * amps_[i];
    }
    acc += term.coeff * t;
  }
  return acc;
}

StateVector StateVector::apply_sum(const PauliSum& sum) const {
  if (sum.n_qubits() != n_) throw std::invalid_argument("register size mismatch");
  StateVector out(n_);
  std::fill(out.amps_.begin(), out.amps_.end(), cd(0, 0));
  for (const auto& term : sum.terms()) {
    const uint64_t x = term.string.x_mask(), z = term.string.z_mask();
    const cd iy = i_pow_y(term.string.num_y());
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      const cd wi = (std::popcount(i & z) & 1) ? -iy : iy;
      out.amps_[i ^ x] += term.coeff * wi * amps_[i];
    }
  }
  return out;
}

double StateVector::norm() const {
  double acc = 0;
  for (const cd& a : amps_) acc += std::norm(a);
  return std::sqrt(acc);
}

std::vector<double> StateVector::outcome_probabilities() const {
  std::vector<double> p(amps_.size());
  for (size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
  return p;
}

CountsHistogram StateVector::sample(uint64_t shots, uint64_t seed) const {
  Rng rng(seed);
  Sampler sampler(*this);
  CountsHistogram hist(n_);
  for (uint64_t s = 0; s < shots; ++s) hist.record(sampler.draw(rng));
  return hist;
}

void StateVector::dump(std::ostream& out) const {
  char line[96];
  for (uint64_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i]) <= kZeroTol) continue;
    std::snprintf(line, sizeof(line), " %.17g %.17g\n", amps_[i].real(),
                  amps_[i].imag());
    out << bitstring(i, n_) << line;
  }
}

cd inner_product(const StateVector& bra, const StateVector& ket) {
  if (bra.n_qubits() != ket.n_qubits()) {
    throw std::invalid_argument("register size mismatch");
  }
  cd acc(0, 0);
  for (size_t i = 0; i < bra.size(); ++i) {
    acc += std::conj(bra.amplitudes()[i]) * ket.amplitudes()[i];
  }
  return acc;
}

Sampler::Sampler(const StateVector& state)
    : Sampler(state.outcome_probabilities()) {}

Sampler::Sampler(const std::vector<double>& probabilities) {
  cdf_.resize(probabilities.size());
  double acc = 0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += std::max(0.0, probabilities[i]);
    cdf_[i] = acc;
  }
  if (acc <= 0) throw std::invalid_argument("distribution has no mass");
}

uint64_t Sampler::draw(Rng& rng) const {
  const double u = rng.uniform() * cdf_.back();
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<uint64_t>(
      std::min<ptrdiff_t>(it - cdf_.begin(), cdf_.size() - 1));
}

void apply_measurement_basis(StateVector& state, const PauliString& p) {
  for (uint32_t q = 0; q < p.n_qubits(); ++q) {
    switch (p.axis_at(q)) {
      case 'X':
        state.apply_h(q);
        break;
      case 'Y':
        state.apply_sdg(q);
        state.apply_h(q);
        break;
      default:
        break;
    }
  }
}

double parity_mean(const CountsHistogram& counts, uint64_t parity_mask) {
  if (counts.total == 0) throw std::invalid_argument("empty histogram");
  int64_t acc = 0;
  for (size_t i = 0; i < counts.counts.size(); ++i) {
    const int64_t c = static_cast<int64_t>(counts.counts[i]);
    acc += (std::popcount(uint64_t(i) & parity_mask) & 1) ? -c : c;
  }
  return static_cast<double>(acc) / static_cast<double>(counts.total);
}

double parity_mean(const std::vector<double>& probabilities,
                   uint64_t parity_mask) {
  double acc = 0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    const double p = probabilities[i];
    acc += (std::popcount(uint64_t(i) & parity_mask) & 1) ? -p : p;
  }
  return acc;
}

PauliMeasurement measure_pauli(const StateVector& state, const PauliString& p,
                               uint64_t shots, uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("shots must be positive");
  StateVector rotated = state;
  apply_measurement_basis(rotated, p);
  CountsHistogram counts = rotated.sample(shots, seed);
  return {parity_mean(counts, p.support_mask()), std::move(counts)};
}

}  // namespace hfc
