#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "hfc/histogram.hpp"
#include "hfc/pauli.hpp"
#include "hfc/rng.hpp"

namespace hfc {

/// Dense complex state vector on n <= 24 qubits.
///
/// Basis-index convention: bit q of the index is the occupation of qubit q,
/// and bitstrings render qubit 0 leftmost ("110100" is index 0b001011 = 11).
class StateVector {
 public:
  explicit StateVector(uint32_t n_qubits);
  static StateVector basis_state(uint32_t n_qubits, uint64_t index);

  uint32_t n_qubits() const { return n_; }
  size_t size() const { return amps_.size(); }
  cd amplitude(uint64_t index) const { return amps_[index]; }
  const std::vector<cd>& amplitudes() const { return amps_; }
  std::vector<cd>& amplitudes() { return amps_; }

  void apply_x(uint32_t qubit);
  void apply_h(uint32_t qubit);
  /// S-dagger = diag(1, -i).
  void apply_sdg(uint32_t qubit);
  /// In-place |psi> -> P|psi>.
  void apply_pauli(const PauliString& p);
  /// In-place |psi> -> exp(-i theta/2 P)|psi>.
  void apply_pauli_rotation(const PauliString& p, double theta);

  /// <psi|P|psi>; exactly real up to rounding for a Hermitian Pauli string.
  double expectation(const PauliString& p) const;
  cd expectation(const PauliSum& sum) const;
  /// Returns (sum of terms) |psi> as a new vector.
  StateVector apply_sum(const PauliSum& sum) const;

  double norm() const;
  /// Probability of each basis outcome.
  std::vector<double> outcome_probabilities() const;

  /// Draws `shots` basis outcomes with a fresh Rng(seed); one uniform deviate
  /// is consumed per shot.
  CountsHistogram sample(uint64_t shots, uint64_t seed) const;

  /// Writes "bitstring real imag" rows (qubit 0 leftmost) for every
  /// amplitude above the zero threshold, in ascending index order.
  void dump(std::ostream& out) const;

 private:
  uint32_t n_;
  std::vector<cd> amps_;
};

cd inner_product(const StateVector& bra, const StateVector& ket);

/// Inverse-CDF sampler over a fixed outcome distribution; each draw consumes
/// exactly one uniform deviate and costs one binary search.
class Sampler {
 public:
  explicit Sampler(const StateVector& state);
  explicit Sampler(const std::vector<double>& probabilities);
  uint64_t draw(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

/// Applies the single-qubit rotations that map `p` onto a Z-type string:
/// H on X factors, S-dagger then H on Y factors.
void apply_measurement_basis(StateVector& state, const PauliString& p);

/// Mean of (-1)^popcount(outcome & parity_mask) over a histogram /
/// probability vector (which may be quasi-probabilities).
double parity_mean(const CountsHistogram& counts, uint64_t parity_mask);
double parity_mean(const std::vector<double>& probabilities,
                   uint64_t parity_mask);

struct PauliMeasurement {
  double mean;             // +-1 sample mean of the rotated-basis parity
  CountsHistogram counts;  // post-rotation Z-basis outcomes
};

/// Rotates a copy of `state` into the measurement basis of `p`, samples
/// `shots` Z-basis outcomes, and averages the +-1 eigenvalues.
PauliMeasurement measure_pauli(const StateVector& state, const PauliString& p,
                               uint64_t shots, uint64_t seed);

}  // namespace hfc
