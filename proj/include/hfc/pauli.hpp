#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace hfc {

using cd = std::complex<double>;

/// Coefficients and amplitudes with magnitude at or below this threshold are
/// treated as exact zeros when pruning sums and printing states.
inline constexpr double kZeroTol = 1e-14;

/// A Pauli operator on up to 64 qubits in symplectic encoding.
///
/// Bit q of `x_mask` / `z_mask` records an X / Z factor on qubit q; a qubit
/// with both bits set carries Y.  The encoded operator is the Hermitian
/// tensor product of I/X/Y/Z factors (each Y contributes its usual factor of
/// i relative to XZ), so eigenvalues are always +-1.
class PauliString {
 public:
  PauliString() = default;
  PauliString(uint32_t n_qubits, uint64_t x_mask, uint64_t z_mask);

  static PauliString identity(uint32_t n_qubits);
  /// Single-qubit factor, axis in {'X','Y','Z'}.
  static PauliString single(uint32_t n_qubits, char axis, uint32_t qubit);
  /// Parses "X0 Y3 Z5" (any token order, one factor per qubit) or "I".
  static PauliString parse(const std::string& text, uint32_t n_qubits);

  uint32_t n_qubits() const { return n_; }
  uint64_t x_mask() const { return x_; }
  uint64_t z_mask() const { return z_; }
  /// Qubits carrying a non-identity factor.
  uint64_t support_mask() const { return x_ | z_; }
  std::vector<uint32_t> support() const;
  int weight() const;
  /// Number of Y factors.
  int num_y() const;
  bool is_identity() const { return (x_ | z_) == 0; }
  char axis_at(uint32_t qubit) const;
  std::string to_string() const;

  /// Amplitude factor c such that P|m> = c |m XOR x_mask>.
  cd phase_on(uint64_t basis_index) const;

  /// True when the two operators commute as matrices.
  bool commutes_with(const PauliString& other) const;
  /// True when the factors commute qubit by qubit (shared measurement basis).
  bool qubitwise_commutes_with(const PauliString& other) const;

  friend auto operator<=>(const PauliString&, const PauliString&) = default;

 private:
  uint32_t n_ = 0;
  uint64_t x_ = 0;
  uint64_t z_ = 0;
};

/// Result of multiplying two Pauli strings: phase * string, phase in
/// {1, i, -1, -i}.
struct PauliProduct {
  cd phase;
  PauliString string;
};

PauliProduct multiply(const PauliString& a, const PauliString& b);

inline bool qubitwise_commutes(const PauliString& a, const PauliString& b) {
  return a.qubitwise_commutes_with(b);
}

struct PauliTerm {
  cd coeff;
  PauliString string;
};

/// A complex linear combination of Pauli strings on a fixed register.
/// Terms are kept merged and ordered; coefficients below kZeroTol are pruned.
class PauliSum {
 public:
  explicit PauliSum(uint32_t n_qubits) : n_(n_qubits) {}

  uint32_t n_qubits() const { return n_; }
  void add(cd coeff, const PauliString& string);
  void add(const PauliSum& other);
  /// Terms in deterministic (symplectic-key) order, pruned.
  std::vector<PauliTerm> terms() const;
  size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// True when the sum equals its Hermitian conjugate.
  bool is_hermitian() const;
  /// True when the sum equals minus its Hermitian conjugate.
  bool is_antihermitian() const;

 private:
  uint32_t n_;
  std::map<PauliString, cd> terms_;
};

/// Jordan-Wigner image of the single-excitation generator
/// a+_a a_i - h.c. (requires a > i):
///   (i/2) Z_{i+1}..Z_{a-1} (Y_i X_a - X_i Y_a).
PauliSum jw_single(uint32_t n_qubits, uint32_t i, uint32_t a);

/// Jordan-Wigner image of the double-excitation generator
/// a+_b a+_a a_j a_i - h.c. (requires b > a > j > i):
///   (i/8) Z_{i+1}..Z_{j-1} Z_{a+1}..Z_{b-1}
///   ( XXYX + YXYY + XYYY + XXXY - YXXX - XYXX - YYYX - YYXY )
/// with the four factors acting on (i, j, a, b).
PauliSum jw_double(uint32_t n_qubits, uint32_t i, uint32_t j, uint32_t a,
                   uint32_t b);

/// Deletes every pure-Z factor from every term and returns the distinct
/// surviving strings in deterministic order (coefficients are dropped).
/// Y factors keep their Z component; only lone Z factors are removed.
std::vector<PauliString> strip_z_chains(const PauliSum& sum);

}  // namespace hfc
