#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hfc {

/// Render a basis index as a bitstring with qubit 0 leftmost.
inline std::string bitstring(uint64_t index, uint32_t n_qubits) {
  std::string s(n_qubits, '0');
  for (uint32_t q = 0; q < n_qubits; ++q) {
    if ((index >> q) & 1) s[q] = '1';
  }
  return s;
}

/// Parse a bitstring with qubit 0 leftmost back into a basis index.
inline uint64_t parse_bitstring(const std::string& s) {
  uint64_t index = 0;
  for (size_t q = 0; q < s.size(); ++q) {
    if (s[q] == '1') index |= 1ull << q;
  }
  return index;
}

/// Dense measurement-outcome counts over all 2^n basis states (n <= 24).
struct CountsHistogram {
  uint32_t n_qubits = 0;
  std::vector<uint64_t> counts;  // size 2^n_qubits
  uint64_t total = 0;

  explicit CountsHistogram(uint32_t n = 1)
      : n_qubits(n), counts(size_t(1) << n, 0) {}

  void record(uint64_t outcome, uint64_t times = 1) {
    counts[outcome] += times;
    total += times;
  }

  /// Normalized probabilities; total must be nonzero.
  std::vector<double> probabilities() const {
    std::vector<double> p(counts.size(), 0.0);
    if (total == 0) return p;
    const double inv = 1.0 / static_cast<double>(total);
    for (size_t i = 0; i < counts.size(); ++i) {
      p[i] = static_cast<double>(counts[i]) * inv;
    }
    return p;
  }

  bool operator==(const CountsHistogram& o) const {
    return n_qubits == o.n_qubits && total == o.total && counts == o.counts;
  }
};

}  // namespace hfc
