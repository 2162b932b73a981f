#include "hfc/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace hfc {

namespace {

cd i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

void check_qubit_count(uint32_t n) {
  if (n == 0 || n > 64) {
    throw std::invalid_argument("qubit count must be in [1, 64], got " +
                                std::to_string(n));
  }
}

}  // namespace

PauliString::PauliString(uint32_t n_qubits, uint64_t x_mask, uint64_t z_mask)
    : n_(n_qubits), x_(x_mask), z_(z_mask) {
  check_qubit_count(n_qubits);
  const uint64_t valid = (n_qubits == 64) ? ~0ull : ((1ull << n_qubits) - 1);
  if ((x_mask | z_mask) & ~valid) {
    throw std::invalid_argument("Pauli mask addresses qubits outside the register");
  }
}

PauliString PauliString::identity(uint32_t n_qubits) {
  return PauliString(n_qubits, 0, 0);
}

PauliString PauliString::single(uint32_t n_qubits, char axis, uint32_t qubit) {
  if (qubit >= n_qubits) {
    throw std::invalid_argument("qubit index out of range");
  }
  const uint64_t bit = 1ull << qubit;
  switch (axis) {
    case 'X': return PauliString(n_qubits, bit, 0);
    case 'Y': return PauliString(n_qubits, bit, bit);
    case 'Z': return PauliString(n_qubits, 0, bit);
    default:
      throw std::invalid_argument(std::string("unknown Pauli axis '") + axis +
                                  "'");
  }
}

PauliString PauliString::parse(const std::string& text, uint32_t n_qubits) {
  check_qubit_count(n_qubits);
  uint64_t x = 0, z = 0, seen = 0;
  std::istringstream in(text);
  std::string token;
  bool any = false;
  while (in >> token) {
    any = true;
    if (token == "I") continue;
    const char axis = token[0];
    if (token.size() < 2 ||
        (axis != 'X' && axis != 'Y' && axis != 'Z' && axis != 'I')) {
      throw std::invalid_argument("bad Pauli token '" + token + "'");
    }
    size_t pos = 0;
    unsigned long q = 0;
    try {
      q = std::stoul(token.substr(1), &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad Pauli token '" + token + "'");
    }
    if (pos + 1 != token.size()) {
      throw std::invalid_argument("bad Pauli token '" + token + "'");
    }
    if (q >= n_qubits) {
      throw std::invalid_argument("qubit index " + std::to_string(q) +
                                  " out of range for " +
                                  std::to_string(n_qubits) + " qubits");
    }
    const uint64_t bit = 1ull << q;
    if (seen & bit) {
      throw std::invalid_argument("duplicate qubit " + std::to_string(q) +
                                  " in Pauli text");
    }
    seen |= bit;
    if (axis == 'X' || axis == 'Y') x |= bit;
    if (axis == 'Z' || axis == 'Y') z |= bit;
  }
  if (!any) {
    throw std::invalid_argument("empty Pauli text");
  }
  return PauliString(n_qubits, x, z);
}

std::vector<uint32_t> PauliString::support() const {
  std::vector<uint32_t> out;
  for (uint32_t q = 0; q < n_; ++q) {
    if ((support_mask() >> q) & 1) out.push_back(q);
  }
  return out;
}

int PauliString::weight() const { return std::popcount(support_mask()); }

int PauliString::num_y() const { return std::popcount(x_ & z_); }

char PauliString::axis_at(uint32_t qubit) const {
  if (qubit >= n_) throw std::invalid_argument("qubit index out of range");
  const bool xb = (x_ >> qubit) & 1, zb = (z_ >> qubit) & 1;
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

std::string PauliString::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  for (uint32_t q = 0; q < n_; ++q) {
    const char a = axis_at(q);
    if (a == 'I') continue;
    if (!out.empty()) out += ' ';
    out += a;
    out += std::to_string(q);
  }
  return out;
}

cd PauliString::phase_on(uint64_t basis_index) const {
  const int sign = std::popcount(basis_index & z_) & 1 ? -1 : 1;
  return i_pow(num_y()) * static_cast<double>(sign);
}

bool PauliString::commutes_with(const PauliString& o) const {
  const int anti = (std::popcount(x_ & o.z_) + std::popcount(z_ & o.x_)) & 1;
  return anti == 0;
}

bool PauliString::qubitwise_commutes_with(const PauliString& o) const {
  const uint64_t both = support_mask() & o.support_mask();
  const uint64_t differ = (x_ ^ o.x_) | (z_ ^ o.z_);
  return (both & differ) == 0;
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw std::invalid_argument("Pauli strings act on different registers");
  }
  PauliString r(a.n_qubits(), a.x_mask() ^ b.x_mask(), a.z_mask() ^ b.z_mask());
  const int k = a.num_y() + b.num_y() - r.num_y();
  cd phase = i_pow(k);
  if (std::popcount(a.z_mask() & b.x_mask()) & 1) phase = -phase;
  return {phase, r};
}

void PauliSum::add(cd coeff, const PauliString& string) {
  if (string.n_qubits() != n_) {
    throw std::invalid_argument("term register size mismatch");
  }
  auto [it, inserted] = terms_.try_emplace(string, coeff);
  if (!inserted) it->second += coeff;
  if (std::abs(it->second) <= kZeroTol) terms_.erase(it);
}

void PauliSum::add(const PauliSum& other) {
  if (other.n_ != n_) {
    throw std::invalid_argument("sum register size mismatch");
  }
  for (const auto& [s, c] : other.terms_) add(c, s);
}

std::vector<PauliTerm> PauliSum::terms() const {
  std::vector<PauliTerm> out;
  out.reserve(terms_.size());
  for (const auto& [s, c] : terms_) out.push_back({c, s});
  return out;
}

bool PauliSum::is_hermitian() const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.imag()) > kZeroTol) return false;
    (void)s;
  }
  return true;
}

bool PauliSum::is_antihermitian() const {
  for (const auto& [s, c] : terms_) {
    if (std::abs(c.real()) > kZeroTol) return false;
    (void)s;
  }
  return true;
}

namespace {

uint64_t z_chain_mask(uint32_t lo_exclusive, uint32_t hi_exclusive) {
  uint64_t m = 0;
  for (uint32_t q = lo_exclusive + 1; q < hi_exclusive; ++q) m |= 1ull << q;
  return m;
}

// Builds the string axis_i axis_j axis_a axis_b (each 'X' or 'Y') on the
// given qubits, with an extra pure-Z chain on `chain`.
PauliString four_factor(uint32_t n, uint64_t chain, const char axes[4],
                        uint32_t qi, uint32_t qj, uint32_t qa, uint32_t qb) {
  const uint32_t qs[4] = {qi, qj, qa, qb};
  uint64_t x = 0, z = chain;
  for (int k = 0; k < 4; ++k) {
    const uint64_t bit = 1ull << qs[k];
    x |= bit;
    if (axes[k] == 'Y') z |= bit;
  }
  return PauliString(n, x, z);
}

}  // namespace

PauliSum jw_single(uint32_t n_qubits, uint32_t i, uint32_t a) {
  if (!(a > i) || a >= n_qubits) {
    throw std::invalid_argument("jw_single requires n > a > i >= 0");
  }
  const uint64_t chain = z_chain_mask(i, a);
  const uint64_t bi = 1ull << i, ba = 1ull << a;
  PauliSum sum(n_qubits);
  // (i/2) Z.. (Y_i X_a)
  sum.add(cd(0, 0.5), PauliString(n_qubits, bi | ba, chain | bi));
  // -(i/2) Z.. (X_i Y_a)
  sum.add(cd(0, -0.5), PauliString(n_qubits, bi | ba, chain | ba));
  return sum;
}

PauliSum jw_double(uint32_t n_qubits, uint32_t i, uint32_t j, uint32_t a,
                   uint32_t b) {
  if (!(b > a && a > j && j > i) || b >= n_qubits) {
    throw std::invalid_argument("jw_double requires n > b > a > j > i >= 0");
  }
  const uint64_t chain = z_chain_mask(i, j) | z_chain_mask(a, b);
  struct Entry {
    char axes[4];
    double sign;
  };
  static const Entry entries[8] = {
      {{'X', 'X', 'Y', 'X'}, +1}, {{'Y', 'X', 'Y', 'Y'}, +1},
      {{'X', 'Y', 'Y', 'Y'}, +1}, {{'X', 'X', 'X', 'Y'}, +1},
      {{'Y', 'X', 'X', 'X'}, -1}, {{'X', 'Y', 'X', 'X'}, -1},
      {{'Y', 'Y', 'Y', 'X'}, -1}, {{'Y', 'Y', 'X', 'Y'}, -1},
  };
  PauliSum sum(n_qubits);
  for (const auto& e : entries) {
    sum.add(cd(0, 0.125 * e.sign),
            four_factor(n_qubits, chain, e.axes, i, j, a, b));
  }
  return sum;
}

std::vector<PauliString> strip_z_chains(const PauliSum& sum) {
  std::vector<PauliString> out;
  for (const auto& term : sum.terms()) {
    const PauliString& s = term.string;
    // Qubits whose factor is exactly Z (z bit set, x bit clear) become I.
    out.emplace_back(s.n_qubits(), s.x_mask(), s.z_mask() & s.x_mask());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace hfc
