#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "dense_helpers.hpp"
#include "hfc/pauli.hpp"

using namespace hfc;
using dense::Mat;
using dense::cd;

TEST_CASE("pauli string construction and text round trip") {
  PauliString p = PauliString::parse("X0 Y3 Z5", 6);
  CHECK(p.to_string() == "X0 Y3 Z5");
  CHECK(p.weight() == 3);
  CHECK(p.num_y() == 1);
  CHECK(p.axis_at(0) == 'X');
  CHECK(p.axis_at(1) == 'I');
  CHECK(p.axis_at(3) == 'Y');
  CHECK(p.axis_at(5) == 'Z');
  CHECK(p.support_mask() == ((1u << 0) | (1u << 3) | (1u << 5)));

  CHECK(PauliString::parse("I", 4) == PauliString::identity(4));
  CHECK(PauliString::identity(4).to_string() == "I");
  CHECK(PauliString::single(5, 'Y', 2) == PauliString::parse("Y2", 5));

  // parse rejects duplicate qubits, out-of-range qubits and junk
  CHECK_THROWS(PauliString::parse("X0 Y0", 4));
  CHECK_THROWS(PauliString::parse("X7", 4));
  CHECK_THROWS(PauliString::parse("Q1", 4));
  CHECK_THROWS(PauliString(2, 0b100, 0));  // mask outside register
}

TEST_CASE("round trip through text for random strings") {
  dense::TestRand rand(11);
  for (int trial = 0; trial < 200; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(12));
    const PauliString p = dense::random_pauli(n, rand);
    CHECK(PauliString::parse(p.to_string(), n) == p);
  }
}

TEST_CASE("phase_on matches the dense matrix action on basis states") {
  dense::TestRand rand(12);
  for (int trial = 0; trial < 60; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(5));
    const PauliString p = dense::random_pauli(n, rand);
    const Mat m = dense::pauli_dense(p);
    for (uint64_t basis = 0; basis < (1ull << n); ++basis) {
      const uint64_t target = basis ^ p.x_mask();
      const cd phase = p.phase_on(basis);
      for (uint64_t row = 0; row < (1ull << n); ++row) {
        const cd expected = (row == target) ? phase : cd(0, 0);
        INFO(p.to_string() << " basis " << basis << " row " << row);
        CHECK(std::abs(m(static_cast<Eigen::Index>(row),
                         static_cast<Eigen::Index>(basis)) -
                       expected) < 1e-14);
      }
    }
  }
}

TEST_CASE("multiply reproduces the dense product including phase") {
  dense::TestRand rand(13);
  for (int trial = 0; trial < 300; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(5));
    const PauliString a = dense::random_pauli(n, rand);
    const PauliString b = dense::random_pauli(n, rand);
    const PauliProduct prod = multiply(a, b);
    const Mat lhs = dense::pauli_dense(a) * dense::pauli_dense(b);
    const Mat rhs = prod.phase * dense::pauli_dense(prod.string);
    INFO(a.to_string() << " * " << b.to_string());
    CHECK(dense::max_abs_diff(lhs, rhs) < 1e-13);
  }
}

TEST_CASE("commutation predicates match dense commutators") {
  dense::TestRand rand(14);
  int commuting = 0, anticommuting = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(4));
    const PauliString a = dense::random_pauli(n, rand);
    const PauliString b = dense::random_pauli(n, rand);
    const Mat ma = dense::pauli_dense(a), mb = dense::pauli_dense(b);
    const double comm = dense::max_abs_diff(ma * mb, mb * ma);
    if (a.commutes_with(b)) {
      CHECK(comm < 1e-13);
      ++commuting;
    } else {
      // two Pauli strings either commute or anticommute
      CHECK(dense::max_abs_diff(ma * mb, -(mb * ma)) < 1e-13);
      ++anticommuting;
    }
    if (a.qubitwise_commutes_with(b)) CHECK(a.commutes_with(b));
  }
  CHECK(commuting > 20);
  CHECK(anticommuting > 20);
}

TEST_CASE("qubitwise commutation is per-factor compatibility") {
  const auto p = [](const char* text) { return PauliString::parse(text, 4); };
  CHECK(p("X0 Z1").qubitwise_commutes_with(p("X0 Z3")));
  CHECK_FALSE(p("X0 Z1").qubitwise_commutes_with(p("Y0")));
  // commuting overall but not qubitwise
  const PauliString a = p("X0 X1"), b = p("Y0 Y1");
  CHECK(a.commutes_with(b));
  CHECK_FALSE(a.qubitwise_commutes_with(b));
}

TEST_CASE("pauli sum accumulates, prunes and classifies hermiticity") {
  PauliSum sum(3);
  sum.add(cd(0.5, 0), PauliString::parse("X0", 3));
  sum.add(cd(0.25, 0), PauliString::parse("X0", 3));
  sum.add(cd(1.0, 0), PauliString::parse("Z1 Z2", 3));
  CHECK(sum.size() == 2);
  CHECK(sum.is_hermitian());
  CHECK_FALSE(sum.is_antihermitian());

  sum.add(cd(-0.75, 0), PauliString::parse("X0", 3));  // cancels -> pruned
  CHECK(sum.size() == 1);

  PauliSum anti(3);
  anti.add(cd(0, 0.5), PauliString::parse("Y0 X1", 3));
  CHECK(anti.is_antihermitian());
  CHECK_FALSE(anti.is_hermitian());

  PauliSum zero(3);
  CHECK(zero.empty());
  CHECK(zero.is_hermitian());
  CHECK(zero.is_antihermitian());
}

TEST_CASE("single-excitation generator equals its ladder-operator image") {
  // jw image of a+_a a_i - a+_i a_a over every pair on a 5-mode register
  const uint32_t n = 5;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t a = i + 1; a < n; ++a) {
      const PauliSum sum = jw_single(n, i, a);
      CHECK(sum.is_antihermitian());
      CHECK(sum.size() == 2);
      const Mat lib = dense::pauli_sum_dense(sum, n);
      const Mat ladder = dense::create(n, a) * dense::annihilate(n, i) -
                         dense::create(n, i) * dense::annihilate(n, a);
      INFO("i=" << i << " a=" << a);
      CHECK(dense::max_abs_diff(lib, ladder) < 1e-13);
    }
  }
}

TEST_CASE("double-excitation generator equals its ladder-operator image") {
  const uint32_t n = 6;
  dense::TestRand rand(15);
  int checked = 0;
  for (uint32_t i = 0; i < n; ++i)
    for (uint32_t j = i + 1; j < n; ++j)
      for (uint32_t a = j + 1; a < n; ++a)
        for (uint32_t b = a + 1; b < n; ++b) {
          const PauliSum sum = jw_double(n, i, j, a, b);
          CHECK(sum.is_antihermitian());
          CHECK(sum.size() == 8);
          const Mat lib = dense::pauli_sum_dense(sum, n);
          const Mat t = dense::create(n, b) * dense::create(n, a) *
                        dense::annihilate(n, j) * dense::annihilate(n, i);
          const Mat ladder = t - t.adjoint();
          INFO("i=" << i << " j=" << j << " a=" << a << " b=" << b);
          CHECK(dense::max_abs_diff(lib, ladder) < 1e-13);
          ++checked;
        }
  CHECK(checked == 15);
}

TEST_CASE("ladder images inherit fermionic algebra identities") {
  // [T_ia, T_jb] for disjoint index sets must vanish
  const uint32_t n = 6;
  const Mat t1 = dense::pauli_sum_dense(jw_single(n, 0, 1), n);
  const Mat t2 = dense::pauli_sum_dense(jw_single(n, 2, 4), n);
  CHECK(dense::max_abs_diff(t1 * t2, t2 * t1) < 1e-13);
}

TEST_CASE("strip_z_chains keeps the XY skeleton and deduplicates") {
  const uint32_t n = 6;
  PauliSum in(n);
  in.add(cd(0, 0.5), PauliString::parse("Y0 Z1 Z2 X3", n));
  in.add(cd(0, -0.5), PauliString::parse("Y0 X3", n));  // duplicate stripped
  in.add(cd(0, 0.25), PauliString::parse("X1 Z2 Z3 Z4 Y5", n));
  in.add(cd(1.0, 0), PauliString::parse("Z0 Z2 X4", n));  // lone Zs dropped
  const std::vector<PauliString> out = strip_z_chains(in);
  CHECK(out.size() == 3);
  CHECK(std::is_sorted(out.begin(), out.end()));
  const std::set<PauliString> expect = {PauliString::parse("Y0 X3", n),
                                        PauliString::parse("X1 Y5", n),
                                        PauliString::parse("X4", n)};
  CHECK(std::set<PauliString>(out.begin(), out.end()) == expect);
  // every output string has z-mask inside its x-mask (pure X/Y factors)
  for (const PauliString& p : out) CHECK((p.z_mask() & ~p.x_mask()) == 0);
}

TEST_CASE("stripping the excitation generators keeps only X/Y factors") {
  const uint32_t n = 6;
  const auto stripped = strip_z_chains(jw_double(n, 0, 1, 2, 4));
  CHECK(stripped.size() == 8);
  for (const PauliString& p : stripped) {
    CHECK((p.z_mask() & ~p.x_mask()) == 0);
    CHECK(p.support_mask() == ((1u << 0) | (1u << 1) | (1u << 2) | (1u << 4)));
  }
}
