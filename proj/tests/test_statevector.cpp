#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <sstream>

#include "dense_helpers.hpp"
#include "hfc/statevector.hpp"

using namespace hfc;
using dense::Mat;
using dense::Vec;

TEST_CASE("basis states and single-qubit gates match dense matrices") {
  StateVector psi = StateVector::basis_state(3, 0b101);
  CHECK(std::abs(psi.amplitude(0b101) - cd(1, 0)) < 1e-15);
  CHECK(psi.norm() == Catch::Approx(1.0));

  dense::TestRand rand(21);
  const Mat h2 = [] {
    Mat m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
  }();
  const Mat sdg = [] {
    Mat m(2, 2);
    m << 1, 0, 0, cd(0, -1);
    return m;
  }();

  for (int trial = 0; trial < 40; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(4));
    const uint32_t q = static_cast<uint32_t>(rand.below(n));
    StateVector state = dense::random_state(n, rand);
    Vec v = dense::to_dense(state);

    StateVector sx = state;
    sx.apply_x(q);
    CHECK(dense::max_abs_diff(dense::to_dense(sx),
                              dense::op_on(n, q, dense::pauli_x()) * v) <
          1e-14);

    StateVector sh = state;
    sh.apply_h(q);
    CHECK(dense::max_abs_diff(dense::to_dense(sh), dense::op_on(n, q, h2) * v) <
          1e-14);

    StateVector ss = state;
    ss.apply_sdg(q);
    CHECK(dense::max_abs_diff(dense::to_dense(ss),
                              dense::op_on(n, q, sdg) * v) < 1e-14);
  }
}

TEST_CASE("apply_pauli matches the dense operator") {
  dense::TestRand rand(22);
  for (int trial = 0; trial < 80; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(5));
    const PauliString p = dense::random_pauli(n, rand);
    StateVector state = dense::random_state(n, rand);
    const Vec expected = dense::pauli_dense(p) * dense::to_dense(state);
    state.apply_pauli(p);
    INFO(p.to_string());
    CHECK(dense::max_abs_diff(dense::to_dense(state), expected) < 1e-13);
  }
}

TEST_CASE("apply_pauli_rotation matches cos/sin closed form of the dense "
          "exponential") {
  dense::TestRand rand(23);
  for (int trial = 0; trial < 80; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(5));
    const PauliString p = dense::random_pauli(n, rand);
    const double theta = 4.0 * (rand.uniform() - 0.5) * 3.14159265358979;
    StateVector state = dense::random_state(n, rand);
    const Vec v = dense::to_dense(state);

    // exp(-i theta/2 P) = cos(theta/2) I - i sin(theta/2) P  (P^2 = I)
    const Mat dense_p = dense::pauli_dense(p);
    const Mat rot = std::cos(theta / 2) * dense::identity(1u << n) -
                    cd(0, 1) * std::sin(theta / 2) * dense_p;
    // cross-check the closed form against a brute-force exponential
    if (trial < 10) {
      const Mat expm = dense::expm_taylor(cd(0, -theta / 2) * dense_p);
      REQUIRE(dense::max_abs_diff(rot, expm) < 1e-12);
    }

    state.apply_pauli_rotation(p, theta);
    INFO(p.to_string() << " theta=" << theta);
    CHECK(dense::max_abs_diff(dense::to_dense(state), rot * v) < 1e-13);
    CHECK(state.norm() == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("rotation by the identity string is a global phase") {
  dense::TestRand rand(24);
  StateVector state = dense::random_state(3, rand);
  const Vec before = dense::to_dense(state);
  state.apply_pauli_rotation(PauliString::identity(3), 1.3);
  const cd phase = std::exp(cd(0, -1.3 / 2));
  CHECK(dense::max_abs_diff(dense::to_dense(state), phase * before) < 1e-14);
}

TEST_CASE("expectation values match dense quadratic forms") {
  dense::TestRand rand(25);
  for (int trial = 0; trial < 60; ++trial) {
    const uint32_t n = 1 + static_cast<uint32_t>(rand.below(5));
    const PauliString p = dense::random_pauli(n, rand);
    const StateVector state = dense::random_state(n, rand);
    const Vec v = dense::to_dense(state);
    const cd expected = (v.adjoint() * dense::pauli_dense(p) * v)(0, 0);
    CHECK(std::abs(state.expectation(p) - expected.real()) < 1e-13);
    CHECK(std::abs(expected.imag()) < 1e-13);  // Hermitian string
  }

  // sums: linearity against the dense matrix
  const uint32_t n = 4;
  PauliSum sum(n);
  sum.add(cd(0.7, 0), PauliString::parse("X0 Z2", n));
  sum.add(cd(-0.2, 0.4), PauliString::parse("Y1 Y3", n));
  sum.add(cd(0, -1.1), PauliString::parse("Z0 Z1 Z2 Z3", n));
  const StateVector state = dense::random_state(n, rand);
  const Vec v = dense::to_dense(state);
  const Mat m = dense::pauli_sum_dense(sum, n);
  const cd expected = (v.adjoint() * m * v)(0, 0);
  CHECK(std::abs(state.expectation(sum) - expected) < 1e-13);

  const StateVector applied = state.apply_sum(sum);
  CHECK(dense::max_abs_diff(dense::to_dense(applied), m * v) < 1e-13);
}

TEST_CASE("inner products are conjugate-symmetric and normalized") {
  dense::TestRand rand(26);
  const StateVector a = dense::random_state(4, rand);
  const StateVector b = dense::random_state(4, rand);
  const cd ab = inner_product(a, b);
  const cd ba = inner_product(b, a);
  CHECK(std::abs(ab - std::conj(ba)) < 1e-14);
  CHECK(std::abs(inner_product(a, a).real() - 1.0) < 1e-13);
}

TEST_CASE("outcome probabilities sum to one and drive sampling") {
  dense::TestRand rand(27);
  const StateVector state = dense::random_state(3, rand);
  const auto probs = state.outcome_probabilities();
  double total = 0.0;
  for (double p : probs) total += p;
  CHECK(total == Catch::Approx(1.0).margin(1e-12));

  const uint64_t shots = 200000;
  const CountsHistogram hist = state.sample(shots, 91);
  CHECK(hist.total == shots);
  for (size_t i = 0; i < probs.size(); ++i) {
    const double freq = static_cast<double>(hist.counts[i]) / shots;
    const double sigma =
        std::sqrt(std::max(probs[i] * (1 - probs[i]), 1e-12) / shots);
    INFO("outcome " << i);
    CHECK(std::abs(freq - probs[i]) < 5 * sigma + 1e-4);
  }

  // same seed -> identical histogram; different seed -> different draws
  CHECK(state.sample(5000, 7) == state.sample(5000, 7));
  CHECK_FALSE(state.sample(5000, 7) == state.sample(5000, 8));
}

TEST_CASE("sampler draws follow the fixed distribution") {
  const std::vector<double> probs = {0.125, 0.5, 0.0, 0.375};
  Sampler sampler(probs);
  Rng rng(123);
  std::vector<uint64_t> counts(4, 0);
  const int draws = 400000;
  for (int i = 0; i < draws; ++i) ++counts[sampler.draw(rng)];
  CHECK(counts[2] == 0);  // zero-probability outcome never drawn
  for (size_t i = 0; i < probs.size(); ++i) {
    const double freq = static_cast<double>(counts[i]) / draws;
    CHECK(std::abs(freq - probs[i]) < 5e-3);
  }
}

TEST_CASE("parity means agree between histograms and probability vectors") {
  dense::TestRand rand(28);
  const StateVector state = dense::random_state(4, rand);
  const auto probs = state.outcome_probabilities();
  const uint64_t mask = 0b0101;

  double expected = 0.0;
  for (size_t m = 0; m < probs.size(); ++m) {
    expected += (std::popcount(m & mask) % 2 == 0 ? 1.0 : -1.0) * probs[m];
  }
  CHECK(parity_mean(probs, mask) == Catch::Approx(expected).margin(1e-13));

  const CountsHistogram hist = state.sample(300000, 5);
  CHECK(std::abs(parity_mean(hist, mask) - expected) < 0.01);

  // the parity of a Z string equals its expectation value
  const PauliString zz(4, 0, mask);
  CHECK(state.expectation(zz) == Catch::Approx(expected).margin(1e-13));
}

TEST_CASE("measurement basis rotation maps any string onto its Z skeleton") {
  dense::TestRand rand(29);
  for (int trial = 0; trial < 40; ++trial) {
    const uint32_t n = 2 + static_cast<uint32_t>(rand.below(4));
    const PauliString p = dense::random_pauli(n, rand);
    const StateVector state = dense::random_state(n, rand);

    StateVector rotated = state;
    apply_measurement_basis(rotated, p);
    // the diagonal observable after rotation has Z wherever p acts
    const double diag_expect =
        parity_mean(rotated.outcome_probabilities(), p.support_mask());
    INFO(p.to_string());
    CHECK(diag_expect == Catch::Approx(state.expectation(p)).margin(1e-12));
  }
}

TEST_CASE("measure_pauli estimates the expectation from counts") {
  dense::TestRand rand(30);
  const uint32_t n = 4;
  const PauliString p = PauliString::parse("X0 Y2 Z3", n);
  const StateVector state = dense::random_state(n, rand);
  const PauliMeasurement m = measure_pauli(state, p, 400000, 17);
  CHECK(m.counts.total == 400000);
  CHECK(std::abs(m.mean - state.expectation(p)) < 0.01);

  // deterministic in the seed
  const PauliMeasurement m2 = measure_pauli(state, p, 1000, 17);
  const PauliMeasurement m3 = measure_pauli(state, p, 1000, 17);
  CHECK(m2.mean == m3.mean);
  CHECK(m2.counts == m3.counts);
}

TEST_CASE("dump writes one row per significant amplitude") {
  StateVector state(3);
  state.amplitudes()[0b000] = cd(0, 0);
  state.amplitudes()[0b110] = cd(0.6, 0);   // bitstring "011"
  state.amplitudes()[0b001] = cd(0, -0.8);  // bitstring "100"
  std::ostringstream out;
  state.dump(out);
  CHECK(out.str() ==
        "100 0 -0.80000000000000004\n"
        "011 0.59999999999999998 0\n");
}

TEST_CASE("bitstring rendering puts qubit zero leftmost") {
  CHECK(bitstring(11, 6) == "110100");
  CHECK(parse_bitstring("110100") == 11);
  CHECK(bitstring(0, 3) == "000");
  CHECK(parse_bitstring(bitstring(45, 7)) == 45);
}
