#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "dense_helpers.hpp"
#include "hfc/adapt.hpp"

using namespace hfc;
using dense::Mat;
using dense::cd;

namespace {

Eigen::MatrixXd random_antisymmetric(int n, dense::TestRand& rand) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = rand.normal();
  }
  return 0.5 * (m - m.transpose());
}

/// Real-matrix Hamiltonian: random 1- and 2-local strings with an even
/// number of Y factors, Gaussian coefficients.
PauliSum random_real_hamiltonian(uint32_t n_qubits, dense::TestRand& rand) {
  PauliSum sum(n_qubits);
  const char axes[] = {'X', 'Y', 'Z'};
  for (int k = 0; k < 12; ++k) {
    std::string text;
    int y_count = 0;
    const uint32_t q0 = rand.below(n_qubits);
    uint32_t q1 = rand.below(n_qubits);
    while (q1 == q0) q1 = rand.below(n_qubits);
    const char a0 = axes[rand.below(3)];
    if (a0 == 'Y') ++y_count;
    text = std::string(1, a0) + std::to_string(std::min(q0, q1));
    if (rand.uniform() < 0.7) {
      char a1 = axes[rand.below(3)];
      if ((a1 == 'Y') != (y_count == 1)) {
        // flip to keep the Y count even
        a1 = a1 == 'Y' ? 'X' : 'Y';
      }
      text += " " + std::string(1, a1) + std::to_string(std::max(q0, q1));
    } else if (y_count == 1) {
      text[0] = 'X';
    }
    sum.add(cd(rand.normal(), 0.0), PauliString::parse(text, n_qubits));
  }
  return sum;
}

/// Single-Y pool that is complete for real Hamiltonians: Y_p plus all
/// two-qubit strings with exactly one Y factor.
std::vector<PoolOperator> real_state_pool(uint32_t n_qubits) {
  std::vector<PoolOperator> pool;
  for (uint32_t p = 0; p < n_qubits; ++p) {
    pool.push_back({PauliString::parse("Y" + std::to_string(p), n_qubits),
                    "y" + std::to_string(p)});
  }
  const char partners[] = {'X', 'Z'};
  for (uint32_t p = 0; p < n_qubits; ++p) {
    for (uint32_t q = 0; q < n_qubits; ++q) {
      if (p == q) continue;
      for (char partner : partners) {
        const std::string text = "Y" + std::to_string(p) + " " +
                                 std::string(1, partner) + std::to_string(q);
        pool.push_back({PauliString::parse(text, n_qubits), text});
      }
    }
  }
  return pool;
}

double dense_ground_energy(const PauliSum& hamiltonian, uint32_t n_qubits) {
  const Mat h = dense::pauli_sum_dense(hamiltonian, n_qubits);
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  return solver.eigenvalues()(0);
}

double ansatz_energy_fd(const PauliSum& hamiltonian,
                        const StateVector& reference,
                        const std::vector<PauliString>& ops,
                        std::vector<double> angles) {
  StateVector state = reference;
  for (size_t k = 0; k < ops.size(); ++k) {
    state.apply_pauli_rotation(ops[k], angles[k]);
  }
  return state.expectation(hamiltonian).real();
}

}  // namespace

TEST_CASE("hamiltonian builder accumulates terms") {
  const PauliSum h = hamiltonian_from_terms(
      {{0.5, "X0 Z1"}, {-0.25, "Z0"}, {0.75, "Z0"}, {1.5, "I"}}, 2);
  CHECK(h.is_hermitian());
  REQUIRE(h.terms().size() == 3);  // the two Z0 entries merge

  const StateVector zero = StateVector::basis_state(2, 0b00);
  // <00| H |00> = 0 + 0.5 + 1.5
  CHECK(zero.expectation(h).real() == Catch::Approx(2.0).margin(1e-14));
  const Mat dense_h = dense::pauli_sum_dense(h, 2);
  CHECK(dense::max_abs_diff(dense_h, dense_h.adjoint()) < 1e-14);
}

TEST_CASE("excitation pool enumerates stripped strings") {
  SECTION("too small for any excitation") {
    CHECK(build_pool(1).empty());
  }

  SECTION("counts for two and three orbitals") {
    // singles: 2 strings per in-spin pair; doubles: the 8 odd-Y strings on
    // each 4-subset of spin orbitals
    CHECK(build_pool(2).size() == 4 + 8);
    CHECK(build_pool(3).size() == 12 + 120);
  }

  SECTION("strings are distinct XY skeletons with labeled origins") {
    const auto pool = build_pool(3);
    std::set<std::pair<uint64_t, uint64_t>> seen;
    for (const auto& entry : pool) {
      CHECK_FALSE(entry.origin.empty());
      CHECK((entry.op.z_mask() & ~entry.op.x_mask()) == 0);  // X/Y only
      const size_t weight =
          static_cast<size_t>(__builtin_popcountll(entry.op.support_mask()));
      CHECK((weight == 2 || weight == 4));
      seen.insert({entry.op.x_mask(), entry.op.z_mask()});
    }
    CHECK(seen.size() == pool.size());
  }

  SECTION("every string moves particles within or across spin blocks") {
    // anti-Hermitian generators: odd number of Y factors
    for (const auto& entry : build_pool(2)) {
      const int y_count = __builtin_popcountll(entry.op.x_mask() &
                                               entry.op.z_mask());
      CHECK(y_count % 2 == 1);
    }
  }
}

TEST_CASE("pool gradient matches finite differences") {
  dense::TestRand rand(71);
  const uint32_t n = 4;
  for (int trial = 0; trial < 12; ++trial) {
    const PauliSum h = random_real_hamiltonian(n, rand);
    const StateVector state = dense::random_state(n, rand);
    const PauliString op = dense::random_pauli(n, rand);

    const double analytic = pool_gradient(state, h, op);
    const double eps = 1e-5;
    StateVector plus = state, minus = state;
    plus.apply_pauli_rotation(op, eps);
    minus.apply_pauli_rotation(op, -eps);
    const double fd = (plus.expectation(h).real() -
                       minus.expectation(h).real()) /
                      (2 * eps);
    CHECK(analytic == Catch::Approx(fd).margin(1e-7));
  }
}

TEST_CASE("ansatz gradient matches finite differences") {
  dense::TestRand rand(72);
  const uint32_t n = 4;
  const PauliSum h = random_real_hamiltonian(n, rand);
  const StateVector reference = StateVector::basis_state(n, 0b0101);

  std::vector<PauliString> ops;
  std::vector<double> angles;
  for (const auto& entry : real_state_pool(n)) {
    ops.push_back(entry.op);
    angles.push_back(0.4 * rand.normal());
    if (ops.size() == 6) break;
  }

  std::vector<double> gradient;
  const double energy =
      ansatz_energy_and_gradient(h, reference, ops, angles, &gradient);
  REQUIRE(gradient.size() == ops.size());
  CHECK(energy ==
        Catch::Approx(ansatz_energy_fd(h, reference, ops, angles))
            .margin(1e-12));

  const double eps = 1e-5;
  for (size_t k = 0; k < ops.size(); ++k) {
    auto shifted = angles;
    shifted[k] += eps;
    const double e_plus = ansatz_energy_fd(h, reference, ops, shifted);
    shifted[k] -= 2 * eps;
    const double e_minus = ansatz_energy_fd(h, reference, ops, shifted);
    CHECK(gradient[k] ==
          Catch::Approx((e_plus - e_minus) / (2 * eps)).margin(1e-7));
  }
}

TEST_CASE("greedy growth reaches the dense ground energy") {
  AdaptOptions options;
  options.grad_tol = 1e-8;
  options.opt_tol = 1e-12;
  options.max_operators = 60;
  options.opt_max_iter = 2000;

  SECTION("fixed two-qubit problem") {
    const PauliSum h = hamiltonian_from_terms(
        {{-1.0, "X0 X1"}, {-0.5, "Z0"}, {0.5, "Z1"}, {0.3, "Z0 Z1"}}, 2);
    const StateVector reference = StateVector::basis_state(2, 0b01);
    const AdaptResult result =
        run_adapt(h, reference, real_state_pool(2), options);
    CHECK(result.converged);
    CHECK_FALSE(result.message.empty());
    CHECK(result.operators.size() == result.angles.size());
    CHECK(std::abs(result.energy - dense_ground_energy(h, 2)) < 1e-7);
    CHECK(result.energy <= reference.expectation(h).real() + 1e-12);
    REQUIRE_FALSE(result.gradient_history.empty());
    CHECK(result.gradient_history.back() < options.grad_tol);
  }

  SECTION("random real Hamiltonians on three qubits") {
    dense::TestRand rand(73);
    const auto pool = real_state_pool(3);
    for (int trial = 0; trial < 4; ++trial) {
      const PauliSum h = random_real_hamiltonian(3, rand);
      const StateVector reference = StateVector::basis_state(3, 0b010);
      const AdaptResult result = run_adapt(h, reference, pool, options);
      INFO("trial " << trial << ": " << result.message);
      CHECK(std::abs(result.energy - dense_ground_energy(h, 3)) < 1e-6);
      CHECK(result.energy <= reference.expectation(h).real() + 1e-12);
    }
  }
}

TEST_CASE("greedy growth validates its inputs") {
  PauliSum skew(2);
  skew.add(cd(0.0, 0.5), PauliString::parse("X0", 2));  // anti-Hermitian term
  const StateVector reference = StateVector::basis_state(2, 0b01);
  CHECK_THROWS(run_adapt(skew, reference, real_state_pool(2)));

  const PauliSum h = hamiltonian_from_terms({{1.0, "Z0"}}, 2);
  CHECK_THROWS(run_adapt(h, reference, {}));
}

TEST_CASE("orbital rotation matches the dense contraction") {
  dense::TestRand rand(74);
  const uint32_t n = 4;
  IntegralTensors tensors = IntegralTensors::zero(n);
  for (uint32_t p = 0; p < n; ++p) {
    for (uint32_t q = 0; q < n; ++q) {
      tensors.h(p, q) = rand.normal();
      for (uint32_t r = 0; r < n; ++r) {
        for (uint32_t s = 0; s < n; ++s) {
          tensors.g_at(p, q, r, s) = rand.normal();
        }
      }
    }
  }

  const Eigen::MatrixXd kappa =
      random_antisymmetric(static_cast<int>(n), rand);
  const IntegralTensors rotated = rotate_integrals(tensors, kappa);
  const Eigen::MatrixXd u = dense::expm_taylor_real(kappa);

  SECTION("one-body block") {
    const Eigen::MatrixXd oracle = u * tensors.h * u.transpose();
    CHECK((rotated.h - oracle).cwiseAbs().maxCoeff() < 1e-10);
  }

  SECTION("two-body block via the naive four-index sum") {
    double worst = 0.0;
    for (uint32_t p = 0; p < n; ++p) {
      for (uint32_t q = 0; q < n; ++q) {
        for (uint32_t r = 0; r < n; ++r) {
          for (uint32_t s = 0; s < n; ++s) {
            double acc = 0.0;
            for (uint32_t a = 0; a < n; ++a) {
              for (uint32_t b = 0; b < n; ++b) {
                for (uint32_t c = 0; c < n; ++c) {
                  for (uint32_t d = 0; d < n; ++d) {
                    acc += u(p, a) * u(q, b) * u(r, c) * u(s, d) *
                           tensors.g_at(a, b, c, d);
                  }
                }
              }
            }
            worst = std::max(worst,
                             std::abs(acc - rotated.g_at(p, q, r, s)));
          }
        }
      }
    }
    CHECK(worst < 1e-10);
  }

  SECTION("inverse rotation restores the input") {
    const IntegralTensors back = rotate_integrals(rotated, -kappa);
    CHECK((back.h - tensors.h).cwiseAbs().maxCoeff() < 1e-9);
    double worst = 0.0;
    for (size_t i = 0; i < tensors.g.size(); ++i) {
      worst = std::max(worst, std::abs(back.g[i] - tensors.g[i]));
    }
    CHECK(worst < 1e-9);
  }

  SECTION("trace invariants") {
    CHECK(rotated.h.trace() == Catch::Approx(tensors.h.trace()).margin(1e-9));
    double pair_trace = 0.0, rotated_pair_trace = 0.0;
    for (uint32_t p = 0; p < n; ++p) {
      for (uint32_t q = 0; q < n; ++q) {
        pair_trace += tensors.g_at(p, q, q, p);
        rotated_pair_trace += rotated.g_at(p, q, q, p);
      }
    }
    CHECK(rotated_pair_trace == Catch::Approx(pair_trace).margin(1e-9));
  }

  SECTION("non-antisymmetric generators are rejected") {
    Eigen::MatrixXd bad = kappa;
    bad(0, 1) += 0.1;
    CHECK_THROWS(rotate_integrals(tensors, bad));
  }
}

TEST_CASE("spin-block generator assembly") {
  dense::TestRand rand(75);
  const int n = 3;
  const Eigen::MatrixXd k00 = random_antisymmetric(n, rand);
  const Eigen::MatrixXd k10 = random_antisymmetric(n, rand);
  const Eigen::MatrixXd block = assemble_block_kappa(k00, k10);
  REQUIRE(block.rows() == 2 * n);
  REQUIRE(block.cols() == 2 * n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK((block.topLeftCorner(n, n) - (k00 + inv_sqrt2 * k10))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK((block.bottomRightCorner(n, n) - (k00 - inv_sqrt2 * k10))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  CHECK(block.topRightCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
  CHECK(block.bottomLeftCorner(n, n).cwiseAbs().maxCoeff() == 0.0);
  CHECK((block + block.transpose()).cwiseAbs().maxCoeff() < 1e-14);
}
