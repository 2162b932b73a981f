#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hfc/pauli.hpp"
#include "hfc/statevector.hpp"

namespace hfc {

/// Builds a Hermitian operator from (coefficient, Pauli text) pairs.
PauliSum hamiltonian_from_terms(
    const std::vector<std::pair<double, std::string>>& terms,
    uint32_t n_qubits);

struct PoolOperator {
  PauliString op;
  std::string origin;  // human-readable excitation label
};

/// Excitation-derived operator pool on the blocked spin layout
/// (alpha = qubits 0..n_act-1, beta = qubits n_act..2*n_act-1):
/// both Z-stripped strings of every spin-preserving single excitation plus
/// all eight Z-stripped strings of every double excitation over the
/// 2*n_act spin orbitals, deduplicated, in deterministic order.
/// Empty for n_act = 1.
std::vector<PoolOperator> build_pool(uint32_t n_act);

/// d<H>/d theta at theta = 0 for appending exp(-i theta/2 P) to `state`:
/// (i/2) <[P, H]> = -Im <P psi | H psi>.
double pool_gradient(const StateVector& state, const PauliSum& hamiltonian,
                     const PauliString& op);

struct AdaptOptions {
  double grad_tol = 1e-6;    // stop when the largest pool gradient is below
  size_t max_operators = 100;
  double opt_tol = 1e-8;     // optimizer inf-norm gradient tolerance
  size_t opt_max_iter = 500;
};

struct AdaptResult {
  std::vector<PauliString> operators;  // appended in selection order
  std::vector<double> angles;
  double energy = 0.0;
  std::vector<double> gradient_history;  // max pool gradient per round
  bool converged = false;
  std::string message;
};

/// Greedy operator growth: each round scores the whole pool by
/// `pool_gradient`, appends the best operator (largest magnitude, lowest
/// index on ties) at angle zero, and re-optimizes all angles with L-BFGS.
/// The energy sequence is non-increasing and never exceeds the reference
/// energy.
AdaptResult run_adapt(const PauliSum& hamiltonian,
                      const StateVector& reference,
                      const std::vector<PoolOperator>& pool,
                      const AdaptOptions& options = {});

/// Energy and analytic angle gradient of the rotation ansatz
/// prod_k exp(-i theta_k/2 P_k) |ref> under `hamiltonian` (reverse-sweep,
/// two state vectors).
double ansatz_energy_and_gradient(const PauliSum& hamiltonian,
                                  const StateVector& reference,
                                  const std::vector<PauliString>& operators,
                                  const std::vector<double>& angles,
                                  std::vector<double>* gradient);

/// One- and two-body integral tensors over n spin orbitals; the two-body
/// block is dense with index ((p n + q) n + r) n + s.
struct IntegralTensors {
  uint32_t n = 0;
  Eigen::MatrixXd h;
  std::vector<double> g;

  double& g_at(uint32_t p, uint32_t q, uint32_t r, uint32_t s) {
    return g[((size_t(p) * n + q) * n + r) * n + s];
  }
  double g_at(uint32_t p, uint32_t q, uint32_t r, uint32_t s) const {
    return g[((size_t(p) * n + q) * n + r) * n + s];
  }
  static IntegralTensors zero(uint32_t n);
};

/// Orbital rotation by U = exp(kappa) with antisymmetric kappa (validated):
/// h' = U h U^T and g' contracts U into all four indices.  Composing with
/// -kappa restores the input; tr h and the pair trace sum_pq g_pqqp are
/// invariant.
IntegralTensors rotate_integrals(const IntegralTensors& tensors,
                                 const Eigen::MatrixXd& kappa);

/// Assembles the spin-orbital rotation generator from spin-summed (k00) and
/// spin-difference (k10) blocks: alpha block k00 + k10/sqrt(2), beta block
/// k00 - k10/sqrt(2), both antisymmetric.
Eigen::MatrixXd assemble_block_kappa(const Eigen::MatrixXd& k00,
                                     const Eigen::MatrixXd& k10);

}  // namespace hfc
