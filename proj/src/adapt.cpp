#include "hfc/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace hfc {

PauliSum hamiltonian_from_terms(
    const std::vector<std::pair<double, std::string>>& terms,
    uint32_t n_qubits) {
  PauliSum sum(n_qubits);
  for (const auto& [coeff, text] : terms) {
    sum.add(coeff, PauliString::parse(text, n_qubits));
  }
  return sum;
}

std::vector<PoolOperator> build_pool(uint32_t n_act) {
  if (n_act == 0 || 2 * n_act > 24) {
    throw std::invalid_argument("bad active orbital count");
  }
  const uint32_t n = 2 * n_act;
  std::vector<PoolOperator> pool;
  std::vector<PauliString> seen;
  auto emit = [&](const PauliString& s, const std::string& origin) {
    if (std::find(seen.begin(), seen.end(), s) != seen.end()) return;
    seen.push_back(s);
    pool.push_back({s, origin});
  };
  // Spin-preserving singles: both stripped strings per in-block pair.
  for (int spin = 0; spin < 2; ++spin) {
    const uint32_t base = spin == 0 ? 0 : n_act;
    for (uint32_t i = 0; i < n_act; ++i) {
      for (uint32_t a = i + 1; a < n_act; ++a) {
        const auto strings = strip_z_chains(jw_single(n, base + i, base + a));
        const std::string origin = std::string("single/") +
                                   (spin == 0 ? "a(" : "b(") +
                                   std::to_string(i) + "," +
                                   std::to_string(a) + ")";
        for (const auto& s : strings) emit(s, origin);
      }
    }
  }
  // Doubles over all spin-orbital quadruples.
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = i + 1; j < n; ++j) {
      for (uint32_t a = j + 1; a < n; ++a) {
        for (uint32_t b = a + 1; b < n; ++b) {
          const auto strings = strip_z_chains(jw_double(n, i, j, a, b));
          const std::string origin =
              "double(" + std::to_string(i) + "," + std::to_string(j) + "," +
              std::to_string(a) + "," + std::to_string(b) + ")";
          for (const auto& s : strings) emit(s, origin);
        }
      }
    }
  }
  return pool;
}

double pool_gradient(const StateVector& state, const PauliSum& hamiltonian,
                     const PauliString& op) {
  StateVector p_psi = state;
  p_psi.apply_pauli(op);
  const StateVector h_psi = state.apply_sum(hamiltonian);
  return -inner_product(p_psi, h_psi).imag();
}

double ansatz_energy_and_gradient(const PauliSum& hamiltonian,
                                  const StateVector& reference,
                                  const std::vector<PauliString>& operators,
                                  const std::vector<double>& angles,
                                  std::vector<double>* gradient) {
  if (operators.size() != angles.size()) {
    throw std::invalid_argument("operator/angle count mismatch");
  }
  StateVector psi = reference;
  for (size_t k = 0; k < operators.size(); ++k) {
    psi.apply_pauli_rotation(operators[k], angles[k]);
  }
  StateVector h_psi = psi.apply_sum(hamiltonian);
  const double energy = inner_product(psi, h_psi).real();
  if (gradient != nullptr) {
    gradient->assign(operators.size(), 0.0);
    // Reverse sweep: with f_k = U_k..U_1|ref>, b_k = U_{k+1}^..U_N^ H|psi>,
    // dE/dtheta_k = Im <b_k| P_k |f_k>.
    StateVector f = psi, b = std::move(h_psi);
    for (size_t k = operators.size(); k-- > 0;) {
      StateVector pf = f;
      pf.apply_pauli(operators[k]);
      (*gradient)[k] = inner_product(b, pf).imag();
      f.apply_pauli_rotation(operators[k], -angles[k]);
      b.apply_pauli_rotation(operators[k], -angles[k]);
    }
  }
  return energy;
}

namespace {

struct LbfgsOutcome {
  double energy;
  double grad_norm;
  size_t iterations;
  bool converged;
};

// Minimizes the ansatz energy over the angles in place.  Two-loop L-BFGS
// with a backtracking Armijo line search; skips curvature-violating updates.
LbfgsOutcome minimize_angles(const PauliSum& hamiltonian,
                             const StateVector& reference,
                             const std::vector<PauliString>& operators,
                             std::vector<double>& angles, double tol,
                             size_t max_iter) {
  const size_t dim = angles.size();
  const size_t history = 10;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  std::vector<double> grad(dim), new_grad(dim);
  double energy =
      ansatz_energy_and_gradient(hamiltonian, reference, operators, angles,
                                 &grad);
  auto inf_norm = [](const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };

  size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    const double gnorm = inf_norm(grad);
    if (gnorm <= tol) {
      return {energy, gnorm, iter, true};
    }
    // Two-loop recursion for the search direction d = -H grad.
    std::vector<double> d(grad);
    std::vector<double> alpha_coef(s_hist.size());
    for (size_t i = s_hist.size(); i-- > 0;) {
      double a = 0;
      for (size_t k = 0; k < dim; ++k) a += s_hist[i][k] * d[k];
      a *= rho_hist[i];
      alpha_coef[i] = a;
      for (size_t k = 0; k < dim; ++k) d[k] -= a * y_hist[i][k];
    }
    if (!s_hist.empty()) {
      double sy = 0, yy = 0;
      const auto& s0 = s_hist.back();
      const auto& y0 = y_hist.back();
      for (size_t k = 0; k < dim; ++k) {
        sy += s0[k] * y0[k];
        yy += y0[k] * y0[k];
      }
      const double scale = sy / std::max(yy, 1e-300);
      for (double& x : d) x *= scale;
    }
    for (size_t i = 0; i < s_hist.size(); ++i) {
      double b = 0;
      for (size_t k = 0; k < dim; ++k) b += y_hist[i][k] * d[k];
      b *= rho_hist[i];
      for (size_t k = 0; k < dim; ++k) d[k] += (alpha_coef[i] - b) * s_hist[i][k];
    }
    for (double& x : d) x = -x;

    double dg = 0;
    for (size_t k = 0; k < dim; ++k) dg += d[k] * grad[k];
    if (dg >= 0) {
      // Not a descent direction (stale curvature); reset to steepest descent.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      dg = 0;
      for (size_t k = 0; k < dim; ++k) {
        d[k] = -grad[k];
        dg += d[k] * grad[k];
      }
    }

    // Backtracking Armijo search.
    const double c1 = 1e-4;
    double step = 1.0;
    std::vector<double> trial(dim);
    double new_energy = energy;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      for (size_t k = 0; k < dim; ++k) trial[k] = angles[k] + step * d[k];
      new_energy = ansatz_energy_and_gradient(hamiltonian, reference,
                                              operators, trial, &new_grad);
      if (new_energy <= energy + c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      return {energy, gnorm, iter, gnorm <= tol};
    }

    std::vector<double> s(dim), y(dim);
    double sy = 0;
    for (size_t k = 0; k < dim; ++k) {
      s[k] = trial[k] - angles[k];
      y[k] = new_grad[k] - grad[k];
      sy += s[k] * y[k];
    }
    angles = trial;
    energy = new_energy;
    grad = new_grad;
    double ss = 0, yy = 0;
    for (size_t k = 0; k < dim; ++k) {
      ss += s[k] * s[k];
      yy += y[k] * y[k];
    }
    if (sy > 1e-10 * std::sqrt(ss * yy)) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (s_hist.size() > history) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
    }
  }
  return {energy, inf_norm(grad), iter, inf_norm(grad) <= tol};
}

}  // namespace

AdaptResult run_adapt(const PauliSum& hamiltonian,
                      const StateVector& reference,
                      const std::vector<PoolOperator>& pool,
                      const AdaptOptions& options) {
  if (!hamiltonian.is_hermitian()) {
    throw std::invalid_argument("hamiltonian must have real coefficients");
  }
  if (pool.empty()) {
    throw std::invalid_argument("operator pool is empty");
  }
  AdaptResult result;
  StateVector psi = reference;
  result.energy = inner_product(psi, psi.apply_sum(hamiltonian)).real();
  const double reference_energy = result.energy;

  while (result.operators.size() < options.max_operators) {
    // Score the pool at the current state.
    const StateVector h_psi = psi.apply_sum(hamiltonian);
    double best = 0;
    size_t best_idx = 0;
    for (size_t i = 0; i < pool.size(); ++i) {
      StateVector p_psi = psi;
      p_psi.apply_pauli(pool[i].op);
      const double g = -inner_product(p_psi, h_psi).imag();
      if (std::abs(g) > std::abs(best)) {
        best = g;
        best_idx = i;
      }
    }
    result.gradient_history.push_back(std::abs(best));
    if (std::abs(best) < options.grad_tol) {
      result.converged = true;
      result.message = "pool gradients below tolerance";
      break;
    }

    result.operators.push_back(pool[best_idx].op);
    result.angles.push_back(0.0);
    const LbfgsOutcome opt =
        minimize_angles(hamiltonian, reference, result.operators,
                        result.angles, options.opt_tol, options.opt_max_iter);
    if (opt.energy > result.energy + 1e-9) {
      result.message = "optimizer failed to improve the energy";
      break;
    }
    result.energy = opt.energy;

    psi = reference;
    for (size_t k = 0; k < result.operators.size(); ++k) {
      psi.apply_pauli_rotation(result.operators[k], result.angles[k]);
    }
  }
  if (!result.converged && result.message.empty()) {
    result.message = "operator budget exhausted";
  }
  if (result.energy > reference_energy + 1e-9) {
    result.message += "; energy above reference (unexpected)";
  }
  return result;
}

IntegralTensors IntegralTensors::zero(uint32_t n) {
  IntegralTensors t;
  t.n = n;
  t.h = Eigen::MatrixXd::Zero(n, n);
  t.g.assign(size_t(n) * n * n * n, 0.0);
  return t;
}

IntegralTensors rotate_integrals(const IntegralTensors& tensors,
                                 const Eigen::MatrixXd& kappa) {
  const uint32_t n = tensors.n;
  if (kappa.rows() != n || kappa.cols() != n) {
    throw std::invalid_argument("rotation generator size mismatch");
  }
  if ((kappa + kappa.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("rotation generator must be antisymmetric");
  }
  if (tensors.h.rows() != n || tensors.h.cols() != n ||
      tensors.g.size() != size_t(n) * n * n * n) {
    throw std::invalid_argument("integral tensors are inconsistent");
  }
  const Eigen::MatrixXd u = kappa.exp();

  IntegralTensors out = IntegralTensors::zero(n);
  out.h = u * tensors.h * u.transpose();

  // Contract one index at a time: O(n^5) total.
  std::vector<double> t1(tensors.g.size(), 0.0), t2(tensors.g.size(), 0.0);
  auto idx = [n](uint32_t p, uint32_t q, uint32_t r, uint32_t s) {
    return ((size_t(p) * n + q) * n + r) * n + s;
  };
  for (uint32_t p = 0; p < n; ++p)
    for (uint32_t a = 0; a < n; ++a) {
      const double upa = u(p, a);
      if (upa == 0) continue;
      for (uint32_t q = 0; q < n; ++q)
        for (uint32_t r = 0; r < n; ++r)
          for (uint32_t s = 0; s < n; ++s)
            t1[idx(p, q, r, s)] += upa * tensors.g[idx(a, q, r, s)];
    }
  for (uint32_t q = 0; q < n; ++q)
    for (uint32_t b = 0; b < n; ++b) {
      const double uqb = u(q, b);
      if (uqb == 0) continue;
      for (uint32_t p = 0; p < n; ++p)
        for (uint32_t r = 0; r < n; ++r)
          for (uint32_t s = 0; s < n; ++s)
            t2[idx(p, q, r, s)] += uqb * t1[idx(p, b, r, s)];
    }
  std::fill(t1.begin(), t1.end(), 0.0);
  for (uint32_t r = 0; r < n; ++r)
    for (uint32_t c = 0; c < n; ++c) {
      const double urc = u(r, c);
      if (urc == 0) continue;
      for (uint32_t p = 0; p < n; ++p)
        for (uint32_t q = 0; q < n; ++q)
          for (uint32_t s = 0; s < n; ++s)
            t1[idx(p, q, r, s)] += urc * t2[idx(p, q, c, s)];
    }
  for (uint32_t s = 0; s < n; ++s)
    for (uint32_t d = 0; d < n; ++d) {
      const double usd = u(s, d);
      if (usd == 0) continue;
      for (uint32_t p = 0; p < n; ++p)
        for (uint32_t q = 0; q < n; ++q)
          for (uint32_t r = 0; r < n; ++r)
            out.g[idx(p, q, r, s)] += usd * t1[idx(p, q, r, d)];
    }
  return out;
}

Eigen::MatrixXd assemble_block_kappa(const Eigen::MatrixXd& k00,
                                     const Eigen::MatrixXd& k10) {
  if (k00.rows() != k00.cols() || k10.rows() != k10.cols() ||
      k00.rows() != k10.rows()) {
    throw std::invalid_argument("spin blocks must be square and equal size");
  }
  const Eigen::Index n = k00.rows();
  const double inv_sqrt2 = 0.7071067811865475244;
  Eigen::MatrixXd kappa = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  kappa.topLeftCorner(n, n) = k00 + inv_sqrt2 * k10;
  kappa.bottomRightCorner(n, n) = k00 - inv_sqrt2 * k10;
  return kappa;
}

}  // namespace hfc
