#include "hfc/hyperfine.hpp"

#include <cmath>
#include <stdexcept>

namespace hfc {

namespace {

constexpr double kPrefactorMHz = 400.12;

void check_amplitude_matrix(const Eigen::MatrixXd& a, uint32_t n_act) {
  if (a.rows() != n_act || a.cols() != n_act) {
    throw std::invalid_argument("amplitude matrix size does not match layout");
  }
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("amplitude matrix must be symmetric");
  }
}

}  // namespace

double hfc_prefactor(double g_factor, double m_s) {
  if (m_s == 0.0) {
    throw std::invalid_argument("spin projection m_s must be nonzero");
  }
  return kPrefactorMHz * g_factor / m_s;
}

double active_hfc(const Eigen::MatrixXd& a_alpha,
                  const Eigen::MatrixXd& a_beta, const SpinRDM& rdm,
                  double g_factor, double m_s) {
  check_amplitude_matrix(a_alpha, rdm.n_act);
  check_amplitude_matrix(a_beta, rdm.n_act);
  const double spin_trace = (a_alpha.transpose() * rdm.alpha).trace() -
                            (a_beta.transpose() * rdm.beta).trace();
  return hfc_prefactor(g_factor, m_s) * spin_trace;
}

SpinRDM rdm_difference(const SpinRDM& left, const SpinRDM& right) {
  if (left.n_act != right.n_act) {
    throw std::invalid_argument("density matrix size mismatch");
  }
  SpinRDM out;
  out.n_act = left.n_act;
  out.alpha = left.alpha - right.alpha;
  out.beta = left.beta - right.beta;
  return out;
}

double hfc_error_exact(const Eigen::MatrixXd& a_alpha,
                       const Eigen::MatrixXd& a_beta, const SpinRDM& exact,
                       const SpinRDM& estimate, double g_factor, double m_s) {
  const SpinRDM delta = rdm_difference(exact, estimate);
  const double spin_trace = (a_alpha.transpose() * delta.alpha).trace() -
                            (a_beta.transpose() * delta.beta).trace();
  check_amplitude_matrix(a_alpha, exact.n_act);
  check_amplitude_matrix(a_beta, exact.n_act);
  return hfc_prefactor(g_factor, m_s) * spin_trace;
}

std::vector<DominantTerm> hfc_error_dominant(const Eigen::MatrixXd& a_alpha,
                                             const Eigen::MatrixXd& a_beta,
                                             double g_factor, double m_s,
                                             double threshold) {
  const uint32_t n_act = static_cast<uint32_t>(a_alpha.rows());
  check_amplitude_matrix(a_alpha, n_act);
  check_amplitude_matrix(a_beta, n_act);
  const double pref = hfc_prefactor(g_factor, m_s);
  std::vector<DominantTerm> terms;
  for (int spin = 0; spin < 2; ++spin) {
    const Eigen::MatrixXd& a = spin == 0 ? a_alpha : a_beta;
    const double sign = spin == 0 ? 1.0 : -1.0;
    for (uint32_t v = 0; v < n_act; ++v) {
      for (uint32_t w = v; w < n_act; ++w) {
        if (std::abs(a(v, w)) < threshold) continue;
        const double mult = (v == w) ? 1.0 : 2.0;
        terms.push_back({v, w, spin, pref * sign * mult * a(v, w)});
      }
    }
  }
  return terms;
}

double evaluate_dominant(const std::vector<DominantTerm>& terms,
                         const SpinRDM& deviation) {
  double acc = 0;
  for (const auto& t : terms) {
    const Eigen::MatrixXd& d = t.spin == 0 ? deviation.alpha : deviation.beta;
    acc += t.coeff * d(t.v, t.w);
  }
  return acc;
}

std::pair<double, double> decompose_spin_error(
    const std::vector<DominantTerm>& terms, const SpinRDM& deviation) {
  double alpha = 0, beta = 0;
  for (const auto& t : terms) {
    const Eigen::MatrixXd& d = t.spin == 0 ? deviation.alpha : deviation.beta;
    (t.spin == 0 ? alpha : beta) += t.coeff * d(t.v, t.w);
  }
  return {alpha, beta};
}

}  // namespace hfc
