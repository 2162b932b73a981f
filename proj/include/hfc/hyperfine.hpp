#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hfc/rdm.hpp"

namespace hfc {

/// Isotropic coupling prefactor, MHz: 400.12 * g_nuclear / m_s.
/// Throws for m_s == 0.
double hfc_prefactor(double g_factor, double m_s);

/// Active-space contribution to the isotropic coupling in MHz:
///   prefactor * ( tr(A_alpha D_alpha) - tr(A_beta D_beta) )
/// with symmetric per-spin amplitude matrices A (validated) and the spin
/// density matrices D.
double active_hfc(const Eigen::MatrixXd& a_alpha,
                  const Eigen::MatrixXd& a_beta, const SpinRDM& rdm,
                  double g_factor, double m_s);

/// Total coupling = active contribution + frozen inactive offset.
inline double total_hfc(double active, double inactive_offset) {
  return active + inactive_offset;
}

/// Element-wise difference of spin density matrices (left minus right).
SpinRDM rdm_difference(const SpinRDM& left, const SpinRDM& right);

/// Coupling error of an estimated density matrix pair, defined as
/// active_hfc(exact) - active_hfc(estimate).  Linear in the elementwise
/// deviations, so it is exact (no truncation).
double hfc_error_exact(const Eigen::MatrixXd& a_alpha,
                       const Eigen::MatrixXd& a_beta, const SpinRDM& exact,
                       const SpinRDM& estimate, double g_factor, double m_s);

/// One linear error channel: coeff * (exact - estimate)_sigma[v, w].
struct DominantTerm {
  uint32_t v = 0, w = 0;
  int spin = 0;  // 0 alpha, 1 beta
  double coeff = 0.0;
};

/// The dominant linear channels of the coupling error: every element with
/// |A_sigma[v, w]| >= threshold contributes coeff = prefactor * s * A[v, w]
/// with s = +1 (alpha) / -1 (beta), doubled for off-diagonal elements since
/// the symmetric pair (v, w) and (w, v) move together.  Deterministic order:
/// alpha before beta, row-major upper triangle.
std::vector<DominantTerm> hfc_error_dominant(const Eigen::MatrixXd& a_alpha,
                                             const Eigen::MatrixXd& a_beta,
                                             double g_factor, double m_s,
                                             double threshold = 0.1);

/// Applies the channels to a deviation matrix pair.
double evaluate_dominant(const std::vector<DominantTerm>& terms,
                         const SpinRDM& deviation);

/// Splits the channel sum into its (alpha, beta) parts.
std::pair<double, double> decompose_spin_error(
    const std::vector<DominantTerm>& terms, const SpinRDM& deviation);

}  // namespace hfc
