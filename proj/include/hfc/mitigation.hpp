#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hfc/circuit.hpp"
#include "hfc/histogram.hpp"
#include "hfc/noise.hpp"

namespace hfc {

/// Column-stochastic readout+gate confusion matrix: column b holds the
/// measured outcome distribution when basis state b is prepared with X gates
/// and the ansatz rotation structure is executed at angle zero under the
/// device noise model.
struct ConfusionMatrix {
  Eigen::MatrixXd m;  // (2^n) x (2^n), columns sum to 1
  uint32_t n_qubits = 0;
  double condition = 0.0;  // 2-norm condition estimate, set on build/load
  nlohmann::json metadata;

  nlohmann::json to_json() const;
  static ConfusionMatrix from_json(const nlohmann::json& j);
};

struct ConfusionOptions {
  uint64_t shots_per_state = 0;  // ignored when exact = true
  uint64_t seed = 0;
  bool twirl = false;  // twirl each calibration circuit (per-column seeds)
  bool exact = false;  // infinite-shot channel evolution instead of sampling
};

/// Builds the matrix column by column.  X-preparation gates in `circuit`
/// are replaced by each column's preparation; rotations run at angle zero
/// (over-rotation and depolarizing noise still apply).
ConfusionMatrix build_confusion_matrix(const Circuit& circuit,
                                       const NoiseModel& model,
                                       const ConfusionOptions& options);

/// Solves M x = raw for the mitigated quasi-probability vector.
/// Uses an LU solve; falls back to a least-squares solve when the condition
/// number exceeds 1e12 and throws when the matrix is numerically singular
/// (condition > 1e15), recommending more calibration shots.  The result sums
/// to 1 (columns of M sum to 1) but entries may be negative.
std::vector<double> mitigate(const ConfusionMatrix& confusion,
                             const std::vector<double>& raw);

/// Keeps only outcomes whose alpha-block and beta-block Hamming weights
/// match the target electron counts (alpha block = qubits 0..n_act-1,
/// beta block = qubits n_act..2*n_act-1).  Throws when nothing survives.
CountsHistogram post_select(const CountsHistogram& counts, uint32_t n_act,
                            uint32_t n_alpha, uint32_t n_beta);

/// Same selection on a (quasi-)probability vector, renormalized by the
/// retained mass; throws when the retained mass is not positive.
std::vector<double> post_select_quasi(const std::vector<double>& quasi,
                                      uint32_t n_act, uint32_t n_alpha,
                                      uint32_t n_beta);

/// Rescales the symmetrized matrix so its trace equals the electron count:
/// with eigendecomposition D = V diag(l) V^T this is V diag(l * c) V^T,
/// c = n_sigma / sum(l) — eigenvectors are untouched.  Throws when
/// |sum(l)| < 1e-6.  Idempotent for a matrix already at the target trace.
Eigen::MatrixXd purify_rdm(const Eigen::MatrixXd& rdm, double n_sigma);

struct FilterVerdict {
  bool accepted = true;
  std::string reason;              // empty when accepted
  std::vector<double> offending;   // eigenvalues outside the window
};

/// Accepts the matrix iff every eigenvalue of its symmetrization lies in
/// [-epsilon, 1 + epsilon].  Acceptance is monotone in epsilon.
FilterVerdict filter_rdm(const Eigen::MatrixXd& rdm, double epsilon = 0.05);

}  // namespace hfc
