#include "hfc/mitigation.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "hfc/rng.hpp"

namespace hfc {

namespace {

constexpr uint64_t kCalibTwirlLabel = 0x747769726c000001ull;
constexpr uint64_t kCalibShotLabel = 0x63616c6962000002ull;

uint64_t circuit_fingerprint(const Circuit& c) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t v) {
    h ^= v;
    h *= 0x100000001b3ull;
  };
  mix(c.n_qubits);
  mix(c.n_params);
  for (const auto& op : c.ops) {
    if (const auto* x = std::get_if<Circuit::XGate>(&op)) {
      mix(1);
      mix(x->qubit);
    } else if (const auto* hh = std::get_if<Circuit::HGate>(&op)) {
      mix(2);
      mix(hh->qubit);
    } else if (const auto* s = std::get_if<Circuit::SdgGate>(&op)) {
      mix(3);
      mix(s->qubit);
    } else if (const auto* r = std::get_if<Circuit::Rotation>(&op)) {
      mix(4);
      mix(r->pauli.x_mask());
      mix(r->pauli.z_mask());
      mix(static_cast<uint64_t>(r->param_index));
      mix(std::bit_cast<uint64_t>(r->angle_sign));
    } else if (const auto* f = std::get_if<Circuit::FixedPauli>(&op)) {
      mix(5);
      mix(f->pauli.x_mask());
      mix(f->pauli.z_mask());
    }
  }
  return h;
}

std::string hex64(uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double condition_estimate(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace

nlohmann::json ConfusionMatrix::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["metadata"] = metadata;
  std::vector<double> flat(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      flat[r * m.cols() + c] = m(r, c);
    }
  }
  j["matrix_row_major"] = flat;
  return j;
}

ConfusionMatrix ConfusionMatrix::from_json(const nlohmann::json& j) {
  ConfusionMatrix out;
  out.n_qubits = j.at("n_qubits").get<uint32_t>();
  out.metadata = j.value("metadata", nlohmann::json::object());
  const auto flat = j.at("matrix_row_major").get<std::vector<double>>();
  const uint64_t dim = 1ull << out.n_qubits;
  if (flat.size() != dim * dim) {
    throw std::invalid_argument("confusion matrix payload has wrong size");
  }
  out.m.resize(dim, dim);
  for (uint64_t r = 0; r < dim; ++r) {
    for (uint64_t c = 0; c < dim; ++c) out.m(r, c) = flat[r * dim + c];
  }
  out.condition = condition_estimate(out.m);
  return out;
}

ConfusionMatrix build_confusion_matrix(const Circuit& circuit,
                                       const NoiseModel& model,
                                       const ConfusionOptions& options) {
  const uint32_t n = circuit.n_qubits;
  if (!options.exact && options.shots_per_state == 0) {
    throw std::invalid_argument("calibration needs shots_per_state > 0");
  }
  // Rotation structure only; preparation gates are injected per column.
  Circuit body;
  body.n_qubits = n;
  body.n_params = circuit.n_params;
  for (const auto& op : circuit.ops) {
    if (!std::holds_alternative<Circuit::XGate>(op)) body.ops.push_back(op);
  }
  const std::vector<double> zeros(circuit.n_params, 0.0);
  const uint64_t dim = 1ull << n;

  ConfusionMatrix out;
  out.n_qubits = n;
  out.m.resize(dim, dim);
  for (uint64_t b = 0; b < dim; ++b) {
    Circuit col;
    col.n_qubits = n;
    col.n_params = body.n_params;
    for (uint32_t q = 0; q < n; ++q) {
      if ((b >> q) & 1) col.ops.push_back(Circuit::XGate{q});
    }
    col.ops.insert(col.ops.end(), body.ops.begin(), body.ops.end());
    if (options.twirl) {
      col = pauli_twirl(col, derive_stream(options.seed, {b, kCalibTwirlLabel}));
    }
    std::vector<double> probs;
    if (options.exact) {
      probs = exact_outcome_distribution(col, zeros, model);
    } else {
      const CountsHistogram counts =
          noisy_execute(col, zeros, model, options.shots_per_state,
                        derive_stream(options.seed, {b, kCalibShotLabel}));
      probs = counts.probabilities();
    }
    for (uint64_t r = 0; r < dim; ++r) out.m(r, b) = probs[r];
  }
  out.condition = condition_estimate(out.m);
  out.metadata = {{"circuit", hex64(circuit_fingerprint(circuit))},
                  {"noise", model.to_json()},
                  {"shots_per_state", options.shots_per_state},
                  {"seed", options.seed},
                  {"twirl", options.twirl},
                  {"exact", options.exact}};
  return out;
}

std::vector<double> mitigate(const ConfusionMatrix& confusion,
                             const std::vector<double>& raw) {
  const uint64_t dim = 1ull << confusion.n_qubits;
  if (raw.size() != dim) {
    throw std::invalid_argument("distribution size does not match matrix");
  }
  double mass = 0;
  for (double p : raw) mass += p;
  if (std::abs(mass - 1.0) > 1e-6) {
    throw std::invalid_argument("input distribution must be normalized");
  }
  Eigen::VectorXd rhs(dim);
  for (uint64_t i = 0; i < dim; ++i) rhs(i) = raw[i];

  if (!std::isfinite(confusion.condition) || confusion.condition > 1e15) {
    throw std::runtime_error(
        "confusion matrix is numerically singular; rebuild the calibration "
        "with more shots per prepared state");
  }
  Eigen::VectorXd x;
  if (confusion.condition > 1e12) {
    x = confusion.m.colPivHouseholderQr().solve(rhs);
  } else {
    x = confusion.m.partialPivLu().solve(rhs);
  }
  return std::vector<double>(x.data(), x.data() + dim);
}

namespace {

bool conforms(uint64_t outcome, uint32_t n_act, uint32_t n_alpha,
              uint32_t n_beta) {
  const uint64_t alpha_mask = (1ull << n_act) - 1;
  const uint64_t beta_mask = alpha_mask << n_act;
  return std::popcount(outcome & alpha_mask) == static_cast<int>(n_alpha) &&
         std::popcount(outcome & beta_mask) == static_cast<int>(n_beta);
}

}  // namespace

CountsHistogram post_select(const CountsHistogram& counts, uint32_t n_act,
                            uint32_t n_alpha, uint32_t n_beta) {
  if (counts.n_qubits != 2 * n_act) {
    throw std::invalid_argument("histogram register does not match layout");
  }
  CountsHistogram out(counts.n_qubits);
  for (uint64_t m = 0; m < counts.counts.size(); ++m) {
    if (counts.counts[m] && conforms(m, n_act, n_alpha, n_beta)) {
      out.record(m, counts.counts[m]);
    }
  }
  if (out.total == 0) {
    throw std::runtime_error(
        "post-selection removed every shot; electron-count sectors saw no "
        "counts");
  }
  return out;
}

std::vector<double> post_select_quasi(const std::vector<double>& quasi,
                                      uint32_t n_act, uint32_t n_alpha,
                                      uint32_t n_beta) {
  if (quasi.size() != (size_t(1) << (2 * n_act))) {
    throw std::invalid_argument("distribution size does not match layout");
  }
  std::vector<double> out(quasi.size(), 0.0);
  double mass = 0;
  for (uint64_t m = 0; m < quasi.size(); ++m) {
    if (conforms(m, n_act, n_alpha, n_beta)) {
      out[m] = quasi[m];
      mass += quasi[m];
    }
  }
  if (mass <= 0) {
    throw std::runtime_error(
        "post-selection retained no probability mass in the electron-count "
        "sector");
  }
  for (double& p : out) p /= mass;
  return out;
}

Eigen::MatrixXd purify_rdm(const Eigen::MatrixXd& rdm, double n_sigma) {
  if (rdm.rows() != rdm.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  const Eigen::MatrixXd sym = 0.5 * (rdm + rdm.transpose());
  const double trace = sym.trace();  // = sum of eigenvalues
  if (std::abs(trace) < 1e-6) {
    throw std::runtime_error(
        "cannot rescale a density matrix with near-zero trace");
  }
  return (n_sigma / trace) * sym;
}

FilterVerdict filter_rdm(const Eigen::MatrixXd& rdm, double epsilon) {
  if (rdm.rows() != rdm.cols()) {
    throw std::invalid_argument("density matrix must be square");
  }
  const Eigen::MatrixXd sym = 0.5 * (rdm + rdm.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  FilterVerdict verdict;
  char buf[128];
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam < -epsilon) {
      verdict.accepted = false;
      verdict.offending.push_back(lam);
      std::snprintf(buf, sizeof(buf), "eigenvalue %.6g below -%.6g; ", lam,
                    epsilon);
      verdict.reason += buf;
    } else if (lam > 1.0 + epsilon) {
      verdict.accepted = false;
      verdict.offending.push_back(lam);
      std::snprintf(buf, sizeof(buf), "eigenvalue %.6g above %.6g; ", lam,
                    1.0 + epsilon);
      verdict.reason += buf;
    }
  }
  if (!verdict.reason.empty()) {
    verdict.reason.resize(verdict.reason.size() - 2);  // trailing "; "
  }
  return verdict;
}

}  // namespace hfc
