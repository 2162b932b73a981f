#include "hfc/rdm.hpp"

#include <bit>
#include <stdexcept>

#include "hfc/rng.hpp"

namespace hfc {

namespace {

void check_layout(const ActiveSpaceLayout& layout) {
  if (layout.n_act == 0 || layout.n_qubits() > 24) {
    throw std::invalid_argument("bad active-space layout");
  }
  if (layout.n_alpha > layout.n_act || layout.n_beta > layout.n_act) {
    throw std::invalid_argument("electron count exceeds active orbitals");
  }
}

// X_qv Z.. X_qw or Y_qv Z.. Y_qw between two qubits of one spin block.
PauliString chained_pair(uint32_t n_qubits, uint32_t qv, uint32_t qw,
                         char basis) {
  uint64_t x = 0, z = 0;
  const uint64_t bv = 1ull << qv, bw = 1ull << qw;
  x |= bv | bw;
  if (basis == 'Y') z |= bv | bw;
  for (uint32_t q = qv + 1; q < qw; ++q) z |= 1ull << q;
  return PauliString(n_qubits, x, z);
}

}  // namespace

nlohmann::json SpinRDM::to_json(const std::string& provenance) const {
  nlohmann::json j;
  j["n_act"] = n_act;
  j["provenance"] = provenance;
  auto pack = [](const Eigen::MatrixXd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
      rows.push_back(row);
    }
    return rows;
  };
  j["alpha"] = pack(alpha);
  j["beta"] = pack(beta);
  return j;
}

SpinRDM SpinRDM::from_json(const nlohmann::json& j) {
  SpinRDM out;
  out.n_act = j.at("n_act").get<uint32_t>();
  auto unpack = [&](const nlohmann::json& rows) {
    Eigen::MatrixXd m(out.n_act, out.n_act);
    for (uint32_t r = 0; r < out.n_act; ++r) {
      for (uint32_t c = 0; c < out.n_act; ++c) m(r, c) = rows.at(r).at(c);
    }
    return m;
  };
  out.alpha = unpack(j.at("alpha"));
  out.beta = unpack(j.at("beta"));
  return out;
}

SpinRDM exact_rdm(const StateVector& state, const ActiveSpaceLayout& layout) {
  check_layout(layout);
  if (state.n_qubits() != layout.n_qubits()) {
    throw std::invalid_argument("state register does not match layout");
  }
  SpinRDM rdm;
  rdm.n_act = layout.n_act;
  const auto probs = state.outcome_probabilities();
  for (int spin = 0; spin < 2; ++spin) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(layout.n_act, layout.n_act);
    for (uint32_t v = 0; v < layout.n_act; ++v) {
      const uint64_t bit = 1ull << layout.qubit(v, spin);
      double occ = 0;
      for (uint64_t m = 0; m < probs.size(); ++m) {
        if (m & bit) occ += probs[m];
      }
      d(v, v) = occ;
    }
    for (uint32_t v = 0; v < layout.n_act; ++v) {
      for (uint32_t w = v + 1; w < layout.n_act; ++w) {
        const uint32_t qv = layout.qubit(v, spin), qw = layout.qubit(w, spin);
        const double xx =
            state.expectation(chained_pair(state.n_qubits(), qv, qw, 'X'));
        const double yy =
            state.expectation(chained_pair(state.n_qubits(), qv, qw, 'Y'));
        d(v, w) = d(w, v) = 0.25 * (xx + yy);
      }
    }
    (spin == 0 ? rdm.alpha : rdm.beta) = d;
  }
  return rdm;
}

OccupationNumbers occupation_numbers(const SpinRDM& rdm) {
  OccupationNumbers occ;
  for (int spin = 0; spin < 2; ++spin) {
    const Eigen::MatrixXd& d = spin == 0 ? rdm.alpha : rdm.beta;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(
        0.5 * (d + d.transpose()));
    std::vector<double> vals(es.eigenvalues().data(),
                             es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(vals.rbegin(), vals.rend());
    (spin == 0 ? occ.alpha : occ.beta) = std::move(vals);
  }
  return occ;
}

uint64_t MeasurementPlan::total_shots() const {
  uint64_t total = 0;
  for (const auto& s : settings) total += s.shots;
  return total;
}

MeasurementPlan plan_measurements(uint32_t n_act, uint64_t shots_per_string) {
  if (n_act == 0 || 2 * n_act > 24) {
    throw std::invalid_argument("bad active orbital count");
  }
  if (shots_per_string == 0) {
    throw std::invalid_argument("shots_per_string must be positive");
  }
  MeasurementPlan plan;
  plan.n_act = n_act;
  plan.shots_per_string = shots_per_string;

  MeasurementSetting zset;
  zset.kind = MeasurementSetting::Kind::Diagonal;
  zset.basis = 'Z';
  zset.shots = shots_per_string;
  zset.label = "Z";
  plan.settings.push_back(zset);

  const uint32_t n_qubits = 2 * n_act;
  for (int spin = 0; spin < 2; ++spin) {
    for (uint32_t v = 0; v < n_act; ++v) {
      for (uint32_t w = v + 1; w < n_act; ++w) {
        for (char basis : {'X', 'Y'}) {
          MeasurementSetting s;
          s.kind = MeasurementSetting::Kind::OffDiagonal;
          s.spin = spin;
          s.v = v;
          s.w = w;
          s.basis = basis;
          const uint32_t qv = spin == 0 ? v : n_act + v;
          const uint32_t qw = spin == 0 ? w : n_act + w;
          s.observable = chained_pair(n_qubits, qv, qw, basis);
          s.shots = shots_per_string;
          s.label = std::string(1, basis) + (spin == 0 ? "a(" : "b(") +
                    std::to_string(v) + "," + std::to_string(w) + ")";
          plan.settings.push_back(s);
        }
      }
    }
  }
  return plan;
}

std::vector<SettingResult> run_measurement_plan(
    const MeasurementPlan& plan, const Circuit& ansatz,
    std::span<const double> params, const NoiseModel& model, uint64_t seed,
    bool twirl) {
  std::vector<SettingResult> results;
  results.reserve(plan.settings.size());
  for (size_t i = 0; i < plan.settings.size(); ++i) {
    const auto& setting = plan.settings[i];
    Circuit circuit = setting.observable
                          ? with_measurement_basis(ansatz, *setting.observable)
                          : ansatz;
    if (twirl) {
      circuit = pauli_twirl(circuit, derive_stream(seed, {i, kSettingTwirlLabel}));
    }
    CountsHistogram counts =
        noisy_execute(circuit, params, model, setting.shots,
                      derive_stream(seed, {i, kSettingShotLabel}));
    results.push_back({setting, std::move(counts)});
  }
  return results;
}

SpinRDM estimate_rdm(const std::vector<SettingResult>& results,
                     const ActiveSpaceLayout& layout,
                     const EstimationOptions& options) {
  check_layout(layout);
  SpinRDM rdm;
  rdm.n_act = layout.n_act;
  rdm.alpha = Eigen::MatrixXd::Zero(layout.n_act, layout.n_act);
  rdm.beta = Eigen::MatrixXd::Zero(layout.n_act, layout.n_act);

  bool saw_diagonal = false;
  for (const auto& result : results) {
    if (result.counts.n_qubits != layout.n_qubits()) {
      throw std::invalid_argument("result register does not match layout");
    }
    std::vector<double> probs = result.counts.probabilities();
    if (options.confusion != nullptr) {
      probs = mitigate(*options.confusion, probs);
    }
    const auto& setting = result.setting;
    if (setting.kind == MeasurementSetting::Kind::Diagonal) {
      if (saw_diagonal) {
        throw std::invalid_argument("duplicate computational-basis setting");
      }
      saw_diagonal = true;
      if (options.post_select_diagonal) {
        probs = post_select_quasi(probs, layout.n_act, layout.n_alpha,
                                  layout.n_beta);
      }
      for (int spin = 0; spin < 2; ++spin) {
        Eigen::MatrixXd& d = spin == 0 ? rdm.alpha : rdm.beta;
        for (uint32_t v = 0; v < layout.n_act; ++v) {
          const uint64_t bit = 1ull << layout.qubit(v, spin);
          double occ = 0;
          for (uint64_t m = 0; m < probs.size(); ++m) {
            if (m & bit) occ += probs[m];
          }
          d(v, v) = occ;
        }
      }
    } else {
      if (!setting.observable) {
        throw std::invalid_argument("off-diagonal setting lacks its string");
      }
      const double parity =
          parity_mean(probs, setting.observable->support_mask());
      Eigen::MatrixXd& d = setting.spin == 0 ? rdm.alpha : rdm.beta;
      // X and Y contributions each carry 1/4; their sum is Re<a+_v a_w>.
      d(setting.v, setting.w) += 0.25 * parity;
      d(setting.w, setting.v) += 0.25 * parity;
    }
  }
  if (!saw_diagonal) {
    throw std::invalid_argument("plan results lack the computational-basis "
                                "setting");
  }
  return rdm;
}

}  // namespace hfc
