#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hfc/circuit.hpp"
#include "hfc/histogram.hpp"
#include "hfc/mitigation.hpp"
#include "hfc/noise.hpp"
#include "hfc/pauli.hpp"
#include "hfc/statevector.hpp"

namespace hfc {

/// Blocked spin-orbital layout: alpha spin orbitals map to qubits
/// 0..n_act-1 and beta spin orbitals to qubits n_act..2*n_act-1.
struct ActiveSpaceLayout {
  uint32_t n_act = 0;
  uint32_t n_alpha = 0;
  uint32_t n_beta = 0;

  uint32_t n_qubits() const { return 2 * n_act; }
  uint32_t qubit(uint32_t orbital, int spin) const {
    return spin == 0 ? orbital : n_act + orbital;
  }
  uint32_t electrons(int spin) const { return spin == 0 ? n_alpha : n_beta; }
};

/// Spin-resolved one-particle density matrices (real symmetric, n_act x
/// n_act each).
struct SpinRDM {
  uint32_t n_act = 0;
  Eigen::MatrixXd alpha, beta;

  nlohmann::json to_json(const std::string& provenance) const;
  static SpinRDM from_json(const nlohmann::json& j);
};

/// Exact spin density matrices of a pure state: diagonals from qubit
/// occupation probabilities, off-diagonals from the chained two-string
/// observables (X..Z..X + Y..Z..Y) whose half-sum is the hopping operator
/// a+_v a_w + a+_w a_v.
SpinRDM exact_rdm(const StateVector& state, const ActiveSpaceLayout& layout);

/// Eigenvalues of each spin block in descending order.
struct OccupationNumbers {
  std::vector<double> alpha, beta;
};
OccupationNumbers occupation_numbers(const SpinRDM& rdm);

struct MeasurementSetting {
  enum class Kind { Diagonal, OffDiagonal };
  Kind kind = Kind::Diagonal;
  int spin = -1;           // 0 alpha, 1 beta; -1 for the shared Z setting
  uint32_t v = 0, w = 0;   // orbital pair (off-diagonal settings)
  char basis = 'Z';        // 'Z', 'X' or 'Y'
  // Z-chained two-point string realized by this setting ('X'/'Y' basis);
  // its support doubles as the readout parity mask.
  std::optional<PauliString> observable;
  uint64_t shots = 0;
  std::string label;
};

/// One computational-basis setting plus an X- and a Y-basis setting per
/// ordered orbital pair and spin block: 4 * C(n_act, 2) + 1 settings total,
/// each at `shots_per_string` shots.
struct MeasurementPlan {
  uint32_t n_act = 0;
  uint64_t shots_per_string = 0;
  std::vector<MeasurementSetting> settings;

  uint64_t total_shots() const;
};

MeasurementPlan plan_measurements(uint32_t n_act, uint64_t shots_per_string);

/// Stream labels for the per-setting child seeds used by
/// `run_measurement_plan`: setting i is twirled with
/// derive_stream(seed, {i, kSettingTwirlLabel}) and sampled with
/// derive_stream(seed, {i, kSettingShotLabel}).
inline constexpr uint64_t kSettingTwirlLabel = 0x706c616e74770001ull;
inline constexpr uint64_t kSettingShotLabel = 0x706c616e73680002ull;

struct SettingResult {
  MeasurementSetting setting;
  CountsHistogram counts;
};

/// Executes every setting of the plan against the ansatz circuit under the
/// noise model.  Per-setting seeds derive from (seed, setting index); when
/// `twirl` is set each measured circuit is independently Pauli-twirled.
std::vector<SettingResult> run_measurement_plan(
    const MeasurementPlan& plan, const Circuit& ansatz,
    std::span<const double> params, const NoiseModel& model, uint64_t seed,
    bool twirl);

struct EstimationOptions {
  const ConfusionMatrix* confusion = nullptr;  // apply when non-null
  bool post_select_diagonal = false;           // Z setting only
};

/// Assembles the spin density matrices from measured distributions:
/// mitigation (when configured) applies to every setting, post-selection to
/// the computational-basis setting only, diagonals read occupation
/// probabilities, off-diagonals average the X- and Y-basis parities with
/// the factor 1/4 linking the two chained strings to Re<a+_v a_w>.
SpinRDM estimate_rdm(const std::vector<SettingResult>& results,
                     const ActiveSpaceLayout& layout,
                     const EstimationOptions& options);

}  // namespace hfc
