#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "hfc/circuit.hpp"
#include "hfc/rdm.hpp"

namespace hfc {

/// Reference coefficient of one dominant error channel as tabulated with
/// the dataset: contribution value * prefactor * Delta D_spin[v, w].
struct DominantRef {
  uint32_t v = 0, w = 0;
  int spin = 0;  // 0 alpha, 1 beta
  double value = 0.0;
};

struct Nucleus {
  std::string label;
  double g_factor = 0.0;
  Eigen::MatrixXd a_alpha, a_beta;  // symmetric amplitude matrices
  double inactive_offset_mhz = 0.0;
  double reference_total_mhz = 0.0;
  double shot_noise_mean_mhz = 0.0;
  double shot_noise_std_mhz = 0.0;
  double prefactor_reference_mhz = 0.0;
  std::vector<DominantRef> dominant_reference;
};

/// One molecule's bundled inputs and reference values: the optimized ansatz
/// circuit, the published state amplitudes it must reproduce, per-nucleus
/// amplitude matrices with frozen inactive offsets, and the shot budget of
/// the measurement plan.
struct MoleculeDataset {
  std::string name;
  ActiveSpaceLayout layout;
  double m_s = 0.0;
  double reference_energy = 0.0;
  CircuitSpec circuit;
  std::vector<std::pair<std::string, double>> golden_state;  // ket -> amp
  std::vector<Nucleus> nuclei;
  uint64_t shots_per_string = 0;
  uint64_t calibration_shots = 0;
  uint64_t total_shot_budget = 0;

  static MoleculeDataset from_json(const nlohmann::json& j);
  /// Ideal circuit state at the dataset parameters.
  StateVector prepared_state() const;
};

struct SelfCheckReport {
  bool ok = true;
  std::vector<std::string> issues;
};

/// Validates the dataset against its own reference values:
///  - every published amplitude is reproduced within 1e-4;
///  - every dominant-channel coefficient matches the amplitude matrices
///    within 0.5% (and the |A| >= 0.1 channel set matches exactly);
///  - the coupling prefactor matches its rounded reference within 0.1%;
///  - the reference determinant matches the electron counts.
SelfCheckReport dataset_self_check(const MoleculeDataset& dataset);

/// Bundled datasets: "oh", "no", "oh+" (alias "ohplus").  Loaded from the
/// embedded copies of the files under data/; throws on unknown names.
const MoleculeDataset& builtin_dataset(const std::string& name);
std::vector<std::string> builtin_dataset_names();

MoleculeDataset load_dataset_file(const std::string& path);

}  // namespace hfc
