#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hfc/dataset.hpp"
#include "hfc/hyperfine.hpp"
#include "hfc/mitigation.hpp"
#include "hfc/noise.hpp"
#include "hfc/rdm.hpp"

namespace hfc {

/// Which correction stages an emulated run applies.
///  - em:     confusion-matrix mitigation of every measured distribution
///  - ps:     electron-count post-selection of the computational-basis
///            distribution
///  - purify: trace rescaling of each estimated spin block
///  - twirl:  random Pauli frames around every entangling rotation
/// Parsed from '+'-joined tokens: "em", "ps", "puri", "es" (twirl), "raw".
struct PipelineFlags {
  bool em = false;
  bool ps = false;
  bool purify = false;
  bool twirl = false;

  static PipelineFlags parse(const std::string& text);
  std::string to_string() const;
};

struct NucleusOutcome {
  std::string label;
  double active_mhz = 0.0;
  double inactive_mhz = 0.0;
  double total_mhz = 0.0;
  /// Estimate minus exact (full linear error).
  double deviation_mhz = 0.0;
  /// Dominant-channel split of the deviation, same sign convention.
  double deviation_alpha_mhz = 0.0;
  double deviation_beta_mhz = 0.0;
};

struct ExperimentRecord {
  int run_id = 0;
  uint64_t seed = 0;
  SpinRDM rdm_estimated;  // before purification
  SpinRDM rdm;            // final (equals rdm_estimated unless purified)
  OccupationNumbers occupations;
  bool accepted = true;
  std::string filter_reason;
  std::vector<NucleusOutcome> nuclei;
};

struct ExperimentSummary {
  std::string molecule;
  std::string pipeline;
  uint64_t master_seed = 0;
  NoiseModel noise;
  uint64_t shots_per_string = 0;
  std::vector<ExperimentRecord> runs;
  size_t n_accepted = 0;

  struct Aggregate {
    std::string label;
    double mean_total_mhz = 0.0;
    double std_total_mhz = 0.0;
    double mean_deviation_mhz = 0.0;
    double std_deviation_mhz = 0.0;
    double exact_total_mhz = 0.0;
  };
  std::vector<Aggregate> aggregates;  // over accepted runs

  nlohmann::json to_json() const;
  static ExperimentSummary from_json(const nlohmann::json& j);
};

/// Stream labels for the child seeds used by `run_experiment` and
/// `shot_noise_study`: run r of an experiment uses
/// derive_stream(seed, {kRunStreamLabel, r}), from which the calibration
/// seed (kCalibrationStreamLabel) and the measurement-plan seed
/// (kPlanStreamLabel) derive; rep r of a sampling study uses
/// derive_stream(seed, {kRepStreamLabel, r}) as its plan seed.
inline constexpr uint64_t kRunStreamLabel = 0x72756e2d69640001ull;
inline constexpr uint64_t kCalibrationStreamLabel = 0x63616c69622d0002ull;
inline constexpr uint64_t kPlanStreamLabel = 0x706c616e2d730003ull;
inline constexpr uint64_t kRepStreamLabel = 0x7265702d69640004ull;

/// Emulates `n_runs` independent device runs of the full measurement plan
/// under the noise model, applies the pipeline stages, evaluates couplings,
/// and aggregates over filter-accepted runs.  Per-run seeds derive from
/// (seed, run index); results are reproducible and order-independent.
ExperimentSummary run_experiment(const MoleculeDataset& dataset,
                                 const PipelineFlags& pipeline,
                                 const NoiseModel& noise, int n_runs,
                                 uint64_t seed);

struct ShotNoiseStats {
  std::string molecule;
  int n_reps = 0;
  uint64_t shots_per_string = 0;
  struct Row {
    std::string label;
    double mean_total_mhz = 0.0;
    double std_total_mhz = 0.0;
    double exact_total_mhz = 0.0;
    double reference_mean_mhz = 0.0;  // tabulated sampling-only statistics
    double reference_std_mhz = 0.0;
  };
  std::vector<Row> rows;
  std::vector<std::vector<double>> totals;  // [nucleus][rep]

  nlohmann::json to_json() const;
};

/// Noiseless sampling-statistics study: repeats the measurement plan
/// `n_reps` times on the ideal state (no mitigation stages) and reports the
/// spread of the resulting couplings.  Setting distributions are cached, so
/// reps cost only the multinomial draws.
ShotNoiseStats shot_noise_study(const MoleculeDataset& dataset, int n_reps,
                                uint64_t seed);

/// Writes summary.json, aggregates.csv, runs.csv and occupations.csv into
/// `out_dir` (created if needed).  Output bytes depend only on the summary
/// contents: fixed float formatting, sorted keys, LF line endings.
void write_report(const std::vector<ExperimentSummary>& summaries,
                  const std::string& out_dir);

}  // namespace hfc
