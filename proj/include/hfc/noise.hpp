#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hfc/circuit.hpp"
#include "hfc/histogram.hpp"

#include <json.hpp>

namespace hfc {

/// Stochastic device model applied by `noisy_execute`:
///  - every Pauli rotation is executed with angle + over_rot (coherent
///    over-rotation, radians);
///  - after each rotation, with probability p_dep1 (weight-1 support) or
///    p_dep2 (weight >= 2) a uniformly random non-identity Pauli on the
///    rotation's support is inserted;
///  - readout flips each measured bit independently: p_read_01 is the
///    probability of reading 1 for a true 0, p_read_10 of reading 0 for a
///    true 1.
struct NoiseModel {
  double p_read_01 = 0.0;
  double p_read_10 = 0.0;
  double p_dep1 = 0.0;
  double p_dep2 = 0.0;
  double over_rot = 0.0;

  bool is_zero() const {
    return p_read_01 == 0 && p_read_10 == 0 && p_dep1 == 0 && p_dep2 == 0 &&
           over_rot == 0;
  }
  double dep_prob(int weight) const { return weight >= 2 ? p_dep2 : p_dep1; }

  /// Named presets: "zero" (noiseless) and "torino-like"
  /// (p_read 2e-2 both ways, p_dep2 4e-3, p_dep1 4e-4, over_rot 1e-2 rad).
  static NoiseModel preset(const std::string& name);
  static NoiseModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Stream labels used to derive independent child generators from the master
/// seed.  Measurement sampling always uses Rng(seed) directly, so a zero
/// noise model reproduces StateVector::sample bit for bit.
inline constexpr uint64_t kInsertStreamLabel = 0x696e736572740001ull;
inline constexpr uint64_t kReadoutStreamLabel = 0x726561646f750002ull;

/// Samples `shots` readout outcomes of the circuit under the noise model
/// using per-shot noise trajectories.  Deterministic in (circuit, params,
/// model, shots, seed); with a zero model the result equals
/// run_circuit(...).sample(shots, seed) exactly.
CountsHistogram noisy_execute(const Circuit& circuit,
                              std::span<const double> params,
                              const NoiseModel& model, uint64_t shots,
                              uint64_t seed);

/// Applies per-bit readout flips to every recorded shot (outcomes processed
/// in ascending index order).  `noisy_execute` funnels its readout stage
/// through this same routine with Rng(derive_stream(seed,
/// kReadoutStreamLabel)), so a readout-only model factorizes exactly.
CountsHistogram apply_readout_noise(const CountsHistogram& counts,
                                    const NoiseModel& model, uint64_t seed);

/// Infinite-shot oracle: evolves the density matrix through the circuit with
/// the depolarizing channel applied in closed form after each rotation and
/// the readout channel applied to the final outcome distribution.
/// Exact but exponential in memory (4^n); intended for registers up to ~8
/// qubits.
std::vector<double> exact_outcome_distribution(const Circuit& circuit,
                                               std::span<const double> params,
                                               const NoiseModel& model);

}  // namespace hfc
