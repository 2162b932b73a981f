#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hfc/pauli.hpp"
#include "hfc/statevector.hpp"

#include <json.hpp>

namespace hfc {

/// Serializable description of a state-preparation circuit: X gates on the
/// reference determinant's occupied qubits followed by parameterized
/// multi-qubit Pauli rotations exp(-i theta/2 P).
struct CircuitSpec {
  uint32_t n_qubits = 0;
  std::vector<uint32_t> hf_occupied;
  struct RotationSpec {
    std::string pauli;
    int param = 0;
  };
  std::vector<RotationSpec> rotations;
  std::vector<double> params;  // default parameter values

  size_t n_params() const { return params.size(); }
  /// Throws std::invalid_argument on malformed content (bad Pauli text,
  /// parameter index out of range, occupied qubit out of range).
  void validate() const;

  static CircuitSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Executable gate list.  Beyond the serializable ops (X gates and Pauli
/// rotations) a circuit may contain measurement-basis gates (H, S-dagger)
/// and fixed Pauli layers introduced by twirling.
struct Circuit {
  struct XGate {
    uint32_t qubit;
  };
  struct HGate {
    uint32_t qubit;
  };
  struct SdgGate {
    uint32_t qubit;
  };
  struct Rotation {
    PauliString pauli;
    int param_index;
    double angle_sign = 1.0;  // applied angle = angle_sign * theta[param_index]
  };
  struct FixedPauli {
    PauliString pauli;
  };
  using Op = std::variant<XGate, HGate, SdgGate, Rotation, FixedPauli>;

  uint32_t n_qubits = 0;
  size_t n_params = 0;
  std::vector<Op> ops;

  size_t rotation_count() const;
};

Circuit make_circuit(const CircuitSpec& spec);

/// Executes the circuit on |0..0> with the given parameter values
/// (size must equal n_params); `extra_angle` is added to every rotation's
/// applied angle (used for coherent over-rotation).
StateVector run_circuit(const Circuit& circuit, std::span<const double> params,
                        double extra_angle = 0.0);

/// Appends the measurement-basis gates for `p` (H on X factors, S-dagger
/// then H on Y factors) so a Z-basis readout measures `p`'s parity on its
/// support.
Circuit with_measurement_basis(const Circuit& circuit, const PauliString& p);

/// Wraps every rotation of weight >= 2 in a random Pauli frame drawn from
/// the full Pauli group on its support: ops Q, R(+-theta), Q with the angle
/// sign flipped when Q anticommutes with the rotation generator.  The ideal
/// action of the circuit is unchanged; coherent over-rotation errors are
/// randomized to +-delta across frames.
Circuit pauli_twirl(const Circuit& circuit, uint64_t seed);

}  // namespace hfc
