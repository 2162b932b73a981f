#include "hfc/circuit.hpp"

#include <stdexcept>

#include "hfc/rng.hpp"

namespace hfc {

void CircuitSpec::validate() const {
  if (n_qubits == 0 || n_qubits > 24) {
    throw std::invalid_argument("circuit spec: bad qubit count");
  }
  for (uint32_t q : hf_occupied) {
    if (q >= n_qubits) {
      throw std::invalid_argument("circuit spec: occupied qubit out of range");
    }
  }
  for (const auto& r : rotations) {
    PauliString::parse(r.pauli, n_qubits);  // throws on malformed text
    if (r.param < 0 || static_cast<size_t>(r.param) >= params.size()) {
      throw std::invalid_argument("circuit spec: parameter index " +
                                  std::to_string(r.param) + " out of range");
    }
  }
}

CircuitSpec CircuitSpec::from_json(const nlohmann::json& j) {
  CircuitSpec spec;
  spec.n_qubits = j.at("n_qubits").get<uint32_t>();
  spec.hf_occupied = j.at("hf_occupied").get<std::vector<uint32_t>>();
  for (const auto& r : j.at("rotations")) {
    spec.rotations.push_back(
        {r.at("pauli").get<std::string>(), r.at("param").get<int>()});
  }
  spec.params = j.at("params").get<std::vector<double>>();
  spec.validate();
  return spec;
}

nlohmann::json CircuitSpec::to_json() const {
  nlohmann::json j;
  j["n_qubits"] = n_qubits;
  j["hf_occupied"] = hf_occupied;
  j["rotations"] = nlohmann::json::array();
  for (const auto& r : rotations) {
    j["rotations"].push_back({{"pauli", r.pauli}, {"param", r.param}});
  }
  j["params"] = params;
  return j;
}

size_t Circuit::rotation_count() const {
  size_t n = 0;
  for (const auto& op : ops) {
    if (std::holds_alternative<Rotation>(op)) ++n;
  }
  return n;
}

Circuit make_circuit(const CircuitSpec& spec) {
  spec.validate();
  Circuit c;
  c.n_qubits = spec.n_qubits;
  c.n_params = spec.params.size();
  for (uint32_t q : spec.hf_occupied) c.ops.push_back(Circuit::XGate{q});
  for (const auto& r : spec.rotations) {
    c.ops.push_back(Circuit::Rotation{
        PauliString::parse(r.pauli, spec.n_qubits), r.param, 1.0});
  }
  return c;
}

StateVector run_circuit(const Circuit& circuit, std::span<const double> params,
                        double extra_angle) {
  if (params.size() != circuit.n_params) {
    throw std::invalid_argument("parameter count mismatch: circuit expects " +
                                std::to_string(circuit.n_params) + ", got " +
                                std::to_string(params.size()));
  }
  StateVector state(circuit.n_qubits);
  for (const auto& op : circuit.ops) {
    if (const auto* x = std::get_if<Circuit::XGate>(&op)) {
      state.apply_x(x->qubit);
    } else if (const auto* h = std::get_if<Circuit::HGate>(&op)) {
      state.apply_h(h->qubit);
    } else if (const auto* s = std::get_if<Circuit::SdgGate>(&op)) {
      state.apply_sdg(s->qubit);
    } else if (const auto* r = std::get_if<Circuit::Rotation>(&op)) {
      state.apply_pauli_rotation(
          r->pauli, r->angle_sign * params[r->param_index] + extra_angle);
    } else if (const auto* f = std::get_if<Circuit::FixedPauli>(&op)) {
      state.apply_pauli(f->pauli);
    }
  }
  return state;
}

Circuit with_measurement_basis(const Circuit& circuit, const PauliString& p) {
  if (p.n_qubits() != circuit.n_qubits) {
    throw std::invalid_argument("register size mismatch");
  }
  Circuit out = circuit;
  for (uint32_t q = 0; q < p.n_qubits(); ++q) {
    switch (p.axis_at(q)) {
      case 'X':
        out.ops.push_back(Circuit::HGate{q});
        break;
      case 'Y':
        out.ops.push_back(Circuit::SdgGate{q});
        out.ops.push_back(Circuit::HGate{q});
        break;
      default:
        break;
    }
  }
  return out;
}

Circuit pauli_twirl(const Circuit& circuit, uint64_t seed) {
  Rng rng(seed);
  Circuit out;
  out.n_qubits = circuit.n_qubits;
  out.n_params = circuit.n_params;
  for (const auto& op : circuit.ops) {
    const auto* r = std::get_if<Circuit::Rotation>(&op);
    if (r == nullptr || r->pauli.weight() < 2) {
      out.ops.push_back(op);
      continue;
    }
    const auto support = r->pauli.support();
    const uint64_t k = support.size();
    // Two bits per support qubit: 00 -> I, 01 -> X, 10 -> Z, 11 -> Y.
    const uint64_t code = rng.below(1ull << (2 * k));
    uint64_t qx = 0, qz = 0;
    for (uint64_t i = 0; i < k; ++i) {
      const uint64_t bit = 1ull << support[i];
      if ((code >> (2 * i)) & 1) qx |= bit;
      if ((code >> (2 * i + 1)) & 1) qz |= bit;
    }
    const PauliString frame(circuit.n_qubits, qx, qz);
    if (frame.is_identity()) {
      out.ops.push_back(op);
      continue;
    }
    Circuit::Rotation wrapped = *r;
    if (!frame.commutes_with(r->pauli)) wrapped.angle_sign = -wrapped.angle_sign;
    out.ops.push_back(Circuit::FixedPauli{frame});
    out.ops.push_back(wrapped);
    out.ops.push_back(Circuit::FixedPauli{frame});
  }
  return out;
}

}  // namespace hfc
