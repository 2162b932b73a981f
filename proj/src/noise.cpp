#include "hfc/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "hfc/rng.hpp"

namespace hfc {

NoiseModel NoiseModel::preset(const std::string& name) {
  if (name == "zero" || name == "none") return NoiseModel{};
  if (name == "torino-like") {
    return NoiseModel{0.02, 0.02, 4e-4, 4e-3, 1e-2};
  }
  throw std::invalid_argument("unknown noise preset '" + name +
                              "' (known: zero, torino-like)");
}

NoiseModel NoiseModel::from_json(const nlohmann::json& j) {
  NoiseModel m;
  m.p_read_01 = j.value("p_read_01", 0.0);
  m.p_read_10 = j.value("p_read_10", 0.0);
  m.p_dep1 = j.value("p_dep1", 0.0);
  m.p_dep2 = j.value("p_dep2", 0.0);
  m.over_rot = j.value("over_rot", 0.0);
  for (double p : {m.p_read_01, m.p_read_10, m.p_dep1, m.p_dep2}) {
    if (p < 0 || p > 1) {
      throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
  }
  return m;
}

nlohmann::json NoiseModel::to_json() const {
  return {{"p_read_01", p_read_01},
          {"p_read_10", p_read_10},
          {"p_dep1", p_dep1},
          {"p_dep2", p_dep2},
          {"over_rot", over_rot}};
}

namespace {

// Decodes an insertion / twirl code (two bits per support qubit:
// 01 -> X, 10 -> Z, 11 -> Y) into a Pauli string on the full register.
PauliString decode_support_pauli(uint64_t code,
                                 const std::vector<uint32_t>& support,
                                 uint32_t n_qubits) {
  uint64_t x = 0, z = 0;
  for (size_t i = 0; i < support.size(); ++i) {
    const uint64_t bit = 1ull << support[i];
    if ((code >> (2 * i)) & 1) x |= bit;
    if ((code >> (2 * i + 1)) & 1) z |= bit;
  }
  return PauliString(n_qubits, x, z);
}

uint64_t flip_outcome(uint64_t outcome, uint32_t n_qubits,
                      const NoiseModel& model, Rng& rng) {
  for (uint32_t q = 0; q < n_qubits; ++q) {
    const bool bit = (outcome >> q) & 1;
    const double p = bit ? model.p_read_10 : model.p_read_01;
    if (rng.uniform() < p) outcome ^= 1ull << q;
  }
  return outcome;
}

struct RotationSite {
  size_t op_index;             // position of the rotation in circuit.ops
  double dep_prob;             // insertion probability for this rotation
  std::vector<uint32_t> support;
};

}  // namespace

CountsHistogram apply_readout_noise(const CountsHistogram& counts,
                                    const NoiseModel& model, uint64_t seed) {
  Rng rng(seed);
  CountsHistogram out(counts.n_qubits);
  if (model.p_read_01 == 0 && model.p_read_10 == 0) {
    out = counts;
    return out;
  }
  for (uint64_t idx = 0; idx < counts.counts.size(); ++idx) {
    for (uint64_t c = 0; c < counts.counts[idx]; ++c) {
      out.record(flip_outcome(idx, counts.n_qubits, model, rng));
    }
  }
  return out;
}

CountsHistogram noisy_execute(const Circuit& circuit,
                              std::span<const double> params,
                              const NoiseModel& model, uint64_t shots,
                              uint64_t seed) {
  if (params.size() != circuit.n_params) {
    throw std::invalid_argument("parameter count mismatch");
  }
  const uint32_t n = circuit.n_qubits;

  // One clean pass with over-rotated angles; snapshot the state right after
  // each rotation so trajectories with insertions resume mid-circuit.
  std::vector<RotationSite> sites;
  std::vector<StateVector> snapshots;
  StateVector state(n);
  for (size_t i = 0; i < circuit.ops.size(); ++i) {
    const auto& op = circuit.ops[i];
    if (const auto* x = std::get_if<Circuit::XGate>(&op)) {
      state.apply_x(x->qubit);
    } else if (const auto* h = std::get_if<Circuit::HGate>(&op)) {
      state.apply_h(h->qubit);
    } else if (const auto* s = std::get_if<Circuit::SdgGate>(&op)) {
      state.apply_sdg(s->qubit);
    } else if (const auto* f = std::get_if<Circuit::FixedPauli>(&op)) {
      state.apply_pauli(f->pauli);
    } else if (const auto* r = std::get_if<Circuit::Rotation>(&op)) {
      state.apply_pauli_rotation(
          r->pauli, r->angle_sign * params[r->param_index] + model.over_rot);
      sites.push_back({i, model.dep_prob(r->pauli.weight()), r->pauli.support()});
      snapshots.push_back(state);
    }
  }
  const Sampler clean_sampler(state);

  Rng rng_meas(seed);
  Rng rng_insert(derive_stream(seed, kInsertStreamLabel));
  const uint64_t readout_seed = derive_stream(seed, kReadoutStreamLabel);

  const size_t n_rot = sites.size();
  bool any_dep = false, uniform_dep = true;
  for (const auto& s : sites) {
    if (s.dep_prob > 0) any_dep = true;
    if (s.dep_prob != sites.front().dep_prob) uniform_dep = false;
  }
  const double uniform_p = n_rot ? sites.front().dep_prob : 0.0;
  const double log1m_p =
      (uniform_dep && uniform_p > 0 && uniform_p < 1) ? std::log1p(-uniform_p)
                                                      : 0.0;

  CountsHistogram pre_readout(n);
  std::vector<size_t> hits;  // rotation ordinals with an insertion this shot
  StateVector work(n);

  for (uint64_t shot = 0; shot < shots; ++shot) {
    hits.clear();
    if (any_dep) {
      if (uniform_dep && uniform_p < 1) {
        // Geometric skipping: one deviate finds the next insertion site.
        size_t pos = 0;
        while (pos < n_rot) {
          const double u = rng_insert.uniform();
          const double skip = std::floor(std::log1p(-u) / log1m_p);
          if (skip >= static_cast<double>(n_rot - pos)) break;
          pos += static_cast<size_t>(skip);
          hits.push_back(pos);
          ++pos;
        }
      } else {
        for (size_t k = 0; k < n_rot; ++k) {
          if (sites[k].dep_prob > 0 && rng_insert.bernoulli(sites[k].dep_prob)) {
            hits.push_back(k);
          }
        }
      }
    }

    uint64_t outcome;
    if (hits.empty()) {
      outcome = clean_sampler.draw(rng_meas);
    } else {
      // Resume from the snapshot at the first insertion and replay the tail.
      const size_t first = hits.front();
      work = snapshots[first];
      size_t hit_at = 0;
      auto maybe_insert = [&](size_t ordinal) {
        if (hit_at < hits.size() && hits[hit_at] == ordinal) {
          const auto& site = sites[ordinal];
          const uint64_t k = site.support.size();
          const uint64_t code = rng_insert.below((1ull << (2 * k)) - 1) + 1;
          work.apply_pauli(decode_support_pauli(code, site.support, n));
          ++hit_at;
        }
      };
      maybe_insert(first);
      size_t ordinal = first + 1;
      for (size_t i = sites[first].op_index + 1; i < circuit.ops.size(); ++i) {
        const auto& op = circuit.ops[i];
        if (const auto* x = std::get_if<Circuit::XGate>(&op)) {
          work.apply_x(x->qubit);
        } else if (const auto* h = std::get_if<Circuit::HGate>(&op)) {
          work.apply_h(h->qubit);
        } else if (const auto* s = std::get_if<Circuit::SdgGate>(&op)) {
          work.apply_sdg(s->qubit);
        } else if (const auto* f = std::get_if<Circuit::FixedPauli>(&op)) {
          work.apply_pauli(f->pauli);
        } else if (const auto* r = std::get_if<Circuit::Rotation>(&op)) {
          work.apply_pauli_rotation(
              r->pauli,
              r->angle_sign * params[r->param_index] + model.over_rot);
          maybe_insert(ordinal);
          ++ordinal;
        }
      }
      outcome = Sampler(work).draw(rng_meas);
    }
    pre_readout.record(outcome);
  }

  return apply_readout_noise(pre_readout, model, readout_seed);
}

namespace {

using Eigen::MatrixXcd;

void dm_apply_left(MatrixXcd& rho, const Circuit::Op& op,
                   std::span<const double> params, double over_rot,
                   uint32_t n) {
  StateVector scratch(n);
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      scratch.amplitudes()[r] = rho(r, c);
    }
    if (const auto* x = std::get_if<Circuit::XGate>(&op)) {
      scratch.apply_x(x->qubit);
    } else if (const auto* h = std::get_if<Circuit::HGate>(&op)) {
      scratch.apply_h(h->qubit);
    } else if (const auto* s = std::get_if<Circuit::SdgGate>(&op)) {
      scratch.apply_sdg(s->qubit);
    } else if (const auto* f = std::get_if<Circuit::FixedPauli>(&op)) {
      scratch.apply_pauli(f->pauli);
    } else if (const auto* rr = std::get_if<Circuit::Rotation>(&op)) {
      scratch.apply_pauli_rotation(
          rr->pauli, rr->angle_sign * params[rr->param_index] + over_rot);
    }
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      rho(r, c) = scratch.amplitudes()[r];
    }
  }
}

void dm_apply_unitary(MatrixXcd& rho, const Circuit::Op& op,
                      std::span<const double> params, double over_rot,
                      uint32_t n) {
  dm_apply_left(rho, op, params, over_rot, n);
  rho.adjointInPlace();
  dm_apply_left(rho, op, params, over_rot, n);
  rho.adjointInPlace();
}

// rho -> (1-q) rho + q (I_S / 2^k (x) Tr_S rho) with q = p 4^k / (4^k - 1),
// the channel equivalent of inserting a uniform non-identity Pauli on the
// support S with probability p.
void dm_depolarize(MatrixXcd& rho, uint64_t support_mask, double p) {
  if (p <= 0) return;
  const int k = std::popcount(support_mask);
  const double fourk = std::pow(4.0, k);
  const double q = p * fourk / (fourk - 1.0);
  const uint64_t dim = rho.rows();
  const uint64_t comp = ~support_mask & (dim - 1);
  MatrixXcd mix = MatrixXcd::Zero(dim, dim);
  const double inv = 1.0 / std::pow(2.0, k);
  for (uint64_t m = 0; m < dim; ++m) {
    for (uint64_t nn = 0; nn < dim; ++nn) {
      if ((m & support_mask) != (nn & support_mask)) continue;
      cd acc(0, 0);
      // Sum rho over the support subspace at fixed complement indices.
      uint64_t s = support_mask;
      while (true) {
        acc += rho((m & comp) | s, (nn & comp) | s);
        if (s == 0) break;
        s = (s - 1) & support_mask;
      }
      mix(m, nn) = acc * inv;
    }
  }
  rho = (1.0 - q) * rho + q * mix;
}

}  // namespace

std::vector<double> exact_outcome_distribution(const Circuit& circuit,
                                               std::span<const double> params,
                                               const NoiseModel& model) {
  if (params.size() != circuit.n_params) {
    throw std::invalid_argument("parameter count mismatch");
  }
  const uint32_t n = circuit.n_qubits;
  if (n > 10) {
    throw std::invalid_argument(
        "exact channel evolution is limited to 10 qubits");
  }
  const uint64_t dim = 1ull << n;
  MatrixXcd rho = MatrixXcd::Zero(dim, dim);
  rho(0, 0) = 1.0;
  for (const auto& op : circuit.ops) {
    dm_apply_unitary(rho, op, params, model.over_rot, n);
    if (const auto* r = std::get_if<Circuit::Rotation>(&op)) {
      dm_depolarize(rho, r->pauli.support_mask(),
                    model.dep_prob(r->pauli.weight()));
    }
  }
  std::vector<double> probs(dim);
  for (uint64_t i = 0; i < dim; ++i) probs[i] = rho(i, i).real();
  // Readout: independent per-qubit binary channel on the distribution.
  if (model.p_read_01 > 0 || model.p_read_10 > 0) {
    for (uint32_t q = 0; q < n; ++q) {
      const uint64_t bit = 1ull << q;
      for (uint64_t i = 0; i < dim; ++i) {
        if (i & bit) continue;
        const double p0 = probs[i], p1 = probs[i | bit];
        probs[i] = (1 - model.p_read_01) * p0 + model.p_read_10 * p1;
        probs[i | bit] = model.p_read_01 * p0 + (1 - model.p_read_10) * p1;
      }
    }
  }
  return probs;
}

}  // namespace hfc
