#include "hfc/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <stdexcept>

#include "embedded_data.hpp"
#include "hfc/hyperfine.hpp"

namespace hfc {

namespace {

Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows) {
  const size_t n = rows.size();
  Eigen::MatrixXd m(n, n);
  for (size_t r = 0; r < n; ++r) {
    if (rows.at(r).size() != n) {
      throw std::invalid_argument("amplitude matrix is not square");
    }
    for (size_t c = 0; c < n; ++c) m(r, c) = rows.at(r).at(c).get<double>();
  }
  return m;
}

}  // namespace

MoleculeDataset MoleculeDataset::from_json(const nlohmann::json& j) {
  MoleculeDataset d;
  d.name = j.at("name").get<std::string>();
  d.layout.n_act = j.at("n_act").get<uint32_t>();
  d.layout.n_alpha = j.at("n_alpha").get<uint32_t>();
  d.layout.n_beta = j.at("n_beta").get<uint32_t>();
  d.m_s = j.at("m_s").get<double>();
  d.reference_energy = j.at("reference_energy_hartree").get<double>();
  d.circuit = CircuitSpec::from_json(j.at("circuit"));
  if (d.circuit.n_qubits != j.at("n_qubits").get<uint32_t>() ||
      d.circuit.n_qubits != d.layout.n_qubits()) {
    throw std::invalid_argument("dataset register sizes are inconsistent");
  }
  for (const auto& entry : j.at("golden_state")) {
    d.golden_state.emplace_back(entry.at("ket").get<std::string>(),
                                entry.at("amp").get<double>());
  }
  const auto& amats = j.at("amplitude_matrices");
  const auto& offsets = j.at("inactive_offsets_mhz");
  const auto& totals = j.at("reference_totals_mhz");
  const auto& shotref = j.at("shot_noise_reference");
  const auto& prefref = j.at("prefactor_reference_mhz");
  const auto& domref = j.at("dominant_reference");
  for (const auto& nuc : j.at("nuclei")) {
    Nucleus n;
    n.label = nuc.at("label").get<std::string>();
    n.g_factor = nuc.at("g_factor").get<double>();
    n.a_alpha = matrix_from_json(amats.at(n.label).at("alpha"));
    n.a_beta = matrix_from_json(amats.at(n.label).at("beta"));
    n.inactive_offset_mhz = offsets.at(n.label).get<double>();
    n.reference_total_mhz = totals.at(n.label).get<double>();
    n.shot_noise_mean_mhz = shotref.at(n.label).at("mean").get<double>();
    n.shot_noise_std_mhz = shotref.at(n.label).at("std").get<double>();
    n.prefactor_reference_mhz = prefref.at(n.label).get<double>();
    for (const auto& t : domref.at(n.label)) {
      n.dominant_reference.push_back({t.at("v").get<uint32_t>(),
                                      t.at("w").get<uint32_t>(),
                                      t.at("spin").get<int>(),
                                      t.at("value").get<double>()});
    }
    d.nuclei.push_back(std::move(n));
  }
  d.shots_per_string = j.at("shots_per_string").get<uint64_t>();
  d.calibration_shots = j.at("calibration_shots").get<uint64_t>();
  d.total_shot_budget = j.at("total_shot_budget").get<uint64_t>();
  return d;
}

StateVector MoleculeDataset::prepared_state() const {
  const Circuit c = make_circuit(circuit);
  return run_circuit(c, circuit.params);
}

SelfCheckReport dataset_self_check(const MoleculeDataset& d) {
  SelfCheckReport report;
  char buf[256];
  auto fail = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof(buf), fmt, args...);
    report.ok = false;
    report.issues.emplace_back(buf);
  };

  // Reference determinant must populate the stated electron counts.
  {
    uint32_t in_alpha = 0, in_beta = 0;
    for (uint32_t q : d.circuit.hf_occupied) {
      (q < d.layout.n_act ? in_alpha : in_beta)++;
    }
    if (in_alpha != d.layout.n_alpha || in_beta != d.layout.n_beta) {
      fail("reference determinant has (%u, %u) electrons, layout says (%u, %u)",
           in_alpha, in_beta, d.layout.n_alpha, d.layout.n_beta);
    }
  }

  // Published amplitudes reproduce within 1e-4.
  const StateVector state = d.prepared_state();
  double worst = 0;
  for (const auto& [ket, amp] : d.golden_state) {
    if (ket.size() != d.circuit.n_qubits) {
      fail("golden ket '%s' has wrong length", ket.c_str());
      continue;
    }
    const cd built = state.amplitude(parse_bitstring(ket));
    worst = std::max(worst, std::abs(built - cd(amp, 0)));
  }
  if (worst > 1e-4) {
    fail("worst amplitude deviation %.3e exceeds 1e-4", worst);
  }

  for (const auto& nuc : d.nuclei) {
    // Prefactor within 0.1% of its rounded reference.
    const double pref = hfc_prefactor(nuc.g_factor, d.m_s);
    const double ref = nuc.prefactor_reference_mhz;
    if (std::abs(pref - ref) > 1e-3 * std::abs(ref)) {
      fail("%s: prefactor %.6f deviates from %.1f by more than 0.1%%",
           nuc.label.c_str(), pref, ref);
    }
    // Dominant channels: the |A| >= 0.1 selection must match the tabulated
    // set, and each unit coefficient (channel / prefactor) within 0.5%.
    std::map<std::tuple<uint32_t, uint32_t, int>, double> expected;
    for (int spin = 0; spin < 2; ++spin) {
      const Eigen::MatrixXd& a = spin == 0 ? nuc.a_alpha : nuc.a_beta;
      for (uint32_t v = 0; v < d.layout.n_act; ++v) {
        for (uint32_t w = v; w < d.layout.n_act; ++w) {
          if (std::abs(a(v, w)) < 0.1) continue;
          const double mult = (v == w) ? 1.0 : 2.0;
          expected[{v, w, spin}] = (spin == 0 ? 1.0 : -1.0) * mult * a(v, w);
        }
      }
    }
    if (expected.size() != nuc.dominant_reference.size()) {
      fail("%s: %zu dominant channels tabulated, %zu derived from A",
           nuc.label.c_str(), nuc.dominant_reference.size(), expected.size());
    }
    for (const auto& t : nuc.dominant_reference) {
      const auto it = expected.find({t.v, t.w, t.spin});
      if (it == expected.end()) {
        fail("%s: tabulated channel (%u,%u,%s) not in the |A|>=0.1 set",
             nuc.label.c_str(), t.v, t.w, t.spin == 0 ? "a" : "b");
        continue;
      }
      if (std::abs(it->second - t.value) > 5e-3 * std::abs(t.value)) {
        fail("%s: channel (%u,%u,%s) coefficient %.6f deviates from %.4f by "
             "more than 0.5%%",
             nuc.label.c_str(), t.v, t.w, t.spin == 0 ? "a" : "b", it->second,
             t.value);
      }
    }
  }
  return report;
}

namespace {

std::map<std::string, MoleculeDataset> load_builtins() {
  std::map<std::string, MoleculeDataset> out;
  for (const char* text :
       {embedded::kOhJson, embedded::kNoJson, embedded::kOhplusJson}) {
    MoleculeDataset d = MoleculeDataset::from_json(nlohmann::json::parse(text));
    out.emplace(d.name, std::move(d));
  }
  return out;
}

}  // namespace

const MoleculeDataset& builtin_dataset(const std::string& name) {
  static const std::map<std::string, MoleculeDataset> datasets = load_builtins();
  std::string key = name;
  if (key == "ohplus" || key == "oh_plus") key = "oh+";
  const auto it = datasets.find(key);
  if (it == datasets.end()) {
    std::string known;
    for (const auto& [k, v] : datasets) known += (known.empty() ? "" : ", ") + k;
    throw std::invalid_argument("unknown molecule '" + name + "' (known: " +
                                known + ")");
  }
  return it->second;
}

std::vector<std::string> builtin_dataset_names() {
  return {"oh", "no", "oh+"};
}

MoleculeDataset load_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open dataset file '" + path + "'");
  }
  nlohmann::json j;
  in >> j;
  return MoleculeDataset::from_json(j);
}

}  // namespace hfc
