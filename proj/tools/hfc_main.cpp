// Command-line front end for the coupling-constant emulation workbench.
//
// Subcommands:
//   selfcheck   validate every bundled dataset against its reference values
//   simulate    ideal-circuit couplings (sampled or exact expectation values)
//   emulate     noisy device runs through a correction pipeline
//   shot-noise  sampling-statistics study on the ideal state
//   report      re-render stored experiment summaries as CSV/JSON reports
//
// Exit codes: 0 success, 1 usage/runtime error, 2 every emulated run was
// rejected by the physicality filter, 3 dataset self-check failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hfc/dataset.hpp"
#include "hfc/hyperfine.hpp"
#include "hfc/noise.hpp"
#include "hfc/rdm.hpp"
#include "hfc/statevector.hpp"
#include "hfc/workbench.hpp"

namespace {

constexpr int kExitAllRejected = 2;
constexpr int kExitSelfCheck = 3;

hfc::MoleculeDataset load_dataset(const std::string& molecule,
                                  const std::string& data_file) {
  hfc::MoleculeDataset dataset = data_file.empty()
                                     ? hfc::builtin_dataset(molecule)
                                     : hfc::load_dataset_file(data_file);
  const hfc::SelfCheckReport report = hfc::dataset_self_check(dataset);
  if (!report.ok) {
    std::cerr << "dataset '" << dataset.name << "' failed its self-check:\n";
    for (const std::string& issue : report.issues) {
      std::cerr << "  - " << issue << "\n";
    }
    std::exit(kExitSelfCheck);
  }
  return dataset;
}

hfc::NoiseModel parse_noise(const std::string& text) {
  try {
    return hfc::NoiseModel::preset(text);
  } catch (const std::exception&) {
    // not a preset name: treat as a JSON file path
  }
  std::ifstream in(text);
  if (!in) {
    throw std::runtime_error("noise '" + text +
                             "' is neither a preset nor a readable file");
  }
  nlohmann::json j;
  in >> j;
  return hfc::NoiseModel::from_json(j);
}

void print_rdm(const hfc::SpinRDM& rdm) {
  auto print_block = [&](const char* name, const Eigen::MatrixXd& m) {
    std::printf("  %s block:\n", name);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      std::printf("   ");
      for (Eigen::Index c = 0; c < m.cols(); ++c) {
        std::printf(" %12.8f", m(r, c));
      }
      std::printf("\n");
    }
  };
  print_block("alpha", rdm.alpha);
  print_block("beta", rdm.beta);
}

void print_couplings(const hfc::MoleculeDataset& dataset,
                     const hfc::SpinRDM& rdm) {
  std::printf("  %-8s %14s %14s %14s %14s\n", "nucleus", "active/MHz",
              "inactive/MHz", "total/MHz", "reference/MHz");
  for (const hfc::Nucleus& nucleus : dataset.nuclei) {
    const double active =
        hfc::active_hfc(nucleus.a_alpha, nucleus.a_beta, rdm,
                        nucleus.g_factor, dataset.m_s);
    const double total = hfc::total_hfc(active, nucleus.inactive_offset_mhz);
    std::printf("  %-8s %14.4f %14.4f %14.4f %14.4f\n",
                nucleus.label.c_str(), active, nucleus.inactive_offset_mhz,
                total, nucleus.reference_total_mhz);
  }
}

int cmd_selfcheck() {
  bool all_ok = true;
  for (const std::string& name : hfc::builtin_dataset_names()) {
    const hfc::MoleculeDataset& dataset = hfc::builtin_dataset(name);
    const hfc::SelfCheckReport report = hfc::dataset_self_check(dataset);
    std::printf("%-6s %s\n", name.c_str(), report.ok ? "ok" : "FAILED");
    for (const std::string& issue : report.issues) {
      std::printf("       - %s\n", issue.c_str());
    }
    all_ok = all_ok && report.ok;
  }
  return all_ok ? 0 : kExitSelfCheck;
}

int cmd_simulate(const std::string& molecule, const std::string& data_file,
                 bool exact, bool dump, bool show_rdm, uint64_t seed) {
  const hfc::MoleculeDataset dataset = load_dataset(molecule, data_file);
  const hfc::StateVector state = dataset.prepared_state();

  std::printf("molecule %s: %u active orbitals, %u alpha / %u beta electrons,"
              " %u qubits\n",
              dataset.name.c_str(), dataset.layout.n_act,
              dataset.layout.n_alpha, dataset.layout.n_beta,
              dataset.layout.n_qubits());

  if (dump) {
    std::printf("state amplitudes (qubit 0 leftmost):\n");
    state.dump(std::cout);
  }

  hfc::SpinRDM rdm;
  if (exact) {
    rdm = hfc::exact_rdm(state, dataset.layout);
    std::printf("density matrices from exact expectation values\n");
  } else {
    const hfc::MeasurementPlan plan = hfc::plan_measurements(
        dataset.layout.n_act, dataset.shots_per_string);
    const hfc::Circuit circuit = hfc::make_circuit(dataset.circuit);
    const auto results = hfc::run_measurement_plan(
        plan, circuit, dataset.circuit.params, hfc::NoiseModel{}, seed,
        /*twirl=*/false);
    rdm = hfc::estimate_rdm(results, dataset.layout, {});
    std::printf("density matrices sampled at %llu shots per string (seed "
                "%llu)\n",
                static_cast<unsigned long long>(dataset.shots_per_string),
                static_cast<unsigned long long>(seed));
  }

  if (show_rdm) print_rdm(rdm);

  const hfc::OccupationNumbers occ = hfc::occupation_numbers(rdm);
  std::printf("  occupations alpha:");
  for (double v : occ.alpha) std::printf(" %.6f", v);
  std::printf("\n  occupations beta: ");
  for (double v : occ.beta) std::printf(" %.6f", v);
  std::printf("\n");

  print_couplings(dataset, rdm);
  return 0;
}

int cmd_emulate(const std::string& molecule, const std::string& data_file,
                const std::string& pipeline_text, const std::string& noise_text,
                int runs, uint64_t seed, const std::string& out_dir) {
  const hfc::MoleculeDataset dataset = load_dataset(molecule, data_file);
  const hfc::PipelineFlags pipeline = hfc::PipelineFlags::parse(pipeline_text);
  const hfc::NoiseModel noise = parse_noise(noise_text);

  const hfc::ExperimentSummary summary =
      hfc::run_experiment(dataset, pipeline, noise, runs, seed);

  std::printf("molecule %s, pipeline %s, %d runs (seed %llu): %zu accepted\n",
              summary.molecule.c_str(), summary.pipeline.c_str(), runs,
              static_cast<unsigned long long>(seed), summary.n_accepted);
  for (const auto& record : summary.runs) {
    if (!record.accepted) {
      std::printf("  run %d rejected: %s\n", record.run_id,
                  record.filter_reason.c_str());
    }
  }
  std::printf("  %-8s %14s %12s %14s %12s %14s\n", "nucleus", "mean/MHz",
              "std/MHz", "bias/MHz", "bias-std/MHz", "exact/MHz");
  for (const auto& agg : summary.aggregates) {
    std::printf("  %-8s %14.4f %12.4f %14.4f %12.4f %14.4f\n",
                agg.label.c_str(), agg.mean_total_mhz, agg.std_total_mhz,
                agg.mean_deviation_mhz, agg.std_deviation_mhz,
                agg.exact_total_mhz);
  }

  if (!out_dir.empty()) {
    hfc::write_report({summary}, out_dir);
    std::printf("report written to %s\n", out_dir.c_str());
  }
  return summary.n_accepted == 0 ? kExitAllRejected : 0;
}

int cmd_shot_noise(const std::string& molecule, const std::string& data_file,
                   int reps, uint64_t seed, const std::string& out_file) {
  const hfc::MoleculeDataset dataset = load_dataset(molecule, data_file);
  const hfc::ShotNoiseStats stats =
      hfc::shot_noise_study(dataset, reps, seed);

  std::printf("molecule %s, %d reps at %llu shots per string (seed %llu)\n",
              stats.molecule.c_str(), stats.n_reps,
              static_cast<unsigned long long>(stats.shots_per_string),
              static_cast<unsigned long long>(seed));
  std::printf("  %-8s %12s %10s %12s %12s %10s\n", "nucleus", "mean/MHz",
              "std/MHz", "exact/MHz", "ref-mean", "ref-std");
  for (const auto& row : stats.rows) {
    std::printf("  %-8s %12.4f %10.4f %12.4f %12.4f %10.4f\n",
                row.label.c_str(), row.mean_total_mhz, row.std_total_mhz,
                row.exact_total_mhz, row.reference_mean_mhz,
                row.reference_std_mhz);
  }

  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_file);
    out << stats.to_json().dump(2) << "\n";
    std::printf("statistics written to %s\n", out_file.c_str());
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& in_files,
               const std::string& out_dir) {
  std::vector<hfc::ExperimentSummary> summaries;
  for (const std::string& file : in_files) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file);
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) {
      throw std::runtime_error(file + ": expected an array of summaries");
    }
    for (const nlohmann::json& entry : j) {
      summaries.push_back(hfc::ExperimentSummary::from_json(entry));
    }
  }
  hfc::write_report(summaries, out_dir);
  std::printf("report with %zu summaries written to %s\n", summaries.size(),
              out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupling-constant emulation workbench"};
  app.require_subcommand(1);

  // --- selfcheck -----------------------------------------------------------
  app.add_subcommand("selfcheck",
                     "validate the bundled datasets against their references");

  // --- simulate ------------------------------------------------------------
  auto* simulate =
      app.add_subcommand("simulate", "ideal-circuit density matrices and "
                                     "couplings");
  std::string sim_molecule;
  std::string sim_data;
  bool sim_exact = false, sim_dump = false, sim_rdm = false;
  uint64_t sim_seed = 1;
  simulate->add_option("--molecule", sim_molecule, "dataset name");
  simulate->add_option("--data", sim_data, "dataset JSON file (overrides "
                                           "--molecule)");
  simulate->add_flag("--exact", sim_exact,
                     "exact expectation values instead of sampling");
  simulate->add_flag("--dump", sim_dump, "print the state amplitudes");
  simulate->add_flag("--rdm", sim_rdm, "print the density-matrix blocks");
  simulate->add_option("--seed", sim_seed, "sampling seed");

  // --- emulate -------------------------------------------------------------
  auto* emulate =
      app.add_subcommand("emulate", "noisy device emulation through a "
                                    "correction pipeline");
  std::string emu_molecule;
  std::string emu_data;
  std::string emu_pipeline = "raw";
  std::string emu_noise = "torino-like";
  int emu_runs = 1;
  uint64_t emu_seed = 1;
  std::string emu_out;
  emulate->add_option("--molecule", emu_molecule, "dataset name");
  emulate->add_option("--data", emu_data, "dataset JSON file");
  emulate->add_option("--pipeline", emu_pipeline,
                      "'+'-joined stages: em, ps, puri, es (or raw)");
  emulate->add_option("--noise", emu_noise, "preset name or JSON file");
  emulate->add_option("--runs", emu_runs, "number of independent runs");
  emulate->add_option("--seed", emu_seed, "master seed");
  emulate->add_option("--out", emu_out, "directory for the report files");

  // --- shot-noise ----------------------------------------------------------
  auto* shot_noise =
      app.add_subcommand("shot-noise", "noiseless sampling-statistics study");
  std::string sn_molecule;
  std::string sn_data;
  int sn_reps = 200;
  uint64_t sn_seed = 1;
  std::string sn_out;
  shot_noise->add_option("--molecule", sn_molecule, "dataset name");
  shot_noise->add_option("--data", sn_data, "dataset JSON file");
  shot_noise->add_option("--reps", sn_reps, "number of repetitions");
  shot_noise->add_option("--seed", sn_seed, "master seed");
  shot_noise->add_option("--out", sn_out, "output JSON file");

  // --- report --------------------------------------------------------------
  auto* report =
      app.add_subcommand("report", "render stored summaries as report files");
  std::vector<std::string> rep_in;
  std::string rep_out = "report";
  report->add_option("--in", rep_in, "summary.json files")->required();
  report->add_option("--out", rep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("selfcheck")) return cmd_selfcheck();
    if (app.got_subcommand("simulate")) {
      if (sim_molecule.empty() && sim_data.empty()) {
        std::cerr << "simulate: --molecule or --data is required\n";
        return 1;
      }
      return cmd_simulate(sim_molecule, sim_data, sim_exact, sim_dump,
                          sim_rdm, sim_seed);
    }
    if (app.got_subcommand("emulate")) {
      if (emu_molecule.empty() && emu_data.empty()) {
        std::cerr << "emulate: --molecule or --data is required\n";
        return 1;
      }
      return cmd_emulate(emu_molecule, emu_data, emu_pipeline, emu_noise,
                         emu_runs, emu_seed, emu_out);
    }
    if (app.got_subcommand("shot-noise")) {
      if (sn_molecule.empty() && sn_data.empty()) {
        std::cerr << "shot-noise: --molecule or --data is required\n";
        return 1;
      }
      return cmd_shot_noise(sn_molecule, sn_data, sn_reps, sn_seed, sn_out);
    }
    if (app.got_subcommand("report")) return cmd_report(rep_in, rep_out);
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
