#include "hfc/workbench.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include "hfc/rng.hpp"
#include "hfc/statevector.hpp"

namespace hfc {

namespace {

std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
};

Moments moments(const std::vector<double>& xs) {
  Moments m;
  if (xs.empty()) return m;
  for (double x : xs) m.mean += x;
  m.mean /= static_cast<double>(xs.size());
  if (xs.size() < 2) return m;
  double ss = 0.0;
  for (double x : xs) ss += (x - m.mean) * (x - m.mean);
  m.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return m;
}

struct NucleusContext {
  const Nucleus* nucleus = nullptr;
  double exact_active = 0.0;
  std::vector<DominantTerm> dominant;
};

std::vector<NucleusContext> nucleus_contexts(const MoleculeDataset& dataset,
                                             const SpinRDM& rdm_exact) {
  std::vector<NucleusContext> contexts;
  contexts.reserve(dataset.nuclei.size());
  for (const Nucleus& nucleus : dataset.nuclei) {
    NucleusContext ctx;
    ctx.nucleus = &nucleus;
    ctx.exact_active = active_hfc(nucleus.a_alpha, nucleus.a_beta, rdm_exact,
                                  nucleus.g_factor, dataset.m_s);
    ctx.dominant = hfc_error_dominant(nucleus.a_alpha, nucleus.a_beta,
                                      nucleus.g_factor, dataset.m_s);
    contexts.push_back(std::move(ctx));
  }
  return contexts;
}

// Fixed-width float formatting shared by the CSV writers so report bytes
// depend only on the values.
std::string fmt(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << body;
  if (!out) throw std::runtime_error("short write to " + path.string());
}

}  // namespace

PipelineFlags PipelineFlags::parse(const std::string& text) {
  PipelineFlags flags;
  const std::string lowered = to_lower(text);
  if (lowered.empty() || lowered == "raw" || lowered == "none") return flags;

  size_t start = 0;
  while (start <= lowered.size()) {
    const size_t stop = std::min(lowered.find('+', start), lowered.size());
    const std::string token = lowered.substr(start, stop - start);
    if (token == "em") {
      flags.em = true;
    } else if (token == "ps") {
      flags.ps = true;
    } else if (token == "puri" || token == "purify") {
      flags.purify = true;
    } else if (token == "es" || token == "twirl") {
      flags.twirl = true;
    } else {
      throw std::invalid_argument("unknown pipeline token '" + token +
                                  "' (expected em, ps, puri, es or raw)");
    }
    start = stop + 1;
  }
  return flags;
}

std::string PipelineFlags::to_string() const {
  std::string out;
  auto append = [&out](const char* token) {
    if (!out.empty()) out += '+';
    out += token;
  };
  if (em) append("em");
  if (ps) append("ps");
  if (purify) append("puri");
  if (twirl) append("es");
  return out.empty() ? "raw" : out;
}

nlohmann::json ExperimentSummary::to_json() const {
  nlohmann::json j;
  j["molecule"] = molecule;
  j["pipeline"] = pipeline;
  j["master_seed"] = master_seed;
  j["noise"] = noise.to_json();
  j["shots_per_string"] = shots_per_string;
  j["n_accepted"] = n_accepted;

  nlohmann::json run_rows = nlohmann::json::array();
  for (const ExperimentRecord& record : runs) {
    nlohmann::json r;
    r["run_id"] = record.run_id;
    r["seed"] = record.seed;
    r["accepted"] = record.accepted;
    r["filter_reason"] = record.filter_reason;
    r["rdm_estimated"] = record.rdm_estimated.to_json("estimated");
    r["rdm"] = record.rdm.to_json("final");
    r["occupations"] = {{"alpha", record.occupations.alpha},
                        {"beta", record.occupations.beta}};
    nlohmann::json nucleus_rows = nlohmann::json::array();
    for (const NucleusOutcome& outcome : record.nuclei) {
      nucleus_rows.push_back({{"label", outcome.label},
                              {"active_mhz", outcome.active_mhz},
                              {"inactive_mhz", outcome.inactive_mhz},
                              {"total_mhz", outcome.total_mhz},
                              {"deviation_mhz", outcome.deviation_mhz},
                              {"deviation_alpha_mhz", outcome.deviation_alpha_mhz},
                              {"deviation_beta_mhz", outcome.deviation_beta_mhz}});
    }
    r["nuclei"] = std::move(nucleus_rows);
    run_rows.push_back(std::move(r));
  }
  j["runs"] = std::move(run_rows);

  nlohmann::json agg_rows = nlohmann::json::array();
  for (const Aggregate& agg : aggregates) {
    agg_rows.push_back({{"label", agg.label},
                        {"mean_total_mhz", agg.mean_total_mhz},
                        {"std_total_mhz", agg.std_total_mhz},
                        {"mean_deviation_mhz", agg.mean_deviation_mhz},
                        {"std_deviation_mhz", agg.std_deviation_mhz},
                        {"exact_total_mhz", agg.exact_total_mhz}});
  }
  j["aggregates"] = std::move(agg_rows);
  return j;
}

ExperimentSummary ExperimentSummary::from_json(const nlohmann::json& j) {
  ExperimentSummary summary;
  summary.molecule = j.at("molecule").get<std::string>();
  summary.pipeline = j.at("pipeline").get<std::string>();
  summary.master_seed = j.at("master_seed").get<uint64_t>();
  summary.noise = NoiseModel::from_json(j.at("noise"));
  summary.shots_per_string = j.at("shots_per_string").get<uint64_t>();
  summary.n_accepted = j.at("n_accepted").get<size_t>();

  for (const nlohmann::json& r : j.at("runs")) {
    ExperimentRecord record;
    record.run_id = r.at("run_id").get<int>();
    record.seed = r.at("seed").get<uint64_t>();
    record.accepted = r.at("accepted").get<bool>();
    record.filter_reason = r.at("filter_reason").get<std::string>();
    record.rdm_estimated = SpinRDM::from_json(r.at("rdm_estimated"));
    record.rdm = SpinRDM::from_json(r.at("rdm"));
    record.occupations.alpha =
        r.at("occupations").at("alpha").get<std::vector<double>>();
    record.occupations.beta =
        r.at("occupations").at("beta").get<std::vector<double>>();
    for (const nlohmann::json& n : r.at("nuclei")) {
      NucleusOutcome outcome;
      outcome.label = n.at("label").get<std::string>();
      outcome.active_mhz = n.at("active_mhz").get<double>();
      outcome.inactive_mhz = n.at("inactive_mhz").get<double>();
      outcome.total_mhz = n.at("total_mhz").get<double>();
      outcome.deviation_mhz = n.at("deviation_mhz").get<double>();
      outcome.deviation_alpha_mhz = n.at("deviation_alpha_mhz").get<double>();
      outcome.deviation_beta_mhz = n.at("deviation_beta_mhz").get<double>();
      record.nuclei.push_back(std::move(outcome));
    }
    summary.runs.push_back(std::move(record));
  }

  for (const nlohmann::json& a : j.at("aggregates")) {
    Aggregate agg;
    agg.label = a.at("label").get<std::string>();
    agg.mean_total_mhz = a.at("mean_total_mhz").get<double>();
    agg.std_total_mhz = a.at("std_total_mhz").get<double>();
    agg.mean_deviation_mhz = a.at("mean_deviation_mhz").get<double>();
    agg.std_deviation_mhz = a.at("std_deviation_mhz").get<double>();
    agg.exact_total_mhz = a.at("exact_total_mhz").get<double>();
    summary.aggregates.push_back(std::move(agg));
  }
  return summary;
}

ExperimentSummary run_experiment(const MoleculeDataset& dataset,
                                 const PipelineFlags& pipeline,
                                 const NoiseModel& noise, int n_runs,
                                 uint64_t seed) {
  if (n_runs <= 0) throw std::invalid_argument("run count must be positive");
  const ActiveSpaceLayout& layout = dataset.layout;
  const Circuit ansatz = make_circuit(dataset.circuit);
  const MeasurementPlan plan =
      plan_measurements(layout.n_act, dataset.shots_per_string);

  const StateVector ideal = dataset.prepared_state();
  const SpinRDM rdm_exact = exact_rdm(ideal, layout);
  const std::vector<NucleusContext> contexts =
      nucleus_contexts(dataset, rdm_exact);

  ExperimentSummary summary;
  summary.molecule = dataset.name;
  summary.pipeline = pipeline.to_string();
  summary.master_seed = seed;
  summary.noise = noise;
  summary.shots_per_string = dataset.shots_per_string;

  for (int run = 0; run < n_runs; ++run) {
    const uint64_t run_seed =
        derive_stream(seed, {kRunStreamLabel, static_cast<uint64_t>(run)});

    ExperimentRecord record;
    record.run_id = run;
    record.seed = run_seed;

    ConfusionMatrix confusion;
    EstimationOptions options;
    if (pipeline.em) {
      ConfusionOptions calibration;
      calibration.shots_per_state = dataset.calibration_shots;
      calibration.seed = derive_stream(run_seed, {kCalibrationStreamLabel});
      calibration.twirl = pipeline.twirl;
      confusion = build_confusion_matrix(ansatz, noise, calibration);
      options.confusion = &confusion;
    }
    options.post_select_diagonal = pipeline.ps;

    const std::vector<SettingResult> results = run_measurement_plan(
        plan, ansatz, dataset.circuit.params, noise,
        derive_stream(run_seed, {kPlanStreamLabel}), pipeline.twirl);
    record.rdm_estimated = estimate_rdm(results, layout, options);

    const FilterVerdict alpha_verdict = filter_rdm(record.rdm_estimated.alpha);
    const FilterVerdict beta_verdict = filter_rdm(record.rdm_estimated.beta);
    record.accepted = alpha_verdict.accepted && beta_verdict.accepted;
    if (!alpha_verdict.accepted) {
      record.filter_reason = "alpha block: " + alpha_verdict.reason;
    }
    if (!beta_verdict.accepted) {
      if (!record.filter_reason.empty()) record.filter_reason += "; ";
      record.filter_reason += "beta block: " + beta_verdict.reason;
    }

    record.rdm = record.rdm_estimated;
    if (pipeline.purify) {
      record.rdm.alpha = purify_rdm(record.rdm.alpha, layout.n_alpha);
      record.rdm.beta = purify_rdm(record.rdm.beta, layout.n_beta);
    }
    record.occupations = occupation_numbers(record.rdm);

    const SpinRDM deviation = rdm_difference(record.rdm, rdm_exact);
    for (const NucleusContext& ctx : contexts) {
      NucleusOutcome outcome;
      outcome.label = ctx.nucleus->label;
      outcome.active_mhz =
          active_hfc(ctx.nucleus->a_alpha, ctx.nucleus->a_beta, record.rdm,
                     ctx.nucleus->g_factor, dataset.m_s);
      outcome.inactive_mhz = ctx.nucleus->inactive_offset_mhz;
      outcome.total_mhz = total_hfc(outcome.active_mhz, outcome.inactive_mhz);
      outcome.deviation_mhz = outcome.active_mhz - ctx.exact_active;
      const auto [alpha_part, beta_part] =
          decompose_spin_error(ctx.dominant, deviation);
      outcome.deviation_alpha_mhz = alpha_part;
      outcome.deviation_beta_mhz = beta_part;
      record.nuclei.push_back(std::move(outcome));
    }
    summary.runs.push_back(std::move(record));
  }

  summary.n_accepted = static_cast<size_t>(
      std::count_if(summary.runs.begin(), summary.runs.end(),
                    [](const ExperimentRecord& r) { return r.accepted; }));

  for (size_t k = 0; k < contexts.size(); ++k) {
    std::vector<double> totals, deviations;
    totals.reserve(summary.n_accepted);
    deviations.reserve(summary.n_accepted);
    for (const ExperimentRecord& record : summary.runs) {
      if (!record.accepted) continue;
      totals.push_back(record.nuclei[k].total_mhz);
      deviations.push_back(record.nuclei[k].deviation_mhz);
    }
    ExperimentSummary::Aggregate agg;
    agg.label = contexts[k].nucleus->label;
    const Moments mt = moments(totals);
    const Moments md = moments(deviations);
    agg.mean_total_mhz = mt.mean;
    agg.std_total_mhz = mt.stddev;
    agg.mean_deviation_mhz = md.mean;
    agg.std_deviation_mhz = md.stddev;
    agg.exact_total_mhz = total_hfc(contexts[k].exact_active,
                                    contexts[k].nucleus->inactive_offset_mhz);
    summary.aggregates.push_back(std::move(agg));
  }
  return summary;
}

nlohmann::json ShotNoiseStats::to_json() const {
  nlohmann::json j;
  j["molecule"] = molecule;
  j["n_reps"] = n_reps;
  j["shots_per_string"] = shots_per_string;
  nlohmann::json row_list = nlohmann::json::array();
  for (const Row& row : rows) {
    row_list.push_back({{"label", row.label},
                        {"mean_total_mhz", row.mean_total_mhz},
                        {"std_total_mhz", row.std_total_mhz},
                        {"exact_total_mhz", row.exact_total_mhz},
                        {"reference_mean_mhz", row.reference_mean_mhz},
                        {"reference_std_mhz", row.reference_std_mhz}});
  }
  j["rows"] = std::move(row_list);
  j["totals"] = totals;
  return j;
}

ShotNoiseStats shot_noise_study(const MoleculeDataset& dataset, int n_reps,
                                uint64_t seed) {
  if (n_reps <= 0) throw std::invalid_argument("rep count must be positive");
  const ActiveSpaceLayout& layout = dataset.layout;
  const MeasurementPlan plan =
      plan_measurements(layout.n_act, dataset.shots_per_string);

  const StateVector ideal = dataset.prepared_state();
  const SpinRDM rdm_exact = exact_rdm(ideal, layout);

  // The rotated outcome distributions do not change between reps; cache one
  // sampler per setting so each rep costs only the multinomial draws.  The
  // per-setting seeds reproduce run_measurement_plan with a zero noise model
  // bit for bit.
  std::vector<Sampler> samplers;
  samplers.reserve(plan.settings.size());
  for (const MeasurementSetting& setting : plan.settings) {
    StateVector rotated = ideal;
    if (setting.observable) {
      apply_measurement_basis(rotated, *setting.observable);
    }
    samplers.emplace_back(rotated);
  }

  ShotNoiseStats stats;
  stats.molecule = dataset.name;
  stats.n_reps = n_reps;
  stats.shots_per_string = dataset.shots_per_string;
  stats.totals.assign(dataset.nuclei.size(), {});

  std::vector<SettingResult> results(plan.settings.size());
  for (size_t i = 0; i < plan.settings.size(); ++i) {
    results[i].setting = plan.settings[i];
  }

  const EstimationOptions options;  // no correction stages
  for (int rep = 0; rep < n_reps; ++rep) {
    const uint64_t rep_seed =
        derive_stream(seed, {kRepStreamLabel, static_cast<uint64_t>(rep)});
    for (size_t i = 0; i < plan.settings.size(); ++i) {
      Rng rng(derive_stream(rep_seed, {i, kSettingShotLabel}));
      CountsHistogram hist(layout.n_qubits());
      for (uint64_t s = 0; s < plan.settings[i].shots; ++s) {
        hist.record(samplers[i].draw(rng));
      }
      results[i].counts = std::move(hist);
    }
    const SpinRDM estimate = estimate_rdm(results, layout, options);
    for (size_t k = 0; k < dataset.nuclei.size(); ++k) {
      const Nucleus& nucleus = dataset.nuclei[k];
      const double active = active_hfc(nucleus.a_alpha, nucleus.a_beta,
                                       estimate, nucleus.g_factor, dataset.m_s);
      stats.totals[k].push_back(
          total_hfc(active, nucleus.inactive_offset_mhz));
    }
  }

  for (size_t k = 0; k < dataset.nuclei.size(); ++k) {
    const Nucleus& nucleus = dataset.nuclei[k];
    ShotNoiseStats::Row row;
    row.label = nucleus.label;
    const Moments m = moments(stats.totals[k]);
    row.mean_total_mhz = m.mean;
    row.std_total_mhz = m.stddev;
    row.exact_total_mhz =
        total_hfc(active_hfc(nucleus.a_alpha, nucleus.a_beta, rdm_exact,
                             nucleus.g_factor, dataset.m_s),
                  nucleus.inactive_offset_mhz);
    row.reference_mean_mhz = nucleus.shot_noise_mean_mhz;
    row.reference_std_mhz = nucleus.shot_noise_std_mhz;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

void write_report(const std::vector<ExperimentSummary>& summaries,
                  const std::string& out_dir) {
  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  nlohmann::json bundle = nlohmann::json::array();
  for (const ExperimentSummary& summary : summaries) {
    bundle.push_back(summary.to_json());
  }
  write_file(dir / "summary.json", bundle.dump(2) + "\n");

  std::string aggregates =
      "molecule,pipeline,nucleus,mean_total_mhz,std_total_mhz,"
      "mean_deviation_mhz,std_deviation_mhz,exact_total_mhz,n_accepted,"
      "n_runs\n";
  for (const ExperimentSummary& summary : summaries) {
    for (const ExperimentSummary::Aggregate& agg : summary.aggregates) {
      aggregates += csv_quote(summary.molecule) + ',' + summary.pipeline +
                    ',' + csv_quote(agg.label) + ',' + fmt(agg.mean_total_mhz) +
                    ',' + fmt(agg.std_total_mhz) + ',' +
                    fmt(agg.mean_deviation_mhz) + ',' +
                    fmt(agg.std_deviation_mhz) + ',' +
                    fmt(agg.exact_total_mhz) + ',' +
                    std::to_string(summary.n_accepted) + ',' +
                    std::to_string(summary.runs.size()) + '\n';
    }
  }
  write_file(dir / "aggregates.csv", aggregates);

  std::string runs =
      "molecule,pipeline,run_id,seed,accepted,nucleus,active_mhz,"
      "inactive_mhz,total_mhz,deviation_mhz,deviation_alpha_mhz,"
      "deviation_beta_mhz\n";
  for (const ExperimentSummary& summary : summaries) {
    for (const ExperimentRecord& record : summary.runs) {
      for (const NucleusOutcome& outcome : record.nuclei) {
        runs += csv_quote(summary.molecule) + ',' + summary.pipeline + ',' +
                std::to_string(record.run_id) + ',' +
                std::to_string(record.seed) + ',' +
                (record.accepted ? "1" : "0") + ',' +
                csv_quote(outcome.label) + ',' + fmt(outcome.active_mhz) +
                ',' + fmt(outcome.inactive_mhz) + ',' +
                fmt(outcome.total_mhz) + ',' + fmt(outcome.deviation_mhz) +
                ',' + fmt(outcome.deviation_alpha_mhz) + ',' +
                fmt(outcome.deviation_beta_mhz) + '\n';
      }
    }
  }
  write_file(dir / "runs.csv", runs);

  std::string occupations = "molecule,pipeline,run_id,block,index,value\n";
  for (const ExperimentSummary& summary : summaries) {
    for (const ExperimentRecord& record : summary.runs) {
      auto emit = [&](const char* block, const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i) {
          occupations += csv_quote(summary.molecule) + ',' + summary.pipeline +
                         ',' + std::to_string(record.run_id) + ',' + block +
                         ',' + std::to_string(i) + ',' + fmt(values[i]) + '\n';
        }
      };
      emit("alpha", record.occupations.alpha);
      emit("beta", record.occupations.beta);
    }
  }
  write_file(dir / "occupations.csv", occupations);
}

}  // namespace hfc
