#include "ltfu/experiment.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json_codec.hpp"
#include "ltfu/csv.hpp"
#include "ltfu/rng.hpp"
#include "ltfu/simulate.hpp"
#include "ltfu/split.hpp"

namespace ltfu {

using nlohmann::json;

namespace {

json data_source_to_json(const DataSource& d) {
  json j;
  if (!d.preset.empty()) {
    j["preset"] = d.preset;
    if (d.size_override > 0) j["size"] = d.size_override;
  } else {
    j["csv"] = d.csv_path;
    j["schema"] = codec::schema_to_json(d.schema);
    j["missing_token"] = d.missing_token;
  }
  return j;
}

DataSource data_source_from_json(const json& j) {
  DataSource d;
  if (j.contains("preset")) {
    d.preset = j.at("preset");
    d.size_override = j.value("size", 0);
  } else if (j.contains("csv")) {
    d.csv_path = j.at("csv");
    d.schema = codec::schema_from_json(j.at("schema"));
    d.missing_token = j.value("missing_token", "?");
  } else {
    throw std::invalid_argument("config: data needs either 'preset' or 'csv'");
  }
  return d;
}

json analyses_to_json(const AnalysisSet& a) {
  json arr = json::array();
  if (a.impute) arr.push_back("impute");
  if (a.score) arr.push_back("score");
  if (a.kaplan_meier) arr.push_back("km");
  return arr;
}

AnalysisSet analyses_from_json(const json& arr) {
  AnalysisSet a{false, false, false};
  for (const auto& v : arr) {
    const std::string s = v;
    if (s == "impute")
      a.impute = true;
    else if (s == "score")
      a.score = true;
    else if (s == "km" || s == "kaplan_meier")
      a.kaplan_meier = true;
    else
      throw std::invalid_argument("config: unknown analysis '" + s + "'");
  }
  return a;
}

json config_to_json(const ExperimentConfig& cfg, bool include_out_dir) {
  json j = {
      {"name", cfg.name},
      {"data", data_source_to_json(cfg.data)},
      {"loss", codec::loss_spec_to_json(cfg.loss)},
      {"split", {{"train_fraction", cfg.train_fraction}, {"by_patient", cfg.by_patient}}},
      {"dae", codec::dae_config_to_json(cfg.dae)},
      {"mice", codec::mice_config_to_json(cfg.mice)},
      {"analyses", analyses_to_json(cfg.analyses)},
      {"seed", cfg.seed},
  };
  if (include_out_dir && !cfg.out_dir.empty()) j["out_dir"] = cfg.out_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig cfg;
  cfg.name = j.value("name", cfg.name);
  cfg.data = data_source_from_json(j.at("data"));
  if (j.contains("loss")) cfg.loss = codec::loss_spec_from_json(j.at("loss"));
  if (j.contains("split")) {
    cfg.train_fraction = j.at("split").value("train_fraction", cfg.train_fraction);
    cfg.by_patient = j.at("split").value("by_patient", cfg.by_patient);
  }
  if (j.contains("dae")) cfg.dae = codec::dae_config_from_json(j.at("dae"));
  if (j.contains("mice")) cfg.mice = codec::mice_config_from_json(j.at("mice"));
  if (j.contains("analyses")) {
    cfg.analyses = analyses_from_json(j.at("analyses"));
    if (!cfg.analyses.impute && !cfg.analyses.score && !cfg.analyses.kaplan_meier)
      throw std::invalid_argument("config: analyses set is empty");
  }
  cfg.out_dir = j.value("out_dir", "");
  cfg.seed = j.value("seed", 0);
  return cfg;
}

[[noreturn]] void stage_error(const std::string& stage, const std::string& fingerprint,
                              const std::exception& e) {
  throw std::runtime_error("[stage " + stage + "] " + e.what() + " (config " + fingerprint +
                           ")");
}

json median_to_json(const MedianEstimate& m) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"median", opt(m.median)}, {"lo", opt(m.lo)}, {"hi", opt(m.hi)}};
}

MedianEstimate km_median_of(const Dataset& ds) {
  const std::size_t tcol = time_index(ds.schema);
  const std::size_t ocol = outcome_index(ds.schema);
  std::vector<double> times(ds.n_rows);
  std::vector<int> events(ds.n_rows);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    times[r] = ds.at(r, tcol);
    events[r] = ds.at(r, ocol) == 1.0 ? 1 : 0;
  }
  const SurvivalCurve curve = kaplan_meier(times, events);
  return median_survival(curve, km_confidence_band(curve));
}

void write_km_curve(const Dataset& ds, const std::string& path) {
  const std::size_t tcol = time_index(ds.schema);
  const std::size_t ocol = outcome_index(ds.schema);
  std::vector<double> times(ds.n_rows);
  std::vector<int> events(ds.n_rows);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    times[r] = ds.at(r, tcol);
    events[r] = ds.at(r, ocol) == 1.0 ? 1 : 0;
  }
  const SurvivalCurve curve = kaplan_meier(times, events);
  write_curve_csv(curve, km_confidence_band(curve), path);
}

/// Rows of `part` put back at `indices` of a copy of `base`.
void scatter_rows(Dataset& base, const Dataset& part, const std::vector<std::size_t>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i)
    std::copy(part.values.begin() + i * part.n_cols, part.values.begin() + (i + 1) * part.n_cols,
              base.values.begin() + indices[i] * base.n_cols);
}

Dataset drop_masked_rows(const Dataset& ds, const MaskMatrix& mask) {
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    bool complete = true;
    for (std::size_t c = 0; c < ds.n_cols && complete; ++c)
      if (mask.at(r, c)) complete = false;
    if (complete) keep.push_back(r);
  }
  return take_rows(ds, mask, keep).first;
}

}  // namespace

ExperimentConfig experiment_config_from_json_string(const std::string& text) {
  return config_from_json(json::parse(text));
}

ExperimentConfig experiment_config_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  json j;
  in >> j;
  return config_from_json(j);
}

std::string config_snapshot(const ExperimentConfig& cfg) {
  return config_to_json(cfg, true).dump(2) + "\n";
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  const std::string canonical = config_to_json(cfg, false).dump();
  std::ostringstream os;
  os << std::hex << fnv1a64(canonical);
  return os.str();
}

std::string report_json(const std::vector<ResultRecord>& records) {
  json arr = json::array();
  for (const auto& rec : records) {
    json r = {
        {"experiment", rec.experiment_id},
        {"method", rec.method},
        {"fingerprint", rec.fingerprint},
    };
    if (rec.method != "None") r["score"] = json::parse(rec.score.to_json());
    if (rec.km) {
      r["km"] = {{"original", median_to_json(rec.km->original)},
                 {"dae", median_to_json(rec.km->dae)},
                 {"mice", median_to_json(rec.km->mice)},
                 {"complete_case", median_to_json(rec.km->complete_case)}};
    }
    arr.push_back(std::move(r));
  }
  return json{{"records", arr}}.dump(2) + "\n";
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  const std::string fingerprint = config_fingerprint(cfg);
  if (!cfg.analyses.impute && !cfg.analyses.score && !cfg.analyses.kaplan_meier)
    throw std::invalid_argument("run_experiment: analyses set is empty (config " +
                                fingerprint + ")");
  if (!(cfg.loss.proportion >= 0.0 && cfg.loss.proportion <= 1.0))
    throw std::invalid_argument("run_experiment: loss proportion out of range");

  const auto t0 = std::chrono::steady_clock::now();

  // Acquire complete data.
  Dataset truth;
  MaskMatrix pre_mask;
  try {
    if (!cfg.data.preset.empty()) {
      truth = simulate_preset(cfg.data.preset, cfg.data.size_override,
                              derive_seed(cfg.seed, "simulate"));
      pre_mask = MaskMatrix(truth.n_rows, truth.n_cols);
    } else {
      auto loaded = load_csv(cfg.data.csv_path, cfg.data.schema, cfg.data.missing_token);
      truth = std::move(loaded.first);
      pre_mask = std::move(loaded.second);
    }
  } catch (const std::exception& e) {
    stage_error("data", fingerprint, e);
  }

  // Induce loss on the complete data, then split.
  Dataset lossy;
  MaskMatrix induced;
  try {
    LossSpec spec = cfg.loss;
    spec.seed = derive_seed(cfg.seed, "loss");
    auto res = induce_loss(truth, spec, &pre_mask);
    lossy = std::move(res.first);
    induced = std::move(res.second);
  } catch (const std::exception& e) {
    stage_error("loss", fingerprint, e);
  }

  MaskMatrix full_mask(lossy.n_rows, lossy.n_cols);
  for (std::size_t i = 0; i < full_mask.bits.size(); ++i)
    full_mask.bits[i] = pre_mask.bits[i] | induced.bits[i];

  SplitIndices idx;
  try {
    idx = split_indices(lossy, cfg.train_fraction, derive_seed(cfg.seed, "split"),
                        cfg.by_patient);
  } catch (const std::exception& e) {
    stage_error("split", fingerprint, e);
  }

  auto [train, train_mask] = take_rows(lossy, full_mask, idx.train);
  auto [test, test_mask] = take_rows(lossy, full_mask, idx.test);
  auto [truth_test, induced_test] = take_rows(truth, induced, idx.test);

  // DAE: fit on train, impute test (and train, for the merged analysis).
  Dataset dae_test, dae_full;
  try {
    DaeConfig dc = cfg.dae;
    dc.seed = derive_seed(cfg.seed, "dae");
    const FittedImputer fitted = dae_fit(train, train_mask, dc);
    dae_test = dae_impute(fitted, test, test_mask);
    if (cfg.analyses.kaplan_meier) {
      const Dataset dae_train = dae_impute(fitted, train, train_mask);
      dae_full = lossy;
      scatter_rows(dae_full, dae_train, idx.train);
      scatter_rows(dae_full, dae_test, idx.test);
    }
  } catch (const std::exception& e) {
    stage_error("dae", fingerprint, e);
  }

  // MICE: chained equations over the whole induced dataset.
  Dataset mice_full, mice_test;
  try {
    MiceConfig mc = cfg.mice;
    mc.seed = derive_seed(cfg.seed, "mice");
    mice_full = mice_impute(lossy, full_mask, mc);
    MaskMatrix none(lossy.n_rows, lossy.n_cols);
    mice_test = take_rows(mice_full, none, idx.test).first;
  } catch (const std::exception& e) {
    stage_error("mice", fingerprint, e);
  }

  // Score on masked test cells against the truth.
  ScoreRow dae_row, mice_row;
  try {
    const std::string mech = cfg.loss.mechanism == LossMechanism::car ? "CAR" : "NAR";
    const std::string dataset_label = !cfg.data.preset.empty() ? cfg.data.preset : cfg.data.csv_path;
    auto score_of = [&](const Dataset& imputed) {
      const ConfusionCounts counts = score_outcome(imputed, truth_test, induced_test);
      const double rmse = rmse_time(imputed, truth_test, induced_test);
      return make_score_report(counts, rmse);
    };
    dae_row = {"DAE", dataset_label, mech, cfg.loss.proportion, cfg.seed, score_of(dae_test)};
    mice_row = {"MICE", dataset_label, mech, cfg.loss.proportion, cfg.seed, score_of(mice_test)};
  } catch (const std::exception& e) {
    stage_error("score", fingerprint, e);
  }

  // Downstream survival comparison on the re-merged datasets.
  std::optional<KmSummary> km;
  if (cfg.analyses.kaplan_meier) {
    try {
      KmSummary s;
      s.original = km_median_of(truth);
      s.dae = km_median_of(dae_full);
      s.mice = km_median_of(mice_full);
      s.complete_case = km_median_of(drop_masked_rows(lossy, full_mask));
      km = s;
    } catch (const std::exception& e) {
      stage_error("km", fingerprint, e);
    }
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::vector<ResultRecord> records;
  records.push_back({cfg.name, "DAE", dae_row, km, elapsed, fingerprint});
  records.push_back({cfg.name, "MICE", mice_row, km, elapsed, fingerprint});
  if (cfg.analyses.kaplan_meier) {
    ScoreRow none_row;
    none_row.method = "None";
    none_row.dataset = dae_row.dataset;
    none_row.mechanism = dae_row.mechanism;
    none_row.proportion = cfg.loss.proportion;
    none_row.seed = cfg.seed;
    records.push_back({cfg.name, "None", none_row, km, elapsed, fingerprint});
  }

  if (!cfg.out_dir.empty()) {
    try {
      namespace fs = std::filesystem;
      const fs::path dir = fs::path(cfg.out_dir) / cfg.name;
      fs::create_directories(dir);

      std::ofstream snap(dir / "config_snapshot.json");
      snap << config_snapshot(cfg);

      std::ofstream scores(dir / "scores.csv");
      scores << ScoreRow::csv_header() << '\n'
             << dae_row.to_csv() << '\n'
             << mice_row.to_csv() << '\n';

      std::ofstream report(dir / "report.json");
      report << report_json(records);

      if (cfg.analyses.kaplan_meier) {
        write_km_curve(truth, (dir / "km_original.csv").string());
        write_km_curve(dae_full, (dir / "km_dae.csv").string());
        write_km_curve(mice_full, (dir / "km_mice.csv").string());
        write_km_curve(drop_masked_rows(lossy, full_mask),
                       (dir / "km_complete_case.csv").string());
      }
    } catch (const std::exception& e) {
      stage_error("report", fingerprint, e);
    }
  }
  return records;
}

std::vector<ExperimentConfig> suite_from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("suite: cannot open '" + path + "'");
  json j;
  in >> j;

  std::vector<ExperimentConfig> configs;
  if (j.contains("experiments"))
    for (const auto& e : j.at("experiments")) configs.push_back(config_from_json(e));

  if (j.contains("grid")) {
    if (!j.contains("base"))
      throw std::invalid_argument("suite: 'grid' requires a 'base' config");
    const auto& grid = j.at("grid");
    const auto presets = grid.value("presets", std::vector<std::string>{});
    const auto mechanisms = grid.value("mechanisms", std::vector<std::string>{"CAR"});
    const auto proportions = grid.value("proportions", std::vector<double>{0.2});
    if (presets.empty()) throw std::invalid_argument("suite: grid.presets is empty");
    for (const auto& preset : presets) {
      for (const auto& mech : mechanisms) {
        for (const double p : proportions) {
          json e = j.at("base");
          e["data"] = {{"preset", preset}};
          if (j.at("base").contains("data") && j.at("base").at("data").contains("size"))
            e["data"]["size"] = j.at("base").at("data").at("size");
          e["loss"]["mechanism"] = mech;
          e["loss"]["proportion"] = p;
          std::ostringstream name;
          name << preset << '_' << (mech == "CAR" || mech == "car" ? "car" : "nar") << '_'
               << static_cast<int>(p * 100 + 0.5);
          e["name"] = name.str();
          configs.push_back(config_from_json(e));
        }
      }
    }
  }
  if (configs.empty()) throw std::invalid_argument("suite: no experiments defined");
  return configs;
}

std::vector<SuiteEntryResult> run_suite(const std::vector<ExperimentConfig>& configs,
                                        const std::string& out_dir) {
  if (configs.empty()) throw std::invalid_argument("run_suite: no configs");
  std::vector<SuiteEntryResult> results;
  for (const auto& cfg : configs) {
    SuiteEntryResult entry;
    entry.name = cfg.name;
    try {
      ExperimentConfig local = cfg;
      if (local.out_dir.empty() && !out_dir.empty()) local.out_dir = out_dir;
      entry.records = run_experiment(local);
    } catch (const std::exception& e) {
      entry.error = e.what();
    }
    results.push_back(std::move(entry));
  }

  if (!out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream csv(fs::path(out_dir) / "suite.csv");
    csv << ScoreRow::csv_header() << ",status\n";
    json jrows = json::array();
    for (const auto& entry : results) {
      if (!entry.error.empty()) {
        csv << entry.name << ",,,,,,,,,,,," << "error\n";
        jrows.push_back({{"experiment", entry.name}, {"error", entry.error}});
        continue;
      }
      for (const auto& rec : entry.records) {
        if (rec.method == "None") continue;
        csv << rec.score.to_csv() << ",ok\n";
        jrows.push_back(json::parse(rec.score.to_json()));
      }
    }
    std::ofstream js(fs::path(out_dir) / "suite.json");
    js << json{{"rows", jrows}}.dump(2) << '\n';
  }
  return results;
}

}  // namespace ltfu
