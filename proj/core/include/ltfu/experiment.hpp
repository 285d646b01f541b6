#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltfu/dae.hpp"
#include "ltfu/dataset.hpp"
#include "ltfu/metrics.hpp"
#include "ltfu/mice.hpp"
#include "ltfu/missingness.hpp"
#include "ltfu/survival.hpp"

namespace ltfu {

/// Either a named simulation preset (s1..s5, m1..m5) or a CSV file with a
/// declared schema.
struct DataSource {
  std::string preset;
  std::size_t size_override = 0;  // rows (s*) or patients (m*); 0 = preset size
  std::string csv_path;
  Schema schema;
  std::string missing_token = "?";
};

struct AnalysisSet {
  bool impute = true;
  bool score = true;
  bool kaplan_meier = false;
};

/// One declarative pipeline run: acquire complete data, induce loss, split,
/// fit and apply both imputers, score on the test partition, optionally
/// compare median survival. Sub-seeds derive from the master seed per stage.
struct ExperimentConfig {
  std::string name = "experiment";
  DataSource data;
  LossSpec loss;
  double train_fraction = 0.7;
  bool by_patient = false;
  DaeConfig dae;
  MiceConfig mice;
  AnalysisSet analyses;
  std::string out_dir;  // empty = no files written
  std::uint64_t seed = 0;
};

ExperimentConfig experiment_config_from_json_string(const std::string& text);
ExperimentConfig experiment_config_from_json_file(const std::string& path);

/// Canonical JSON snapshot of a config (stable key order, out_dir excluded
/// from the hash) and its FNV-1a fingerprint.
std::string config_snapshot(const ExperimentConfig& cfg);
std::string config_fingerprint(const ExperimentConfig& cfg);

/// Median survival of the four analysis variants of one experiment.
struct KmSummary {
  MedianEstimate original;       // complete ground truth
  MedianEstimate dae;            // all rows, missing cells imputed by the DAE
  MedianEstimate mice;           // all rows, missing cells imputed by MICE
  MedianEstimate complete_case;  // rows with missing outcome/time dropped
};

struct ResultRecord {
  std::string experiment_id;
  std::string method;  // DAE | MICE | None
  ScoreRow score;      // populated for DAE and MICE
  std::optional<KmSummary> km;
  double wall_time_seconds = 0.0;  // excluded from serialized reports
  std::string fingerprint;
};

/// Runs the pipeline in order: induce loss on the complete data, split,
/// fit on train, impute, score masked test cells against the truth.
/// When kaplan_meier is requested, each imputer also completes the training
/// partition so the merged dataset is fully observed. Writes deterministic
/// report files (scores.csv, report.json, config snapshot, km curves) when
/// out_dir is set.
std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg);

struct SuiteEntryResult {
  std::string name;
  std::vector<ResultRecord> records;
  std::string error;  // nonempty when the entry failed
};

/// Runs every config, recording per-entry failures without aborting the
/// suite; writes suite.csv / suite.json under out_dir when set.
std::vector<SuiteEntryResult> run_suite(const std::vector<ExperimentConfig>& configs,
                                        const std::string& out_dir);

/// Suite file: {"experiments": [...]} and/or {"base": {...}, "grid":
/// {"presets": [...], "mechanisms": [...], "proportions": [...]}}.
std::vector<ExperimentConfig> suite_from_json_file(const std::string& path);

std::string report_json(const std::vector<ResultRecord>& records);

}  // namespace ltfu
