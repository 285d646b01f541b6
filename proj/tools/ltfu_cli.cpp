// Command-line front end for the loss-to-followup recovery toolkit.
//
// Subcommands cover the pipeline stages individually (simulate, corrupt,
// split, impute, score, km) and as declarative runs (run, suite). Datasets
// travel as CSV with a JSON schema sidecar; "?" marks missing cells.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "ltfu/csv.hpp"
#include "ltfu/dae.hpp"
#include "ltfu/dataset.hpp"
#include "ltfu/experiment.hpp"
#include "ltfu/metrics.hpp"
#include "ltfu/mice.hpp"
#include "ltfu/missingness.hpp"
#include "ltfu/rng.hpp"
#include "ltfu/simulate.hpp"
#include "ltfu/split.hpp"
#include "ltfu/survival.hpp"

namespace {

std::string sidecar_schema_path(const std::string& csv_path) {
  std::filesystem::path p(csv_path);
  p.replace_extension(".schema.json");
  return p.string();
}

ltfu::Schema resolve_schema(const std::string& schema_path, const std::string& csv_path) {
  if (!schema_path.empty()) return ltfu::load_schema_json(schema_path);
  const std::string sidecar = sidecar_schema_path(csv_path);
  if (std::filesystem::exists(sidecar)) return ltfu::load_schema_json(sidecar);
  throw std::runtime_error("no schema given and no sidecar found at '" + sidecar + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

ltfu::LossSpec make_loss_spec(const std::string& mechanism, double proportion, int target,
                              const std::string& distribution, std::uint64_t seed) {
  ltfu::LossSpec spec;
  if (mechanism == "CAR" || mechanism == "car")
    spec.mechanism = ltfu::LossMechanism::car;
  else if (mechanism == "NAR" || mechanism == "nar")
    spec.mechanism = ltfu::LossMechanism::nar;
  else
    throw std::runtime_error("mechanism must be CAR or NAR");
  spec.proportion = proportion;
  spec.nar_target_outcome = target;
  if (distribution == "uniform01")
    spec.threshold_distribution = ltfu::ThresholdDistribution::uniform01;
  else if (distribution == "standard_normal")
    spec.threshold_distribution = ltfu::ThresholdDistribution::standard_normal;
  else
    throw std::runtime_error("distribution must be uniform01 or standard_normal");
  spec.seed = seed;
  return spec;
}

void km_medians_out(const ltfu::Dataset& ds, const std::string& curve_out,
                    const std::string& format) {
  const std::size_t tcol = ltfu::time_index(ds.schema);
  const std::size_t ocol = ltfu::outcome_index(ds.schema);
  std::vector<double> times(ds.n_rows);
  std::vector<int> events(ds.n_rows);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    times[r] = ds.at(r, tcol);
    events[r] = ds.at(r, ocol) == 1.0 ? 1 : 0;
  }
  const auto curve = ltfu::kaplan_meier(times, events);
  const auto band = ltfu::km_confidence_band(curve);
  if (!curve_out.empty()) ltfu::write_curve_csv(curve, band, curve_out);
  const auto est = ltfu::median_survival(curve, band);
  auto show = [](const std::optional<double>& v) {
    return v ? ltfu::format_double(*v) : std::string("undefined");
  };
  if (format == "json") {
    std::cout << "{\"median\": " << (est.median ? ltfu::format_double(*est.median) : "null")
              << ", \"lo\": " << (est.lo ? ltfu::format_double(*est.lo) : "null")
              << ", \"hi\": " << (est.hi ? ltfu::format_double(*est.hi) : "null") << "}\n";
  } else {
    std::cout << "median,lo,hi\n"
              << show(est.median) << ',' << show(est.lo) << ',' << show(est.hi) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loss-to-followup recovery toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string out, format = "csv", config_path;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic preset dataset");
  std::string sim_preset = "s1";
  std::size_t sim_size = 0;
  sim->add_option("--preset", sim_preset, "s1..s5 or m1..m5");
  sim->add_option("--size", sim_size, "rows (s*) or patients (m*); 0 = preset default");
  sim->add_option("--seed", seed);
  sim->add_option("--out", out, "output CSV path")->required();

  // corrupt
  auto* cor = app.add_subcommand("corrupt", "Induce loss to followup on complete data");
  std::string cor_in, cor_schema, cor_mech = "CAR", cor_dist = "uniform01";
  double cor_p = 0.2;
  int cor_target = 1;
  cor->add_option("--in", cor_in)->required();
  cor->add_option("--schema", cor_schema, "schema JSON (default: <in>.schema.json)");
  cor->add_option("--mechanism", cor_mech, "CAR or NAR");
  cor->add_option("--proportion", cor_p);
  cor->add_option("--target", cor_target, "NAR target outcome class");
  cor->add_option("--distribution", cor_dist, "uniform01 or standard_normal");
  cor->add_option("--seed", seed);
  cor->add_option("--out", out)->required();

  // split
  auto* spl = app.add_subcommand("split", "Seeded train/test split");
  std::string spl_in, spl_schema, spl_train_out, spl_test_out;
  double spl_fraction = 0.7;
  bool spl_by_patient = false;
  spl->add_option("--in", spl_in)->required();
  spl->add_option("--schema", spl_schema);
  spl->add_option("--fraction", spl_fraction);
  spl->add_flag("--by-patient", spl_by_patient);
  spl->add_option("--seed", seed);
  spl->add_option("--out-train", spl_train_out)->required();
  spl->add_option("--out-test", spl_test_out)->required();

  // impute
  auto* imp = app.add_subcommand("impute", "Fill masked cells with DAE or MICE");
  std::string imp_method, imp_train, imp_in, imp_schema, imp_model_out;
  imp->add_option("--method", imp_method, "dae or mice")->required();
  imp->add_option("--train", imp_train, "training CSV (dae only)");
  imp->add_option("--in", imp_in, "CSV to impute")->required();
  imp->add_option("--schema", imp_schema);
  imp->add_option("--config", config_path, "JSON with DaeConfig/MiceConfig fields");
  imp->add_option("--seed", seed);
  imp->add_option("--out", out)->required();
  imp->add_option("--save-model", imp_model_out, "write the fitted DAE checkpoint");

  // score
  auto* sco = app.add_subcommand("score", "Score imputations on masked cells");
  std::string sco_truth, sco_lossy, sco_imputed, sco_schema, sco_method = "DAE";
  sco->add_option("--truth", sco_truth)->required();
  sco->add_option("--lossy", sco_lossy, "CSV whose ? cells define the mask")->required();
  sco->add_option("--imputed", sco_imputed)->required();
  sco->add_option("--schema", sco_schema);
  sco->add_option("--method", sco_method, "label for the report row");
  sco->add_option("--format", format, "csv or json");

  // km
  auto* km = app.add_subcommand("km", "Kaplan-Meier curve and median survival");
  std::string km_in, km_schema;
  km->add_option("--in", km_in)->required();
  km->add_option("--schema", km_schema);
  km->add_option("--out", out, "curve CSV path");
  km->add_option("--format", format, "csv or json");

  // run / suite
  auto* run = app.add_subcommand("run", "Run a full experiment from a config file");
  std::uint64_t run_seed = 0;
  bool run_seed_set = false;
  run->add_option("--config", config_path)->required();
  run->add_option("--seed", run_seed)->each([&](const std::string&) { run_seed_set = true; });
  run->add_option("--out", out, "override the config's output directory");

  auto* sui = app.add_subcommand("suite", "Run a suite of experiments");
  sui->add_option("--config", config_path)->required();
  sui->add_option("--out", out, "output directory for the consolidated table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      const ltfu::Dataset ds = ltfu::simulate_preset(sim_preset, sim_size, seed);
      ltfu::write_csv(ds, ltfu::MaskMatrix(ds.n_rows, ds.n_cols), out);
      ltfu::save_schema_json(ds.schema, sidecar_schema_path(out));
      std::cout << "wrote " << ds.n_rows << "x" << ds.n_cols << " to " << out << "\n";
    } else if (*cor) {
      const auto schema = resolve_schema(cor_schema, cor_in);
      auto [ds, pre_mask] = ltfu::load_csv(cor_in, schema);
      const auto spec = make_loss_spec(cor_mech, cor_p, cor_target, cor_dist, seed);
      auto [lossy, mask] = ltfu::induce_loss(ds, spec, &pre_mask);
      for (std::size_t i = 0; i < mask.bits.size(); ++i)
        mask.bits[i] = mask.bits[i] | pre_mask.bits[i];
      ltfu::write_csv(lossy, mask, out);
      ltfu::save_schema_json(schema, sidecar_schema_path(out));
      std::cout << "masked row fraction: " << ltfu::achieved_fraction(mask) << "\n";
    } else if (*spl) {
      const auto schema = resolve_schema(spl_schema, spl_in);
      auto [ds, mask] = ltfu::load_csv(spl_in, schema);
      const auto res = ltfu::split_train_test(ds, mask, spl_fraction, seed, spl_by_patient);
      ltfu::write_csv(res.train, res.train_mask, spl_train_out);
      ltfu::write_csv(res.test, res.test_mask, spl_test_out);
      ltfu::save_schema_json(schema, sidecar_schema_path(spl_train_out));
      ltfu::save_schema_json(schema, sidecar_schema_path(spl_test_out));
      std::cout << "train rows: " << res.train.n_rows << ", test rows: " << res.test.n_rows
                << "\n";
    } else if (*imp) {
      const auto schema = resolve_schema(imp_schema, imp_in);
      auto [ds, mask] = ltfu::load_csv(imp_in, schema);
      ltfu::Dataset imputed;
      if (imp_method == "dae") {
        if (imp_train.empty()) throw std::runtime_error("impute --method dae needs --train");
        auto [train, train_mask] = ltfu::load_csv(imp_train, schema);
        ltfu::DaeConfig cfg;
        if (!config_path.empty()) cfg = ltfu::dae_config_from_json_string(read_file(config_path));
        cfg.seed = seed;
        const auto fitted = ltfu::dae_fit(train, train_mask, cfg);
        if (!imp_model_out.empty()) {
          std::ofstream mo(imp_model_out);
          mo << fitted.to_json_string();
        }
        imputed = ltfu::dae_impute(fitted, ds, mask);
      } else if (imp_method == "mice") {
        ltfu::MiceConfig cfg;
        if (!config_path.empty())
          cfg = ltfu::mice_config_from_json_string(read_file(config_path));
        cfg.seed = seed;
        imputed = ltfu::mice_impute(ds, mask, cfg);
      } else {
        throw std::runtime_error("impute method must be dae or mice");
      }
      ltfu::write_csv(imputed, ltfu::MaskMatrix(ds.n_rows, ds.n_cols), out);
      ltfu::save_schema_json(schema, sidecar_schema_path(out));
      std::cout << "imputed " << mask.count() << " cells\n";
    } else if (*sco) {
      const auto schema = resolve_schema(sco_schema, sco_truth);
      auto [truth, truth_mask] = ltfu::load_csv(sco_truth, schema);
      auto [lossy, mask] = ltfu::load_csv(sco_lossy, schema);
      auto [imputed, imputed_mask] = ltfu::load_csv(sco_imputed, schema);
      (void)truth_mask;
      (void)lossy;
      (void)imputed_mask;
      const auto counts = ltfu::score_outcome(imputed, truth, mask);
      const double rmse = ltfu::rmse_time(imputed, truth, mask);
      ltfu::ScoreRow row{sco_method, sco_truth, "", 0.0, seed,
                         ltfu::make_score_report(counts, rmse)};
      if (format == "json")
        std::cout << row.to_json() << "\n";
      else
        std::cout << ltfu::ScoreRow::csv_header() << "\n" << row.to_csv() << "\n";
    } else if (*km) {
      const auto schema = resolve_schema(km_schema, km_in);
      auto [ds, mask] = ltfu::load_csv(km_in, schema);
      if (mask.any())
        throw std::runtime_error("km needs complete outcome/time columns; impute first");
      km_medians_out(ds, out, format);
    } else if (*run) {
      ltfu::ExperimentConfig cfg = ltfu::experiment_config_from_json_file(config_path);
      if (run_seed_set) cfg.seed = run_seed;
      if (!out.empty()) cfg.out_dir = out;
      const auto records = ltfu::run_experiment(cfg);
      std::cout << ltfu::ScoreRow::csv_header() << "\n";
      for (const auto& rec : records)
        if (rec.method != "None") std::cout << rec.score.to_csv() << "\n";
      for (const auto& rec : records) {
        if (rec.km && rec.method == "DAE") {
          auto show = [](const std::optional<double>& v) {
            return v ? ltfu::format_double(*v) : std::string("undefined");
          };
          std::cout << "km medians: original=" << show(rec.km->original.median)
                    << " dae=" << show(rec.km->dae.median)
                    << " mice=" << show(rec.km->mice.median)
                    << " complete_case=" << show(rec.km->complete_case.median) << "\n";
        }
      }
      std::cerr << "wall time: " << records.front().wall_time_seconds << " s\n";
    } else if (*sui) {
      const auto configs = ltfu::suite_from_json_file(config_path);
      const auto results = ltfu::run_suite(configs, out);
      std::size_t failed = 0;
      for (const auto& entry : results) {
        if (!entry.error.empty()) {
          ++failed;
          std::cerr << entry.name << ": " << entry.error << "\n";
        }
      }
      std::cout << results.size() << " experiments, " << failed << " failed\n";
      if (failed == results.size()) return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
