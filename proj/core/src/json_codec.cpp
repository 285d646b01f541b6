#include "json_codec.hpp"

#include <fstream>
#include <stdexcept>

namespace ltfu {

Schema load_schema_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("schema: cannot open '" + path + "'");
  nlohmann::json j;
  in >> j;
  Schema schema = codec::schema_from_json(j);
  validate_schema(schema);
  return schema;
}

void save_schema_json(const Schema& schema, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("schema: cannot open '" + path + "' for writing");
  out << codec::schema_to_json(schema).dump(2) << '\n';
}

}  // namespace ltfu

namespace ltfu::codec {

std::string kind_name(ColumnKind k) {
  switch (k) {
    case ColumnKind::continuous: return "continuous";
    case ColumnKind::binary: return "binary";
    case ColumnKind::categorical: return "categorical";
  }
  return "continuous";
}

ColumnKind kind_from(const std::string& s) {
  if (s == "continuous") return ColumnKind::continuous;
  if (s == "binary") return ColumnKind::binary;
  if (s == "categorical") return ColumnKind::categorical;
  throw std::invalid_argument("unknown column kind '" + s + "'");
}

std::string role_name(ColumnRole r) {
  switch (r) {
    case ColumnRole::feature: return "feature";
    case ColumnRole::outcome: return "outcome";
    case ColumnRole::time_to_outcome: return "time";
    case ColumnRole::patient_id: return "patient_id";
  }
  return "feature";
}

ColumnRole role_from(const std::string& s) {
  if (s == "feature") return ColumnRole::feature;
  if (s == "outcome") return ColumnRole::outcome;
  if (s == "time") return ColumnRole::time_to_outcome;
  if (s == "patient_id") return ColumnRole::patient_id;
  throw std::invalid_argument("unknown column role '" + s + "'");
}

json schema_to_json(const Schema& schema) {
  json arr = json::array();
  for (const auto& col : schema) {
    json c = {{"name", col.name}, {"kind", kind_name(col.kind)}, {"role", role_name(col.role)}};
    if (col.kind == ColumnKind::categorical) c["cardinality"] = col.cardinality;
    arr.push_back(std::move(c));
  }
  return arr;
}

Schema schema_from_json(const json& j) {
  Schema schema;
  for (const auto& c : j) {
    ColumnSpec col;
    col.name = c.at("name");
    col.kind = kind_from(c.value("kind", "continuous"));
    col.role = role_from(c.value("role", "feature"));
    col.cardinality = c.value("cardinality", 0);
    schema.push_back(std::move(col));
  }
  return schema;
}

namespace {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "relu";
}

Activation activation_from(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

std::string distribution_name(ThresholdDistribution d) {
  return d == ThresholdDistribution::uniform01 ? "uniform01" : "standard_normal";
}

ThresholdDistribution distribution_from(const std::string& s) {
  if (s == "uniform01") return ThresholdDistribution::uniform01;
  if (s == "standard_normal") return ThresholdDistribution::standard_normal;
  throw std::invalid_argument("unknown threshold distribution '" + s + "'");
}

}  // namespace

json dae_config_to_json(const DaeConfig& cfg) {
  json j = {
      {"phi", cfg.phi},
      {"encoder_layers", cfg.encoder_layers},
      {"dropout_rate", cfg.dropout_rate},
      {"use_batchnorm", cfg.use_batchnorm},
      {"activation", activation_name(cfg.activation)},
      {"epochs", cfg.epochs},
      {"batch_size", cfg.batch_size},
      {"binary_cutoff", cfg.binary_cutoff},
      {"corruption_distribution", distribution_name(cfg.corruption_distribution)},
      {"seed", cfg.seed},
      {"mode", cfg.mode == DaeMode::overcomplete ? "overcomplete" : "bottleneck"},
      {"learning_rate", cfg.adam.learning_rate},
  };
  if (cfg.train_corruption_rate)
    j["train_corruption_rate"] = *cfg.train_corruption_rate;
  else
    j["train_corruption_rate"] = "auto";
  return j;
}

DaeConfig dae_config_from_json(const json& j) {
  DaeConfig cfg;
  cfg.phi = j.value("phi", cfg.phi);
  cfg.encoder_layers = j.value("encoder_layers", cfg.encoder_layers);
  cfg.dropout_rate = j.value("dropout_rate", cfg.dropout_rate);
  cfg.use_batchnorm = j.value("use_batchnorm", cfg.use_batchnorm);
  if (j.contains("activation")) cfg.activation = activation_from(j.at("activation"));
  cfg.epochs = j.value("epochs", cfg.epochs);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.binary_cutoff = j.value("binary_cutoff", cfg.binary_cutoff);
  if (j.contains("corruption_distribution"))
    cfg.corruption_distribution = distribution_from(j.at("corruption_distribution"));
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("mode")) {
    const std::string m = j.at("mode");
    if (m == "overcomplete")
      cfg.mode = DaeMode::overcomplete;
    else if (m == "bottleneck")
      cfg.mode = DaeMode::bottleneck;
    else
      throw std::invalid_argument("unknown dae mode '" + m + "'");
  }
  cfg.adam.learning_rate = j.value("learning_rate", cfg.adam.learning_rate);
  if (j.contains("train_corruption_rate") && j.at("train_corruption_rate").is_number())
    cfg.train_corruption_rate = j.at("train_corruption_rate").get<double>();
  return cfg;
}

json mice_config_to_json(const MiceConfig& cfg) {
  return {{"n_cycles", cfg.n_cycles},
          {"k_donors", cfg.k_donors},
          {"ridge", cfg.ridge},
          {"seed", cfg.seed}};
}

MiceConfig mice_config_from_json(const json& j) {
  MiceConfig cfg;
  cfg.n_cycles = j.value("n_cycles", cfg.n_cycles);
  cfg.k_donors = j.value("k_donors", cfg.k_donors);
  cfg.ridge = j.value("ridge", cfg.ridge);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

json loss_spec_to_json(const LossSpec& spec) {
  return {{"mechanism", spec.mechanism == LossMechanism::car ? "CAR" : "NAR"},
          {"proportion", spec.proportion},
          {"nar_target_outcome", spec.nar_target_outcome},
          {"threshold_distribution", distribution_name(spec.threshold_distribution)},
          {"seed", spec.seed}};
}

LossSpec loss_spec_from_json(const json& j) {
  LossSpec spec;
  if (j.contains("mechanism")) {
    const std::string m = j.at("mechanism");
    if (m == "CAR" || m == "car")
      spec.mechanism = LossMechanism::car;
    else if (m == "NAR" || m == "nar")
      spec.mechanism = LossMechanism::nar;
    else
      throw std::invalid_argument("unknown loss mechanism '" + m + "'");
  }
  spec.proportion = j.value("proportion", spec.proportion);
  spec.nar_target_outcome = j.value("nar_target_outcome", spec.nar_target_outcome);
  if (j.contains("threshold_distribution"))
    spec.threshold_distribution = distribution_from(j.at("threshold_distribution"));
  spec.seed = j.value("seed", spec.seed);
  return spec;
}

}  // namespace ltfu::codec
