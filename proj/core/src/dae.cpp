#include "ltfu/dae.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json_codec.hpp"
#include "ltfu/rng.hpp"
#include "ltfu/stats.hpp"

namespace ltfu {

namespace {
// Keeps imputed times usable by the product-limit estimator.
constexpr double kTimeFloor = 1e-12;

void validate_config(const DaeConfig& cfg) {
  if (cfg.phi < 0) throw std::invalid_argument("dae: phi must be >= 0");
  if (cfg.encoder_layers < 1) throw std::invalid_argument("dae: encoder_layers must be >= 1");
  if (cfg.epochs < 1) throw std::invalid_argument("dae: epochs must be >= 1");
  if (!(cfg.binary_cutoff > 0.0 && cfg.binary_cutoff < 1.0))
    throw std::invalid_argument("dae: binary_cutoff must be in (0, 1)");
  if (!(cfg.dropout_rate >= 0.0 && cfg.dropout_rate < 1.0))
    throw std::invalid_argument("dae: dropout_rate must be in [0, 1)");
  if (cfg.batch_size < 1) throw std::invalid_argument("dae: batch_size must be >= 1");
  if (cfg.train_corruption_rate &&
      !(*cfg.train_corruption_rate >= 0.0 && *cfg.train_corruption_rate <= 1.0))
    throw std::invalid_argument("dae: train_corruption_rate must be in [0, 1]");
}
}  // namespace

DaeConfig dae_small_data_defaults() {
  DaeConfig cfg;
  cfg.phi = 7;
  cfg.use_batchnorm = false;
  cfg.activation = Activation::tanh;
  return cfg;
}

DaeConfig dae_config_from_json_string(const std::string& text) {
  return codec::dae_config_from_json(nlohmann::json::parse(text));
}

std::vector<LayerSpec> build_architecture(std::size_t width_in, const DaeConfig& cfg) {
  if (width_in < 1) throw std::invalid_argument("dae: input width must be >= 1");
  validate_config(cfg);

  const auto n = static_cast<long>(width_in);
  const long phi = cfg.phi;
  const int k = cfg.encoder_layers;

  std::vector<long> widths;
  for (int i = 1; i <= k; ++i)
    widths.push_back(cfg.mode == DaeMode::overcomplete ? n + i * phi
                                                       : std::max(1L, n - i * phi));
  for (int i = k - 1; i >= 1; --i)
    widths.push_back(cfg.mode == DaeMode::overcomplete ? n + i * phi
                                                       : std::max(1L, n - i * phi));

  std::vector<LayerSpec> specs;
  std::size_t prev = width_in;
  for (const long w : widths) {
    const auto width = static_cast<std::size_t>(w);
    specs.push_back(LayerSpec::dense(prev, width));
    specs.push_back(LayerSpec::activation(cfg.activation));
    if (width > width_in) {
      if (cfg.use_batchnorm) specs.push_back(LayerSpec::batch_norm(width));
      specs.push_back(LayerSpec::dropout(cfg.dropout_rate));
    }
    prev = width;
  }
  specs.push_back(LayerSpec::dense(prev, width_in));
  return specs;
}

namespace {

double corruption_threshold(const DaeConfig& cfg, double rate) {
  if (cfg.corruption_distribution == ThresholdDistribution::uniform01) return rate;
  if (rate <= 0.0) return -1e308;
  if (rate >= 1.0) return 1e308;
  return normal_quantile(rate);
}

double draw_threshold_variate(const DaeConfig& cfg, RngStream& rng) {
  return cfg.corruption_distribution == ThresholdDistribution::uniform01 ? rng.uniform()
                                                                         : rng.normal();
}

}  // namespace

FittedImputer dae_fit(const Dataset& train, const MaskMatrix& train_mask,
                      const DaeConfig& cfg) {
  validate_config(cfg);
  require_aligned(train, train_mask);
  validate_schema(train.schema);

  std::vector<std::size_t> complete_rows;
  for (std::size_t r = 0; r < train.n_rows; ++r) {
    bool complete = true;
    for (std::size_t c = 0; c < train.n_cols && complete; ++c)
      if (train_mask.at(r, c)) complete = false;
    if (complete) complete_rows.push_back(r);
  }
  if (complete_rows.empty())
    throw std::invalid_argument("dae_fit: training data has no fully observed row");

  FittedImputer fitted;
  fitted.schema = train.schema;
  fitted.config = cfg;
  fitted.scaler = fit_scaler(train, train_mask);
  fitted.encoding = build_encoding(train.schema);

  // Clean training matrix: scaled, one-hot, fully observed rows only.
  const Dataset scaled = apply_scaler(fitted.scaler, train);
  MaskMatrix none(train.n_rows, train.n_cols);
  const auto [wide_all, wide_mask_unused] = onehot_encode(scaled, none, fitted.encoding);
  (void)wide_mask_unused;
  const std::size_t width = fitted.encoding.total_width;
  Tensor2 clean(complete_rows.size(), width);
  for (std::size_t i = 0; i < complete_rows.size(); ++i)
    std::copy_n(wide_all.data.begin() + complete_rows[i] * width, width,
                clean.data.begin() + i * width);

  double rate = cfg.train_corruption_rate ? *cfg.train_corruption_rate
                                          : achieved_fraction(train_mask);
  if (!cfg.train_corruption_rate && rate == 0.0) rate = 0.2;
  const double tau = corruption_threshold(cfg, rate);

  const std::size_t o_wide = fitted.encoding.offset[outcome_index(train.schema)];
  const std::size_t t_wide = fitted.encoding.offset[time_index(train.schema)];

  fitted.network = Network(build_architecture(width, cfg), derive_seed(cfg.seed, "init"));
  AdamState adam(fitted.network.trainable(), cfg.adam);

  RngStream root(cfg.seed);
  auto rng_shuffle = root.substream("shuffle");
  auto rng_corrupt = root.substream("corrupt");
  auto rng_dropout = root.substream("dropout");

  const std::size_t n_train = clean.rows;
  const std::size_t batch = std::min(cfg.batch_size, n_train);
  std::vector<std::size_t> perm(n_train);
  for (std::size_t i = 0; i < n_train; ++i) perm[i] = i;

  fitted.loss_history.reserve(cfg.epochs);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = n_train; i > 1; --i)
      std::swap(perm[i - 1], perm[rng_shuffle.uniform_int(i)]);

    double sse = 0.0;
    std::size_t cells = 0;
    for (std::size_t start = 0; start < n_train; start += batch) {
      const std::size_t rows = std::min(batch, n_train - start);
      Tensor2 target(rows, width), input(rows, width);
      for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t src = perm[start + i];
        std::copy_n(clean.data.begin() + src * width, width,
                    target.data.begin() + i * width);
      }
      input = target;
      for (std::size_t i = 0; i < rows; ++i) {
        if (draw_threshold_variate(cfg, rng_corrupt) < tau) {
          input.at(i, o_wide) = 0.0;
          input.at(i, t_wide) = 0.0;
        }
      }

      ForwardCache cache;
      const Tensor2 out = fitted.network.forward(input, Mode::train, &rng_dropout, &cache);
      const auto [loss, dloss] = mse_loss(out, target);
      const auto grads = fitted.network.backward(cache, dloss);
      adam.step(fitted.network.trainable(), grads);

      sse += loss * static_cast<double>(out.size());
      cells += out.size();
    }
    fitted.loss_history.push_back(sse / static_cast<double>(cells));
  }
  return fitted;
}

Dataset dae_impute(const FittedImputer& fitted, const Dataset& data, const MaskMatrix& mask) {
  require_aligned(data, mask);
  if (data.schema.size() != fitted.schema.size())
    throw std::invalid_argument("dae_impute: schema width differs from fitted schema");
  for (std::size_t c = 0; c < data.schema.size(); ++c) {
    const auto& a = data.schema[c];
    const auto& b = fitted.schema[c];
    if (a.name != b.name || a.kind != b.kind || a.role != b.role ||
        a.cardinality != b.cardinality)
      throw std::invalid_argument("dae_impute: schema mismatch at column '" + a.name + "'");
  }

  const Dataset scaled = apply_scaler(fitted.scaler, data);
  auto [wide, wide_mask] = onehot_encode(scaled, mask, fitted.encoding);
  (void)wide_mask;

  Network net = fitted.network;  // infer mode leaves it untouched; copy stays cheap
  const Tensor2 out = net.forward(wide, Mode::infer, nullptr, nullptr);
  const Dataset decoded_scaled = onehot_decode(out, fitted.encoding, fitted.schema);
  const Dataset decoded = invert_scaler(fitted.scaler, decoded_scaled);

  Dataset result = data;
  const std::size_t tcol = time_index(data.schema);
  for (std::size_t r = 0; r < data.n_rows; ++r) {
    for (std::size_t c = 0; c < data.n_cols; ++c) {
      if (!mask.at(r, c)) continue;
      double v = decoded.at(r, c);
      if (data.schema[c].kind == ColumnKind::binary)
        v = v > fitted.config.binary_cutoff ? 1.0 : 0.0;
      else if (c == tcol && v < kTimeFloor)
        v = kTimeFloor;
      result.at(r, c) = v;
    }
  }
  return result;
}

std::string FittedImputer::to_json_string() const {
  nlohmann::json j = {
      {"format", "ltfu-imputer-v1"},
      {"schema", codec::schema_to_json(schema)},
      {"config", codec::dae_config_to_json(config)},
      {"scaler",
       {{"scaled", scaler.scaled}, {"mins", scaler.mins}, {"maxs", scaler.maxs}}},
      {"loss_history", loss_history},
      {"network", nlohmann::json::parse(network.to_json_string())},
  };
  return j.dump();
}

FittedImputer FittedImputer::from_json_string(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != "ltfu-imputer-v1")
    throw std::invalid_argument("imputer checkpoint: unknown format");
  FittedImputer fitted;
  fitted.schema = codec::schema_from_json(j.at("schema"));
  fitted.config = codec::dae_config_from_json(j.at("config"));
  fitted.scaler.scaled = j.at("scaler").at("scaled").get<std::vector<std::uint8_t>>();
  fitted.scaler.mins = j.at("scaler").at("mins").get<std::vector<double>>();
  fitted.scaler.maxs = j.at("scaler").at("maxs").get<std::vector<double>>();
  fitted.loss_history = j.at("loss_history").get<std::vector<double>>();
  fitted.encoding = build_encoding(fitted.schema);
  fitted.network = Network::from_json_string(j.at("network").dump());
  return fitted;
}

}  // namespace ltfu
