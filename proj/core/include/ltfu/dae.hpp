#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ltfu/dataset.hpp"
#include "ltfu/missingness.hpp"
#include "ltfu/network.hpp"
#include "ltfu/optimizer.hpp"
#include "ltfu/preprocess.hpp"

namespace ltfu {

/// Overcomplete widens each successive encoder layer by phi; bottleneck
/// mirrors with subtraction, floored at width 1.
enum class DaeMode { overcomplete, bottleneck };

struct DaeConfig {
  int phi = 5;
  int encoder_layers = 4;
  double dropout_rate = 0.2;
  bool use_batchnorm = true;
  Activation activation = Activation::relu;
  int epochs = 1000;
  std::size_t batch_size = 512;  // clamped to the training-row count
  double binary_cutoff = 0.5;
  /// Fraction of rows corrupted per training batch; empty means Auto, the
  /// achieved missing-row fraction of the training mask (0.2 when that is 0).
  std::optional<double> train_corruption_rate;
  ThresholdDistribution corruption_distribution = ThresholdDistribution::uniform01;
  std::uint64_t seed = 0;
  DaeMode mode = DaeMode::overcomplete;
  AdamConfig adam;
};

/// Variant tuned for low-dimensional, small-sample data: wider phi, plain
/// dropout-only regularization, tanh activations.
DaeConfig dae_small_data_defaults();

DaeConfig dae_config_from_json_string(const std::string& text);

/// Encoder/decoder stack for an input of the given width. Every hidden dense
/// layer is followed by its activation, then batch norm and dropout wherever
/// the layer is wider than the input; the final dense maps back to the input
/// width with no activation.
std::vector<LayerSpec> build_architecture(std::size_t width_in, const DaeConfig& cfg);

struct FittedImputer {
  Schema schema;
  Network network;
  ScalerState scaler;
  EncodingMap encoding;
  DaeConfig config;
  std::vector<double> loss_history;  // mean squared error per epoch

  std::string to_json_string() const;
  static FittedImputer from_json_string(const std::string& text);
};

/// Self-supervised training on the fully observed rows of `train`: each
/// batch gets the outcome/time cells of a random row subset zeroed and the
/// network reconstructs the clean batch under MSE. Deterministic given the
/// config seed.
FittedImputer dae_fit(const Dataset& train, const MaskMatrix& train_mask,
                      const DaeConfig& cfg);

/// One inference pass; only masked cells are replaced, observed cells pass
/// through bit-identically. Binary columns threshold at binary_cutoff,
/// categorical blocks decode by argmax, continuous cells inverse-scale.
/// Imputed time-to-outcome values are floored at a tiny positive value so
/// downstream survival analysis stays well-defined.
Dataset dae_impute(const FittedImputer& fitted, const Dataset& data, const MaskMatrix& mask);

}  // namespace ltfu
