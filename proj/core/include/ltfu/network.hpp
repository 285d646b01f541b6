#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ltfu/rng.hpp"
#include "ltfu/tensor.hpp"

namespace ltfu {

enum class Activation { relu, tanh, identity };
enum class Mode { train, infer };
enum class LayerType { dense, batch_norm, dropout, activation };

struct LayerSpec {
  LayerType type = LayerType::dense;
  std::size_t in_dim = 0;
  std::size_t out_dim = 0;
  double momentum = 0.99;  // batch_norm running-stat decay
  double epsilon = 1e-5;   // batch_norm variance floor
  double rate = 0.0;       // dropout keep-out probability
  Activation act = Activation::identity;

  static LayerSpec dense(std::size_t in, std::size_t out);
  static LayerSpec batch_norm(std::size_t dim, double momentum = 0.99, double epsilon = 1e-5);
  static LayerSpec dropout(double rate);
  static LayerSpec activation(Activation a);
};

struct DenseParams {
  Tensor2 weight;  // in_dim x out_dim
  std::vector<double> bias;
};

struct BatchNormParams {
  std::vector<double> gamma, beta;
  std::vector<double> running_mean, running_var;
};

struct LayerCache {
  Tensor2 input;   // dense input
  Tensor2 extra;   // activation output / dropout scaled mask / batch-norm x-hat
  std::vector<double> inv_std;  // batch-norm
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  bool train_mode = false;
};

/// Loss = mean over all cells of (pred - target)^2; second element is the
/// gradient with respect to pred.
std::pair<double, Tensor2> mse_loss(const Tensor2& pred, const Tensor2& target);

/// Dense feed-forward stack over the fixed layer set. Parameters are owned
/// here; gradients come back from backward() aligned with trainable().
class Network {
 public:
  Network() = default;

  /// Initializes dense weights by fan scaling: He-normal when the stack's
  /// hidden activation is relu, Glorot-uniform otherwise. Biases start at 0,
  /// batch-norm at identity.
  Network(std::vector<LayerSpec> specs, std::uint64_t init_seed);

  const std::vector<LayerSpec>& specs() const { return specs_; }
  std::size_t input_width() const;
  std::size_t output_width() const;

  /// Train mode: batch-norm uses batch statistics and updates running stats;
  /// dropout zeroes units and rescales survivors (inverted dropout, consumes
  /// rng). Infer mode is deterministic and leaves the network untouched.
  Tensor2 forward(const Tensor2& batch, Mode mode, RngStream* rng, ForwardCache* cache);

  /// Reverse-mode gradients for every dense and batch-norm parameter,
  /// including flow through the batch statistics. The cache must come from a
  /// train-mode forward against the current parameters.
  std::vector<std::vector<double>> backward(const ForwardCache& cache,
                                            const Tensor2& output_grad) const;

  /// Mutable views of all trainable parameters in layer order
  /// (dense: weight then bias; batch-norm: gamma then beta).
  std::vector<std::span<double>> trainable();
  std::vector<std::span<const double>> trainable_view() const;
  std::size_t parameter_count() const;

  std::string to_json_string() const;
  static Network from_json_string(const std::string& text);

  const std::vector<DenseParams>& dense_params() const { return dense_; }
  const std::vector<BatchNormParams>& batch_norm_params() const { return bn_; }

 private:
  std::vector<LayerSpec> specs_;
  // Parallel to specs_: index into dense_ / bn_, or npos.
  std::vector<std::size_t> param_slot_;
  std::vector<DenseParams> dense_;
  std::vector<BatchNormParams> bn_;
};

/// Validates dimension chaining and returns the stack's hidden activation
/// (first non-identity activation layer, identity when none).
Activation validate_layer_chain(const std::vector<LayerSpec>& specs);

}  // namespace ltfu
