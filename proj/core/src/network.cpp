#include "ltfu/network.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace ltfu {

using nlohmann::json;

LayerSpec LayerSpec::dense(std::size_t in, std::size_t out) {
  LayerSpec s;
  s.type = LayerType::dense;
  s.in_dim = in;
  s.out_dim = out;
  return s;
}

LayerSpec LayerSpec::batch_norm(std::size_t dim, double momentum, double epsilon) {
  LayerSpec s;
  s.type = LayerType::batch_norm;
  s.in_dim = s.out_dim = dim;
  s.momentum = momentum;
  s.epsilon = epsilon;
  return s;
}

LayerSpec LayerSpec::dropout(double rate) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("dropout rate must be in [0, 1)");
  LayerSpec s;
  s.type = LayerType::dropout;
  s.rate = rate;
  return s;
}

LayerSpec LayerSpec::activation(Activation a) {
  LayerSpec s;
  s.type = LayerType::activation;
  s.act = a;
  return s;
}

Activation validate_layer_chain(const std::vector<LayerSpec>& specs) {
  if (specs.empty()) throw std::invalid_argument("network: no layers");
  std::size_t width = 0;
  bool have_width = false;
  Activation hidden = Activation::identity;
  bool found = false;
  for (const auto& s : specs) {
    switch (s.type) {
      case LayerType::dense:
        if (s.in_dim == 0 || s.out_dim == 0)
          throw std::invalid_argument("network: dense layer with zero dimension");
        if (have_width && width != s.in_dim)
          throw std::invalid_argument("network: dense in_dim does not match previous width");
        width = s.out_dim;
        have_width = true;
        break;
      case LayerType::batch_norm:
        if (have_width && width != s.in_dim)
          throw std::invalid_argument("network: batch-norm dim does not match previous width");
        break;
      case LayerType::dropout:
        if (!(s.rate >= 0.0 && s.rate < 1.0))
          throw std::invalid_argument("network: dropout rate must be in [0, 1)");
        break;
      case LayerType::activation:
        if (!found && s.act != Activation::identity) {
          hidden = s.act;
          found = true;
        }
        break;
    }
  }
  if (!have_width) throw std::invalid_argument("network: stack has no dense layer");
  return hidden;
}

Network::Network(std::vector<LayerSpec> specs, std::uint64_t init_seed)
    : specs_(std::move(specs)) {
  const Activation hidden = validate_layer_chain(specs_);
  RngStream rng(init_seed);
  param_slot_.assign(specs_.size(), static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    if (s.type == LayerType::dense) {
      DenseParams p;
      p.weight = Tensor2(s.in_dim, s.out_dim);
      p.bias.assign(s.out_dim, 0.0);
      if (hidden == Activation::relu) {
        const double std_dev = std::sqrt(2.0 / static_cast<double>(s.in_dim));
        for (auto& w : p.weight.data) w = rng.normal() * std_dev;
      } else {
        const double bound =
            std::sqrt(6.0 / static_cast<double>(s.in_dim + s.out_dim));
        for (auto& w : p.weight.data) w = (2.0 * rng.uniform() - 1.0) * bound;
      }
      param_slot_[i] = dense_.size();
      dense_.push_back(std::move(p));
    } else if (s.type == LayerType::batch_norm) {
      BatchNormParams p;
      p.gamma.assign(s.in_dim, 1.0);
      p.beta.assign(s.in_dim, 0.0);
      p.running_mean.assign(s.in_dim, 0.0);
      p.running_var.assign(s.in_dim, 1.0);
      param_slot_[i] = bn_.size();
      bn_.push_back(std::move(p));
    }
  }
}

std::size_t Network::input_width() const {
  for (const auto& s : specs_)
    if (s.type == LayerType::dense) return s.in_dim;
  return 0;
}

std::size_t Network::output_width() const {
  std::size_t w = 0;
  for (const auto& s : specs_)
    if (s.type == LayerType::dense) w = s.out_dim;
  return w;
}

std::pair<double, Tensor2> mse_loss(const Tensor2& pred, const Tensor2& target) {
  if (!pred.same_shape(target)) throw std::invalid_argument("mse_loss: shape mismatch");
  if (pred.size() == 0) throw std::invalid_argument("mse_loss: empty tensors");
  const double inv_n = 1.0 / static_cast<double>(pred.size());
  double loss = 0.0;
  Tensor2 grad(pred.rows, pred.cols);
  for (std::size_t i = 0; i < pred.data.size(); ++i) {
    const double d = pred.data[i] - target.data[i];
    loss += d * d;
    grad.data[i] = 2.0 * d * inv_n;
  }
  return {loss * inv_n, std::move(grad)};
}

Tensor2 Network::forward(const Tensor2& batch, Mode mode, RngStream* rng,
                         ForwardCache* cache) {
  if (batch.cols != input_width())
    throw std::invalid_argument("forward: batch width " + std::to_string(batch.cols) +
                                " does not match network input " +
                                std::to_string(input_width()));
  if (cache) {
    cache->layers.assign(specs_.size(), LayerCache{});
    cache->train_mode = mode == Mode::train;
  }

  Tensor2 cur = batch;
  const std::size_t m = batch.rows;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    switch (s.type) {
      case LayerType::dense: {
        auto& p = dense_[param_slot_[i]];
        if (cache) cache->layers[i].input = cur;
        Tensor2 next = matmul(cur, p.weight);
        add_row_vector(next, p.bias);
        cur = std::move(next);
        break;
      }
      case LayerType::activation: {
        switch (s.act) {
          case Activation::relu:
            for (auto& v : cur.data) v = v > 0.0 ? v : 0.0;
            break;
          case Activation::tanh:
            for (auto& v : cur.data) v = std::tanh(v);
            break;
          case Activation::identity:
            break;
        }
        if (cache) cache->layers[i].extra = cur;
        break;
      }
      case LayerType::dropout: {
        if (mode == Mode::train && s.rate > 0.0) {
          if (!rng) throw std::invalid_argument("forward: dropout in train mode needs rng");
          const double scale = 1.0 / (1.0 - s.rate);
          Tensor2 mask(cur.rows, cur.cols);
          for (std::size_t k = 0; k < cur.data.size(); ++k) {
            mask.data[k] = rng->uniform() < s.rate ? 0.0 : scale;
            cur.data[k] *= mask.data[k];
          }
          if (cache) cache->layers[i].extra = std::move(mask);
        } else if (cache) {
          // Identity pass; an all-scale mask keeps backward uniform.
          cache->layers[i].extra = Tensor2(0, 0);
        }
        break;
      }
      case LayerType::batch_norm: {
        auto& p = bn_[param_slot_[i]];
        const std::size_t d = s.in_dim;
        if (cur.cols != d)
          throw std::invalid_argument("forward: batch-norm width mismatch");
        if (mode == Mode::train) {
          if (m == 0) throw std::invalid_argument("forward: empty batch");
          std::vector<double> mean(d, 0.0), var(d, 0.0);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < d; ++c) mean[c] += cur.at(r, c);
          for (auto& v : mean) v /= static_cast<double>(m);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < d; ++c) {
              const double t = cur.at(r, c) - mean[c];
              var[c] += t * t;
            }
          for (auto& v : var) v /= static_cast<double>(m);

          std::vector<double> inv_std(d);
          for (std::size_t c = 0; c < d; ++c) inv_std[c] = 1.0 / std::sqrt(var[c] + s.epsilon);

          Tensor2 xhat(m, d);
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < d; ++c)
              xhat.at(r, c) = (cur.at(r, c) - mean[c]) * inv_std[c];
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < d; ++c)
              cur.at(r, c) = p.gamma[c] * xhat.at(r, c) + p.beta[c];

          // Unbiased variance feeds the running estimate (biased when m == 1).
          const double bessel = m > 1 ? static_cast<double>(m) / static_cast<double>(m - 1) : 1.0;
          for (std::size_t c = 0; c < d; ++c) {
            p.running_mean[c] = s.momentum * p.running_mean[c] + (1.0 - s.momentum) * mean[c];
            p.running_var[c] =
                s.momentum * p.running_var[c] + (1.0 - s.momentum) * var[c] * bessel;
          }
          if (cache) {
            cache->layers[i].extra = std::move(xhat);
            cache->layers[i].inv_std = std::move(inv_std);
          }
        } else {
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t c = 0; c < d; ++c) {
              const double nh =
                  (cur.at(r, c) - p.running_mean[c]) / std::sqrt(p.running_var[c] + s.epsilon);
              cur.at(r, c) = p.gamma[c] * nh + p.beta[c];
            }
        }
        break;
      }
    }
  }
  return cur;
}

std::vector<std::vector<double>> Network::backward(const ForwardCache& cache,
                                                   const Tensor2& output_grad) const {
  if (!cache.train_mode || cache.layers.size() != specs_.size())
    throw std::invalid_argument("backward: cache does not match a train-mode forward");

  // Grad blocks aligned with trainable(): dense -> weight, bias;
  // batch-norm -> gamma, beta.
  std::vector<std::vector<double>> grads;
  for (const auto& s : specs_) {
    if (s.type == LayerType::dense) {
      grads.emplace_back(s.in_dim * s.out_dim, 0.0);
      grads.emplace_back(s.out_dim, 0.0);
    } else if (s.type == LayerType::batch_norm) {
      grads.emplace_back(s.in_dim, 0.0);
      grads.emplace_back(s.in_dim, 0.0);
    }
  }

  // Block offset per layer, walking forward once.
  std::vector<std::size_t> block_at(specs_.size(), 0);
  std::size_t blk = 0;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    block_at[i] = blk;
    if (specs_[i].type == LayerType::dense || specs_[i].type == LayerType::batch_norm)
      blk += 2;
  }

  Tensor2 grad = output_grad;
  for (std::size_t ii = specs_.size(); ii-- > 0;) {
    const auto& s = specs_[ii];
    const auto& lc = cache.layers[ii];
    switch (s.type) {
      case LayerType::dense: {
        const auto& p = dense_[param_slot_[ii]];
        const Tensor2 dw = matmul_tn(lc.input, grad);
        const std::vector<double> db = column_sums(grad);
        grads[block_at[ii]] = dw.data;
        grads[block_at[ii] + 1] = db;
        grad = matmul_nt(grad, p.weight);
        break;
      }
      case LayerType::activation: {
        const Tensor2& out = lc.extra;
        switch (s.act) {
          case Activation::relu:
            for (std::size_t k = 0; k < grad.data.size(); ++k)
              if (out.data[k] <= 0.0) grad.data[k] = 0.0;
            break;
          case Activation::tanh:
            for (std::size_t k = 0; k < grad.data.size(); ++k)
              grad.data[k] *= 1.0 - out.data[k] * out.data[k];
            break;
          case Activation::identity:
            break;
        }
        break;
      }
      case LayerType::dropout: {
        const Tensor2& mask = lc.extra;
        if (mask.size() != 0)
          for (std::size_t k = 0; k < grad.data.size(); ++k) grad.data[k] *= mask.data[k];
        break;
      }
      case LayerType::batch_norm: {
        const auto& p = bn_[param_slot_[ii]];
        const Tensor2& xhat = lc.extra;
        const std::vector<double>& inv_std = lc.inv_std;
        const std::size_t m = xhat.rows, d = xhat.cols;
        std::vector<double> dgamma(d, 0.0), dbeta(d, 0.0);
        std::vector<double> sum_dxhat(d, 0.0), sum_dxhat_xhat(d, 0.0);
        Tensor2 dxhat(m, d);
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < d; ++c) {
            const double dy = grad.at(r, c);
            dbeta[c] += dy;
            dgamma[c] += dy * xhat.at(r, c);
            const double dxh = dy * p.gamma[c];
            dxhat.at(r, c) = dxh;
            sum_dxhat[c] += dxh;
            sum_dxhat_xhat[c] += dxh * xhat.at(r, c);
          }
        const double inv_m = 1.0 / static_cast<double>(m);
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t c = 0; c < d; ++c)
            grad.at(r, c) = inv_std[c] * inv_m *
                            (static_cast<double>(m) * dxhat.at(r, c) - sum_dxhat[c] -
                             xhat.at(r, c) * sum_dxhat_xhat[c]);
        grads[block_at[ii]] = std::move(dgamma);
        grads[block_at[ii] + 1] = std::move(dbeta);
        break;
      }
    }
  }
  return grads;
}

std::vector<std::span<double>> Network::trainable() {
  std::vector<std::span<double>> out;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].type == LayerType::dense) {
      auto& p = dense_[param_slot_[i]];
      out.emplace_back(p.weight.data);
      out.emplace_back(p.bias);
    } else if (specs_[i].type == LayerType::batch_norm) {
      auto& p = bn_[param_slot_[i]];
      out.emplace_back(p.gamma);
      out.emplace_back(p.beta);
    }
  }
  return out;
}

std::vector<std::span<const double>> Network::trainable_view() const {
  std::vector<std::span<const double>> out;
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    if (specs_[i].type == LayerType::dense) {
      const auto& p = dense_[param_slot_[i]];
      out.emplace_back(p.weight.data);
      out.emplace_back(p.bias);
    } else if (specs_[i].type == LayerType::batch_norm) {
      const auto& p = bn_[param_slot_[i]];
      out.emplace_back(p.gamma);
      out.emplace_back(p.beta);
    }
  }
  return out;
}

std::size_t Network::parameter_count() const {
  std::size_t n = 0;
  for (const auto& span : trainable_view()) n += span.size();
  return n;
}

namespace {

std::string activation_name(Activation a) {
  switch (a) {
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::identity: return "identity";
  }
  return "identity";
}

Activation activation_from(const std::string& s) {
  if (s == "relu") return Activation::relu;
  if (s == "tanh") return Activation::tanh;
  if (s == "identity") return Activation::identity;
  throw std::invalid_argument("unknown activation '" + s + "'");
}

}  // namespace

std::string Network::to_json_string() const {
  json layers = json::array();
  json params = json::array();
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const auto& s = specs_[i];
    json l;
    json p;
    switch (s.type) {
      case LayerType::dense: {
        l = {{"type", "dense"}, {"in", s.in_dim}, {"out", s.out_dim}};
        const auto& dp = dense_[param_slot_[i]];
        p = {{"weight", dp.weight.data}, {"bias", dp.bias}};
        break;
      }
      case LayerType::batch_norm: {
        l = {{"type", "batch_norm"},
             {"dim", s.in_dim},
             {"momentum", s.momentum},
             {"epsilon", s.epsilon}};
        const auto& bp = bn_[param_slot_[i]];
        p = {{"gamma", bp.gamma},
             {"beta", bp.beta},
             {"running_mean", bp.running_mean},
             {"running_var", bp.running_var}};
        break;
      }
      case LayerType::dropout:
        l = {{"type", "dropout"}, {"rate", s.rate}};
        p = json::object();
        break;
      case LayerType::activation:
        l = {{"type", "activation"}, {"kind", activation_name(s.act)}};
        p = json::object();
        break;
    }
    layers.push_back(std::move(l));
    params.push_back(std::move(p));
  }
  json root = {{"format", "ltfu-network-v1"}, {"layers", layers}, {"params", params}};
  return root.dump();
}

Network Network::from_json_string(const std::string& text) {
  const json root = json::parse(text);
  if (root.value("format", "") != "ltfu-network-v1")
    throw std::invalid_argument("network checkpoint: unknown format");

  std::vector<LayerSpec> specs;
  for (const auto& l : root.at("layers")) {
    const std::string type = l.at("type");
    if (type == "dense")
      specs.push_back(LayerSpec::dense(l.at("in"), l.at("out")));
    else if (type == "batch_norm")
      specs.push_back(LayerSpec::batch_norm(l.at("dim"), l.at("momentum"), l.at("epsilon")));
    else if (type == "dropout")
      specs.push_back(LayerSpec::dropout(l.at("rate")));
    else if (type == "activation")
      specs.push_back(LayerSpec::activation(activation_from(l.at("kind"))));
    else
      throw std::invalid_argument("network checkpoint: unknown layer type '" + type + "'");
  }

  Network net(specs, 0);
  const auto& params = root.at("params");
  if (params.size() != specs.size())
    throw std::invalid_argument("network checkpoint: layer/param count mismatch");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (specs[i].type == LayerType::dense) {
      auto& dp = net.dense_[net.param_slot_[i]];
      const auto w = params[i].at("weight").get<std::vector<double>>();
      const auto b = params[i].at("bias").get<std::vector<double>>();
      if (w.size() != dp.weight.data.size() || b.size() != dp.bias.size())
        throw std::invalid_argument("network checkpoint: dense parameter size mismatch");
      dp.weight.data = w;
      dp.bias = b;
    } else if (specs[i].type == LayerType::batch_norm) {
      auto& bp = net.bn_[net.param_slot_[i]];
      bp.gamma = params[i].at("gamma").get<std::vector<double>>();
      bp.beta = params[i].at("beta").get<std::vector<double>>();
      bp.running_mean = params[i].at("running_mean").get<std::vector<double>>();
      bp.running_var = params[i].at("running_var").get<std::vector<double>>();
      const std::size_t d = specs[i].in_dim;
      if (bp.gamma.size() != d || bp.beta.size() != d || bp.running_mean.size() != d ||
          bp.running_var.size() != d)
        throw std::invalid_argument("network checkpoint: batch-norm parameter size mismatch");
    }
  }
  return net;
}

}  // namespace ltfu
