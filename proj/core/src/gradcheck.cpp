#include "ltfu/gradcheck.hpp"

#include <cmath>
#include <stdexcept>

namespace ltfu {

namespace {

double loss_at(Network net, const Tensor2& batch, const Tensor2& target) {
  // Train-mode forward so batch-norm uses batch statistics, matching the
  // gradients under test; the copy absorbs the running-stat update.
  const Tensor2 out = net.forward(batch, Mode::train, nullptr, nullptr);
  return mse_loss(out, target).first;
}

}  // namespace

double grad_check(const Network& net, const Tensor2& batch, const Tensor2& target,
                  double h) {
  if (!(h > 0.0)) throw std::invalid_argument("grad_check: h must be positive");
  for (const auto& s : net.specs())
    if (s.type == LayerType::dropout && s.rate > 0.0)
      throw std::invalid_argument("grad_check: disable dropout first");

  Network work = net;
  ForwardCache cache;
  const Tensor2 out = work.forward(batch, Mode::train, nullptr, &cache);
  const auto [loss, dloss] = mse_loss(out, target);
  (void)loss;
  const auto analytic = work.backward(cache, dloss);

  double worst = 0.0;
  const auto blocks = net.trainable_view();
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    for (std::size_t i = 0; i < blocks[b].size(); ++i) {
      Network plus = net;
      Network minus = net;
      plus.trainable()[b][i] += h;
      minus.trainable()[b][i] -= h;
      const double numeric =
          (loss_at(std::move(plus), batch, target) - loss_at(std::move(minus), batch, target)) /
          (2.0 * h);
      const double a = analytic[b][i];
      const double rel =
          std::fabs(a - numeric) / std::max(std::fabs(a) + std::fabs(numeric), 1e-6);
      if (rel > worst) worst = rel;
    }
  }
  return worst;
}

}  // namespace ltfu
