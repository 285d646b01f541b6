#include "ltfu/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace ltfu {

AdamState::AdamState(const std::vector<std::span<double>>& params, AdamConfig cfg)
    : cfg_(cfg) {
  m_.reserve(params.size());
  v_.reserve(params.size());
  for (const auto& p : params) {
    m_.emplace_back(p.size(), 0.0);
    v_.emplace_back(p.size(), 0.0);
  }
}

void AdamState::step(const std::vector<std::span<double>>& params,
                     const std::vector<std::vector<double>>& grads) {
  if (params.size() != m_.size() || grads.size() != m_.size())
    throw std::invalid_argument("adam: parameter/gradient blocks do not match state");
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t b = 0; b < params.size(); ++b) {
    auto p = params[b];
    const auto& g = grads[b];
    if (p.size() != m_[b].size() || g.size() != m_[b].size())
      throw std::invalid_argument("adam: block size mismatch");
    for (std::size_t i = 0; i < p.size(); ++i) {
      m_[b][i] = cfg_.beta1 * m_[b][i] + (1.0 - cfg_.beta1) * g[i];
      v_[b][i] = cfg_.beta2 * v_[b][i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double mhat = m_[b][i] / bc1;
      const double vhat = v_[b][i] / bc2;
      p[i] -= cfg_.learning_rate * mhat / (std::sqrt(vhat) + cfg_.epsilon);
    }
  }
}

}  // namespace ltfu
