#pragma once

#include <span>
#include <vector>

namespace ltfu {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adaptive-moment gradient descent with bias-corrected first and second
/// moments. Accumulators mirror the parameter blocks they were built from.
class AdamState {
 public:
  AdamState() = default;
  AdamState(const std::vector<std::span<double>>& params, AdamConfig cfg = {});

  void step(const std::vector<std::span<double>>& params,
            const std::vector<std::vector<double>>& grads);

  long step_count() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  long t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

}  // namespace ltfu
