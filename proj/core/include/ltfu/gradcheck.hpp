#pragma once

#include "ltfu/network.hpp"
#include "ltfu/tensor.hpp"

namespace ltfu {

/// Compares analytic MSE gradients against central finite differences,
/// parameter by parameter, and returns the largest relative error
/// |analytic - numeric| / max(|analytic| + |numeric|, 1e-6).
///
/// Requires h > 0 and a stack without active dropout (a stochastic forward
/// has no well-defined finite difference). The network is copied internally;
/// the caller's instance is left untouched.
double grad_check(const Network& net, const Tensor2& batch, const Tensor2& target,
                  double h);

}  // namespace ltfu
