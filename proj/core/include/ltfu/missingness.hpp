#pragma once

#include <cstdint>
#include <utility>

#include "ltfu/dataset.hpp"

namespace ltfu {

enum class LossMechanism { car, nar };
enum class ThresholdDistribution { uniform01, standard_normal };

/// Loss-to-followup recipe: draw one threshold variate per row and mask the
/// outcome and time cells of rows whose variate falls below the p-quantile of
/// the chosen distribution. Under nar only rows whose outcome equals
/// nar_target_outcome are eligible.
struct LossSpec {
  LossMechanism mechanism = LossMechanism::car;
  double proportion = 0.2;
  int nar_target_outcome = 1;  // ignored under car
  ThresholdDistribution threshold_distribution = ThresholdDistribution::uniform01;
  std::uint64_t seed = 0;
};

/// Input outcome/time columns must be fully observed; masked cells are zeroed
/// in the returned dataset and recorded in the returned mask. Pass the
/// existing mask when the data came with one so the precondition is checked.
std::pair<Dataset, MaskMatrix> induce_loss(const Dataset& ds, const LossSpec& spec,
                                           const MaskMatrix* existing = nullptr);

/// Fraction of rows with at least one masked cell.
double achieved_fraction(const MaskMatrix& mask);

}  // namespace ltfu
