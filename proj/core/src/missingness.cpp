#include "ltfu/missingness.hpp"

#include <stdexcept>

#include "ltfu/rng.hpp"
#include "ltfu/stats.hpp"

namespace ltfu {

std::pair<Dataset, MaskMatrix> induce_loss(const Dataset& ds, const LossSpec& spec,
                                           const MaskMatrix* existing) {
  if (!(spec.proportion >= 0.0 && spec.proportion <= 1.0))
    throw std::invalid_argument("induce_loss: proportion must be in [0, 1]");
  if (spec.nar_target_outcome != 0 && spec.nar_target_outcome != 1)
    throw std::invalid_argument("induce_loss: nar_target_outcome must be 0 or 1");

  const std::size_t ocol = outcome_index(ds.schema);
  const std::size_t tcol = time_index(ds.schema);
  if (existing) {
    require_aligned(ds, *existing);
    for (std::size_t r = 0; r < ds.n_rows; ++r)
      if (existing->at(r, ocol) || existing->at(r, tcol))
        throw std::invalid_argument(
            "induce_loss: outcome/time already missing at row " + std::to_string(r));
  }

  // Threshold at the distribution's p-quantile so both variants target the
  // same masked fraction.
  double threshold;
  if (spec.threshold_distribution == ThresholdDistribution::uniform01) {
    threshold = spec.proportion;
  } else {
    if (spec.proportion <= 0.0)
      threshold = -1e308;
    else if (spec.proportion >= 1.0)
      threshold = 1e308;
    else
      threshold = normal_quantile(spec.proportion);
  }

  RngStream rng(spec.seed);
  Dataset out = ds;
  MaskMatrix mask(ds.n_rows, ds.n_cols);
  for (std::size_t r = 0; r < ds.n_rows; ++r) {
    const double v = spec.threshold_distribution == ThresholdDistribution::uniform01
                         ? rng.uniform()
                         : rng.normal();
    bool lose = v < threshold;
    if (spec.mechanism == LossMechanism::nar)
      lose = lose && ds.at(r, ocol) == static_cast<double>(spec.nar_target_outcome);
    if (lose) {
      mask.set(r, ocol, true);
      mask.set(r, tcol, true);
      out.at(r, ocol) = 0.0;
      out.at(r, tcol) = 0.0;
    }
  }
  return {std::move(out), std::move(mask)};
}

double achieved_fraction(const MaskMatrix& mask) {
  if (mask.n_rows == 0) return 0.0;
  std::size_t lost = 0;
  for (std::size_t r = 0; r < mask.n_rows; ++r) {
    for (std::size_t c = 0; c < mask.n_cols; ++c) {
      if (mask.at(r, c)) {
        ++lost;
        break;
      }
    }
  }
  return static_cast<double>(lost) / static_cast<double>(mask.n_rows);
}

}  // namespace ltfu
