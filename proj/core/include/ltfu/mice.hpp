#pragma once

#include <cstdint>
#include <vector>

#include "ltfu/dataset.hpp"
#include "ltfu/rng.hpp"
#include "ltfu/tensor.hpp"

namespace ltfu {

struct MiceConfig {
  int n_cycles = 5;
  int k_donors = 5;
  double ridge = 1e-6;
  std::uint64_t seed = 0;
};

MiceConfig mice_config_from_json_string(const std::string& text);

/// Ridge-regularized least squares with an intercept column appended
/// internally; returns [intercept, coefficients...]. The ridge term keeps
/// collinear designs solvable.
std::vector<double> ols_fit(const Tensor2& x, const std::vector<double>& y, double ridge);

/// Predictive mean matching: regress observed targets on their predictors,
/// then for each missing row copy the observed value of one of the k donors
/// whose predicted mean is nearest (ties to the lower row index; the donor
/// among the k is drawn uniformly).
std::vector<double> pmm_impute_column(const std::vector<double>& y_obs, const Tensor2& x_obs,
                                      const Tensor2& x_mis, int k, double ridge,
                                      RngStream& rng);

/// Chained equations over columns with missing cells, schema order,
/// mean/mode initialization, PMM per column. Observed cells never change and
/// every imputed value is a member of its column's observed multiset.
Dataset mice_impute(const Dataset& data, const MaskMatrix& mask, const MiceConfig& cfg);

}  // namespace ltfu
