#include "ltfu/mice.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json_codec.hpp"

namespace ltfu {

MiceConfig mice_config_from_json_string(const std::string& text) {
  return codec::mice_config_from_json(nlohmann::json::parse(text));
}

std::vector<double> ols_fit(const Tensor2& x, const std::vector<double>& y, double ridge) {
  if (x.rows != y.size()) throw std::invalid_argument("ols_fit: row count mismatch");
  if (x.rows == 0) throw std::invalid_argument("ols_fit: empty design");
  const std::size_t n = x.rows, p = x.cols + 1;

  Eigen::MatrixXd design(n, p);
  Eigen::VectorXd target(n);
  for (std::size_t r = 0; r < n; ++r) {
    design(r, 0) = 1.0;
    for (std::size_t c = 0; c < x.cols; ++c) design(r, c + 1) = x.at(r, c);
    target(r) = y[r];
  }

  Eigen::MatrixXd gram = design.transpose() * design;
  gram.diagonal().array() += ridge;
  const Eigen::VectorXd beta = gram.ldlt().solve(design.transpose() * target);

  std::vector<double> out(p);
  for (std::size_t i = 0; i < p; ++i) out[i] = beta(static_cast<Eigen::Index>(i));
  return out;
}

namespace {

std::vector<double> predict(const Tensor2& x, const std::vector<double>& beta) {
  std::vector<double> out(x.rows);
  for (std::size_t r = 0; r < x.rows; ++r) {
    double s = beta[0];
    for (std::size_t c = 0; c < x.cols; ++c) s += beta[c + 1] * x.at(r, c);
    out[r] = s;
  }
  return out;
}

}  // namespace

std::vector<double> pmm_impute_column(const std::vector<double>& y_obs, const Tensor2& x_obs,
                                      const Tensor2& x_mis, int k, double ridge,
                                      RngStream& rng) {
  if (k < 1) throw std::invalid_argument("pmm: k must be >= 1");
  if (y_obs.size() != x_obs.rows) throw std::invalid_argument("pmm: observed sizes differ");
  if (static_cast<std::size_t>(k) > y_obs.size())
    throw std::invalid_argument("pmm: k exceeds the number of observed donors");

  const auto beta = ols_fit(x_obs, y_obs, ridge);
  const auto pred_obs = predict(x_obs, beta);
  const auto pred_mis = predict(x_mis, beta);

  std::vector<std::size_t> order(pred_obs.size());
  std::vector<double> out(x_mis.rows);
  for (std::size_t m = 0; m < x_mis.rows; ++m) {
    std::iota(order.begin(), order.end(), 0);
    const double target = pred_mis[m];
    // k nearest predicted means; distance ties break toward lower row index.
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](std::size_t a, std::size_t b) {
                        const double da = std::fabs(pred_obs[a] - target);
                        const double db = std::fabs(pred_obs[b] - target);
                        if (da != db) return da < db;
                        return a < b;
                      });
    const std::size_t pick = static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(k)));
    out[m] = y_obs[order[pick]];
  }
  return out;
}

Dataset mice_impute(const Dataset& data, const MaskMatrix& mask, const MiceConfig& cfg) {
  require_aligned(data, mask);
  if (cfg.n_cycles < 1) throw std::invalid_argument("mice: n_cycles must be >= 1");
  if (cfg.k_donors < 1) throw std::invalid_argument("mice: k_donors must be >= 1");

  const std::size_t n = data.n_rows, d = data.n_cols;
  std::vector<std::vector<std::size_t>> missing_rows(d);
  for (std::size_t c = 0; c < d; ++c)
    for (std::size_t r = 0; r < n; ++r)
      if (mask.at(r, c)) missing_rows[c].push_back(r);

  Dataset work = data;
  bool any_missing = false;
  bool any_complete_column = false;
  for (std::size_t c = 0; c < d; ++c) {
    if (missing_rows[c].empty()) {
      any_complete_column = true;
      continue;
    }
    any_missing = true;
    const std::size_t observed = n - missing_rows[c].size();
    if (observed == 0)
      throw std::invalid_argument("mice: column '" + data.schema[c].name + "' is all missing");
    if (observed < static_cast<std::size_t>(cfg.k_donors))
      throw std::invalid_argument("mice: column '" + data.schema[c].name +
                                  "' has fewer observed cells than k_donors");

    // Placeholder start: mean for continuous, mode for binary/categorical
    // (ties toward the lower value).
    double fill;
    if (data.schema[c].kind == ColumnKind::continuous) {
      double sum = 0.0;
      for (std::size_t r = 0; r < n; ++r)
        if (!mask.at(r, c)) sum += data.at(r, c);
      fill = sum / static_cast<double>(observed);
    } else {
      const std::size_t n_levels =
          data.schema[c].kind == ColumnKind::binary
              ? 2
              : static_cast<std::size_t>(data.schema[c].cardinality);
      std::vector<std::size_t> counts(n_levels, 0);
      for (std::size_t r = 0; r < n; ++r)
        if (!mask.at(r, c)) ++counts[static_cast<std::size_t>(data.at(r, c))];
      fill = static_cast<double>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
    }
    for (const std::size_t r : missing_rows[c]) work.at(r, c) = fill;
  }
  if (!any_missing) return work;
  if (!any_complete_column)
    throw std::invalid_argument("mice: needs at least one fully observed column");

  RngStream rng(cfg.seed);
  for (int cycle = 0; cycle < cfg.n_cycles; ++cycle) {
    for (std::size_t c = 0; c < d; ++c) {
      if (missing_rows[c].empty()) continue;
      const auto& mis = missing_rows[c];
      const std::size_t n_obs = n - mis.size();

      Tensor2 x_obs(n_obs, d - 1), x_mis(mis.size(), d - 1);
      std::vector<double> y_obs(n_obs);
      std::size_t io = 0, im = 0;
      for (std::size_t r = 0; r < n; ++r) {
        const bool is_missing = mask.at(r, c);
        Tensor2& dst = is_missing ? x_mis : x_obs;
        const std::size_t dst_row = is_missing ? im : io;
        std::size_t cc = 0;
        for (std::size_t j = 0; j < d; ++j) {
          if (j == c) continue;
          dst.at(dst_row, cc++) = work.at(r, j);
        }
        if (is_missing)
          ++im;
        else
          y_obs[io++] = data.at(r, c);
      }

      const auto filled =
          pmm_impute_column(y_obs, x_obs, x_mis, cfg.k_donors, cfg.ridge, rng);
      for (std::size_t i = 0; i < mis.size(); ++i) work.at(mis[i], c) = filled[i];
    }
  }
  return work;
}

}  // namespace ltfu
