#include "ltfu/simulate.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace ltfu {

std::vector<double> pattern_weights(HazardPattern pattern,
                                    const std::array<std::size_t, 2>& group_sizes,
                                    double weight) {
  std::vector<double> w(group_sizes[0] + group_sizes[1], 0.0);
  if (pattern == HazardPattern::all_in_group) {
    for (std::size_t i = 0; i < group_sizes[0]; ++i) w[i] = weight;
  } else {
    if (group_sizes[0] > 0) w[0] = weight;
    if (group_sizes[1] > 0) w[group_sizes[0]] = weight;
  }
  return w;
}

Tensor2 equicorrelation_block(std::size_t size, double corr) {
  Tensor2 b(size, size, corr);
  for (std::size_t i = 0; i < size; ++i) b.at(i, i) = 1.0;
  return b;
}

Tensor2 sample_mvnormal(std::size_t n, const std::vector<Tensor2>& covariance_blocks,
                        RngStream& rng) {
  std::size_t d = 0;
  std::vector<Eigen::MatrixXd> chol;
  chol.reserve(covariance_blocks.size());
  for (const auto& blk : covariance_blocks) {
    if (blk.rows != blk.cols)
      throw std::invalid_argument("sample_mvnormal: covariance block not square");
    Eigen::MatrixXd m(blk.rows, blk.cols);
    for (std::size_t i = 0; i < blk.rows; ++i)
      for (std::size_t j = 0; j < blk.cols; ++j) m(i, j) = blk.at(i, j);
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success)
      throw std::invalid_argument("sample_mvnormal: covariance block not positive definite");
    chol.push_back(llt.matrixL());
    d += blk.rows;
  }

  Tensor2 out(n, d);
  std::vector<double> z;
  for (std::size_t r = 0; r < n; ++r) {
    std::size_t at = 0;
    for (const auto& L : chol) {
      const auto k = static_cast<std::size_t>(L.rows());
      z.resize(k);
      for (std::size_t i = 0; i < k; ++i) z[i] = rng.normal();
      for (std::size_t i = 0; i < k; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += L(i, j) * z[j];
        out.at(r, at + i) = s;
      }
      at += k;
    }
  }
  return out;
}

namespace {

// Mean event probability sum(rate / (rate + mu)) / n is decreasing in mu;
// bisect for the mu that hits the target event fraction.
double calibrate_censoring_rate(const std::vector<double>& rates, double target_event_fraction) {
  if (target_event_fraction >= 1.0) return 0.0;
  auto mean_event = [&](double mu) {
    double s = 0.0;
    for (double r : rates) s += r / (r + mu);
    return s / static_cast<double>(rates.size());
  };
  double lo = 0.0, hi = 1.0;
  while (mean_event(hi) > target_event_fraction) {
    hi *= 2.0;
    if (hi > 1e300) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mean_event(mid) > target_event_fraction)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

void validate_common(double censor_fraction, double baseline_rate) {
  if (!(censor_fraction > 0.0 && censor_fraction < 1.0))
    throw std::invalid_argument("simulate: censor_fraction must be in (0, 1)");
  if (!(baseline_rate > 0.0))
    throw std::invalid_argument("simulate: baseline_rate must be positive");
}

Schema single_schema(std::size_t n_features) {
  Schema s;
  for (std::size_t i = 0; i < n_features; ++i)
    s.push_back({"f" + std::to_string(i + 1), ColumnKind::continuous, ColumnRole::feature, 0});
  s.push_back({"time", ColumnKind::continuous, ColumnRole::time_to_outcome, 0});
  s.push_back({"outcome", ColumnKind::binary, ColumnRole::outcome, 0});
  return s;
}

}  // namespace

Dataset simulate_single(const SingleSimConfig& cfg) {
  validate_common(cfg.censor_fraction, cfg.baseline_rate);
  if (cfg.group_sizes[0] + cfg.group_sizes[1] != cfg.n_features)
    throw std::invalid_argument("simulate_single: group sizes must sum to n_features");
  for (double c : cfg.within_group_corr)
    if (!(c >= 0.0 && c < 1.0))
      throw std::invalid_argument("simulate_single: within_group_corr must be in [0, 1)");
  std::vector<double> weights = cfg.hazard_weights.empty()
                                    ? pattern_weights(cfg.hazard_pattern, cfg.group_sizes, 0.5)
                                    : cfg.hazard_weights;
  if (weights.size() != cfg.n_features)
    throw std::invalid_argument("simulate_single: hazard_weights length must equal n_features");

  RngStream root(cfg.seed);
  auto rng_x = root.substream("features");
  auto rng_t = root.substream("time");
  auto rng_o = root.substream("outcome");

  std::vector<Tensor2> blocks;
  for (int g = 0; g < 2; ++g)
    if (cfg.group_sizes[g] > 0)
      blocks.push_back(equicorrelation_block(cfg.group_sizes[g], cfg.within_group_corr[g]));
  const Tensor2 x = sample_mvnormal(cfg.n_rows, blocks, rng_x);

  std::vector<double> rate(cfg.n_rows);
  for (std::size_t r = 0; r < cfg.n_rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cfg.n_features; ++c) s += weights[c] * x.at(r, c);
    rate[r] = cfg.baseline_rate * std::exp(s);
  }

  const double event_target = 1.0 - cfg.censor_fraction;
  const double mu = cfg.coupling == OutcomeCoupling::censoring_race
                        ? calibrate_censoring_rate(rate, event_target)
                        : 0.0;

  Dataset ds(single_schema(cfg.n_features), cfg.n_rows);
  const std::size_t tcol = cfg.n_features;
  const std::size_t ocol = cfg.n_features + 1;
  for (std::size_t r = 0; r < cfg.n_rows; ++r) {
    for (std::size_t c = 0; c < cfg.n_features; ++c) ds.at(r, c) = x.at(r, c);
    if (cfg.coupling == OutcomeCoupling::censoring_race) {
      ds.at(r, tcol) = rng_t.exponential(rate[r] + mu);
      ds.at(r, ocol) = rng_o.bernoulli(rate[r] / (rate[r] + mu)) ? 1.0 : 0.0;
    } else {
      ds.at(r, tcol) = rng_t.exponential(rate[r]);
      ds.at(r, ocol) = rng_o.bernoulli(event_target) ? 1.0 : 0.0;
    }
  }
  return ds;
}

Dataset simulate_multiple(const MultiSimConfig& cfg) {
  validate_common(cfg.censor_fraction, cfg.baseline_rate);
  if (cfg.visits_min < 1 || cfg.visits_max < cfg.visits_min)
    throw std::invalid_argument("simulate_multiple: invalid visit range");
  if (!(cfg.frailty_variance >= 0.0))
    throw std::invalid_argument("simulate_multiple: frailty_variance must be >= 0");
  std::vector<double> weights = cfg.hazard_weights;
  if (weights.empty()) {
    weights.assign(cfg.n_features, 0.0);
    for (std::size_t i = 0; i < std::min<std::size_t>(3, cfg.n_features); ++i) weights[i] = 0.5;
  }
  if (weights.size() != cfg.n_features)
    throw std::invalid_argument("simulate_multiple: hazard_weights length must equal n_features");

  RngStream root(cfg.seed);
  auto rng_z = root.substream("frailty");
  auto rng_v = root.substream("visits");
  auto rng_x = root.substream("features");
  auto rng_t = root.substream("time");
  auto rng_o = root.substream("outcome");

  // First pass realizes patients, features and per-row hazards; censoring is
  // calibrated over the realized hazards before times and outcomes are drawn.
  std::vector<double> patient_id, rate, features;
  for (std::size_t p = 0; p < cfg.n_patients; ++p) {
    const double z = cfg.frailty_variance == 0.0
                         ? 1.0
                         : rng_z.gamma(1.0 / cfg.frailty_variance, cfg.frailty_variance);
    long visits;
    do {
      visits = rng_v.poisson(cfg.visit_mean);
    } while (visits < cfg.visits_min || visits > cfg.visits_max);
    for (long v = 0; v < visits; ++v) {
      double s = 0.0;
      for (std::size_t c = 0; c < cfg.n_features; ++c) {
        const double xc = rng_x.normal();
        features.push_back(xc);
        s += weights[c] * xc;
      }
      patient_id.push_back(static_cast<double>(p + 1));
      rate.push_back(cfg.baseline_rate * z * std::exp(s));
    }
  }

  const std::size_t n_rows = patient_id.size();
  const double event_target = 1.0 - cfg.censor_fraction;
  const double mu = cfg.coupling == OutcomeCoupling::censoring_race
                        ? calibrate_censoring_rate(rate, event_target)
                        : 0.0;

  Schema schema;
  schema.push_back({"id", ColumnKind::continuous, ColumnRole::patient_id, 0});
  for (std::size_t i = 0; i < cfg.n_features; ++i)
    schema.push_back({"f" + std::to_string(i + 1), ColumnKind::continuous, ColumnRole::feature, 0});
  schema.push_back({"time", ColumnKind::continuous, ColumnRole::time_to_outcome, 0});
  schema.push_back({"outcome", ColumnKind::binary, ColumnRole::outcome, 0});

  Dataset ds(schema, n_rows);
  const std::size_t tcol = cfg.n_features + 1;
  const std::size_t ocol = cfg.n_features + 2;
  for (std::size_t r = 0; r < n_rows; ++r) {
    ds.at(r, 0) = patient_id[r];
    for (std::size_t c = 0; c < cfg.n_features; ++c)
      ds.at(r, c + 1) = features[r * cfg.n_features + c];
    // Inverse-CDF draw through the patient-specific cumulative hazard; for a
    // constant rate this is -log(U)/rate.
    if (cfg.coupling == OutcomeCoupling::censoring_race) {
      ds.at(r, tcol) = rng_t.exponential(rate[r] + mu);
      ds.at(r, ocol) = rng_o.bernoulli(rate[r] / (rate[r] + mu)) ? 1.0 : 0.0;
    } else {
      ds.at(r, tcol) = rng_t.exponential(rate[r]);
      ds.at(r, ocol) = rng_o.bernoulli(event_target) ? 1.0 : 0.0;
    }
  }
  return ds;
}

namespace {

struct SinglePreset {
  std::size_t n_features;
  std::array<std::size_t, 2> groups;
  std::array<double, 2> corr;
  HazardPattern pattern;
  double weight;
};

// Association strengths spread from none (s4) to strong (s2, s5); total
// column counts, with time and outcome, are 35/40/30/50/45.
SinglePreset single_preset_params(const std::string& name) {
  if (name == "s1") return {33, {17, 16}, {0.1, 0.1}, HazardPattern::one_in_group, 1.0};
  if (name == "s2") return {38, {19, 19}, {0.0, 0.3}, HazardPattern::all_in_group, 0.5};
  if (name == "s3") return {28, {14, 14}, {0.2, 0.2}, HazardPattern::one_in_group, 0.5};
  if (name == "s4") return {48, {24, 24}, {0.3, 0.3}, HazardPattern::all_in_group, 0.0};
  if (name == "s5") return {43, {22, 21}, {0.0, 0.2}, HazardPattern::all_in_group, 0.5};
  throw std::invalid_argument("unknown single-outcome preset '" + name + "'");
}

struct MultiPreset {
  std::size_t n_patients;
  double frailty_variance;
  std::size_t n_weighted;
  double weight;
};

MultiPreset multi_preset_params(const std::string& name) {
  if (name == "m1") return {5000, 0.50, 3, 0.5};
  if (name == "m2") return {3400, 0.75, 2, 0.5};
  if (name == "m3") return {7800, 0.25, 4, 0.5};
  if (name == "m4") return {5900, 0.50, 2, 1.0};
  if (name == "m5") return {4950, 1.00, 3, 0.5};
  throw std::invalid_argument("unknown multiple-outcome preset '" + name + "'");
}

}  // namespace

bool is_single_preset(const std::string& name) {
  return name.size() == 2 && name[0] == 's' && name[1] >= '1' && name[1] <= '5';
}

bool is_multiple_preset(const std::string& name) {
  return name.size() == 2 && name[0] == 'm' && name[1] >= '1' && name[1] <= '5';
}

SingleSimConfig preset_single(const std::string& name) {
  const SinglePreset p = single_preset_params(name);
  SingleSimConfig cfg;
  cfg.n_rows = 25000;
  cfg.n_features = p.n_features;
  cfg.group_sizes = p.groups;
  cfg.within_group_corr = p.corr;
  cfg.hazard_pattern = p.pattern;
  cfg.hazard_weights = pattern_weights(p.pattern, p.groups, p.weight);
  cfg.baseline_rate = 1.0;
  cfg.censor_fraction = 0.35;
  cfg.coupling = OutcomeCoupling::censoring_race;
  return cfg;
}

MultiSimConfig preset_multiple(const std::string& name) {
  const MultiPreset p = multi_preset_params(name);
  MultiSimConfig cfg;
  cfg.n_patients = p.n_patients;
  cfg.n_features = 23;
  cfg.frailty_variance = p.frailty_variance;
  cfg.hazard_weights.assign(cfg.n_features, 0.0);
  for (std::size_t i = 0; i < p.n_weighted; ++i) cfg.hazard_weights[i] = p.weight;
  cfg.baseline_rate = 1.0;
  cfg.censor_fraction = 0.35;
  cfg.coupling = OutcomeCoupling::censoring_race;
  return cfg;
}

Dataset simulate_preset(const std::string& name, std::size_t size_override,
                        std::uint64_t seed) {
  if (is_single_preset(name)) {
    SingleSimConfig cfg = preset_single(name);
    if (size_override > 0) cfg.n_rows = size_override;
    cfg.seed = seed;
    return simulate_single(cfg);
  }
  if (is_multiple_preset(name)) {
    MultiSimConfig cfg = preset_multiple(name);
    if (size_override > 0) cfg.n_patients = size_override;
    cfg.seed = seed;
    return simulate_multiple(cfg);
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace ltfu
