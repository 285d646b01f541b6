#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ltfu/dataset.hpp"
#include "ltfu/rng.hpp"
#include "ltfu/tensor.hpp"

namespace ltfu {

/// Within a feature group, either every feature carries hazard weight or
/// exactly one does.
enum class HazardPattern { all_in_group, one_in_group };

/// How the binary outcome relates to the rest of a simulated row.
///   independent:     outcome ~ Bernoulli(1 - censor_fraction), unrelated to
///                    features and time.
///   censoring_race:  event time Exp(rate) races an independent censoring
///                    time Exp(mu); outcome = event first, recorded time =
///                    the minimum. mu is calibrated so the realized event
///                    fraction is 1 - censor_fraction. Outcome then depends
///                    on the covariates through the hazard, which is what
///                    makes it recoverable by an imputer.
enum class OutcomeCoupling { independent, censoring_race };

/// One record per patient: correlated Gaussian features in two groups, a
/// proportional-hazards exponential time, and a binary outcome.
struct SingleSimConfig {
  std::size_t n_rows = 25000;
  std::size_t n_features = 33;
  std::array<std::size_t, 2> group_sizes{17, 16};
  std::array<double, 2> within_group_corr{0.1, 0.1};
  std::vector<double> hazard_weights;  // length n_features; empty = derive from pattern
  HazardPattern hazard_pattern = HazardPattern::one_in_group;
  double baseline_rate = 1.0;
  double censor_fraction = 0.35;
  OutcomeCoupling coupling = OutcomeCoupling::independent;
  std::uint64_t seed = 0;
};

/// Repeated visits per patient with a shared gamma frailty multiplying the
/// hazard. Column layout: patient id, features, time, outcome.
struct MultiSimConfig {
  std::size_t n_patients = 5000;
  std::size_t n_features = 23;
  int visits_min = 3;
  int visits_max = 8;
  double visit_mean = 5.0;  // Poisson rate, rejected outside [visits_min, visits_max]
  double frailty_variance = 0.5;  // gamma frailty with mean 1; 0 disables frailty
  std::vector<double> hazard_weights;
  double baseline_rate = 1.0;
  double censor_fraction = 0.35;
  OutcomeCoupling coupling = OutcomeCoupling::independent;
  std::uint64_t seed = 0;
};

/// Hazard weight vector implied by a group pattern: weight on every feature
/// of a group (all_in_group) or on the first feature of each group.
std::vector<double> pattern_weights(HazardPattern pattern,
                                    const std::array<std::size_t, 2>& group_sizes,
                                    double weight);

/// n i.i.d. zero-mean Gaussian rows with block-diagonal covariance, one
/// Cholesky factor per block. Throws if a block is not positive definite.
Tensor2 sample_mvnormal(std::size_t n, const std::vector<Tensor2>& covariance_blocks,
                        RngStream& rng);

/// Equicorrelated SPD block: unit diagonal, `corr` off-diagonal.
Tensor2 equicorrelation_block(std::size_t size, double corr);

Dataset simulate_single(const SingleSimConfig& cfg);
Dataset simulate_multiple(const MultiSimConfig& cfg);

/// Named presets s1..s5 (single outcome) and m1..m5 (multiple outcomes)
/// with association strengths spread from none to strong. Presets use
/// censoring_race coupling. size_override scales n_rows (s*) or
/// n_patients (m*); 0 keeps the preset's full size.
bool is_single_preset(const std::string& name);
bool is_multiple_preset(const std::string& name);
SingleSimConfig preset_single(const std::string& name);
MultiSimConfig preset_multiple(const std::string& name);
Dataset simulate_preset(const std::string& name, std::size_t size_override,
                        std::uint64_t seed);

}  // namespace ltfu
