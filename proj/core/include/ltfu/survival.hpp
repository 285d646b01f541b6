#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ltfu {

/// Product-limit estimate. Steps exist only at distinct event times;
/// censored observations shrink the risk set between steps.
struct SurvivalCurve {
  std::vector<double> event_times;    // strictly increasing
  std::vector<double> survival;       // S(t) at each step
  std::vector<std::size_t> at_risk;   // n_i just before each step
  std::vector<std::size_t> events;    // d_i at each step
  std::vector<double> greenwood_var;  // cumulative sum of d/(n(n-d))
};

/// event = 1 means the outcome was observed at that time, 0 censored.
/// Ties between events and censorings at one time count events against the
/// full risk set first.
SurvivalCurve kaplan_meier(const std::vector<double>& times,
                           const std::vector<int>& events);

struct ConfidenceBand {
  std::vector<double> lo;
  std::vector<double> hi;
};

/// Pointwise Greenwood band on the complementary log-log scale, clamped to
/// [0, 1]; degenerate where S is 0 or 1. level = 0 collapses to the curve.
ConfidenceBand km_confidence_band(const SurvivalCurve& curve, double level = 0.95);

struct MedianEstimate {
  std::optional<double> median;
  std::optional<double> lo;
  std::optional<double> hi;
};

/// Median = smallest event time with S <= 0.5; interval endpoints are the
/// smallest times where the lower/upper band reaches 0.5, absent when a
/// bound never crosses.
MedianEstimate median_survival(const SurvivalCurve& curve, const ConfidenceBand& band);

/// Plot-ready CSV: time, at_risk, events, survival, lo, hi.
void write_curve_csv(const SurvivalCurve& curve, const ConfidenceBand& band,
                     const std::string& path);

}  // namespace ltfu
