#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "ltfu/dataset.hpp"

namespace ltfu {

struct ConfusionCounts {
  std::size_t tp = 0, tn = 0, fp = 0, fn = 0;
  std::size_t total() const { return tp + tn + fp + fn; }
};

/// Scores over masked cells only. Rates with an empty denominator are
/// reported as absent, never as 0.
struct ScoreReport {
  double accuracy = 0.0;
  double acc_lo = 0.0;
  double acc_hi = 0.0;
  double rmse = 0.0;
  std::optional<double> sensitivity;
  std::optional<double> specificity;
  std::size_t n_scored = 0;
};

/// Tallies imputed vs true outcomes over masked outcome cells; positive
/// class is 1. Throws when an imputed outcome cell is not in {0, 1}.
ConfusionCounts score_outcome(const Dataset& imputed, const Dataset& truth,
                              const MaskMatrix& mask);

/// Root mean squared error over masked time-to-outcome cells. Throws when
/// no cell is scored.
double rmse_time(const Dataset& imputed, const Dataset& truth, const MaskMatrix& mask);

/// Wilson score interval for the accuracy proportion.
std::pair<double, double> accuracy_ci(const ConfusionCounts& counts, double level = 0.95);

ScoreReport make_score_report(const ConfusionCounts& counts, double rmse,
                              double level = 0.95);

/// "94.7(93.5,95.8)" — accuracy and CI in percent, one decimal.
std::string format_accuracy(const ScoreReport& report);

/// One labeled result line; serializes with a fixed column set.
struct ScoreRow {
  std::string method;     // DAE | MICE | None
  std::string dataset;
  std::string mechanism;  // CAR | NAR
  double proportion = 0.0;
  std::uint64_t seed = 0;
  ScoreReport report;

  static std::string csv_header();
  std::string to_csv() const;
  std::string to_json() const;
};

}  // namespace ltfu
