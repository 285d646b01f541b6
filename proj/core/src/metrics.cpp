#include "ltfu/metrics.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ltfu/csv.hpp"
#include "ltfu/stats.hpp"

namespace ltfu {

ConfusionCounts score_outcome(const Dataset& imputed, const Dataset& truth,
                              const MaskMatrix& mask) {
  require_aligned(truth, mask);
  if (imputed.n_rows != truth.n_rows || imputed.n_cols != truth.n_cols)
    throw std::invalid_argument("score_outcome: dataset shapes differ");
  const std::size_t ocol = outcome_index(truth.schema);

  ConfusionCounts c;
  for (std::size_t r = 0; r < truth.n_rows; ++r) {
    if (!mask.at(r, ocol)) continue;
    const double pred = imputed.at(r, ocol);
    const double actual = truth.at(r, ocol);
    if (pred != 0.0 && pred != 1.0)
      throw std::invalid_argument("score_outcome: non-binary imputed outcome at row " +
                                  std::to_string(r));
    if (actual == 1.0)
      pred == 1.0 ? ++c.tp : ++c.fn;
    else
      pred == 0.0 ? ++c.tn : ++c.fp;
  }
  return c;
}

double rmse_time(const Dataset& imputed, const Dataset& truth, const MaskMatrix& mask) {
  require_aligned(truth, mask);
  if (imputed.n_rows != truth.n_rows || imputed.n_cols != truth.n_cols)
    throw std::invalid_argument("rmse_time: dataset shapes differ");
  const std::size_t tcol = time_index(truth.schema);

  double sse = 0.0;
  std::size_t n = 0;
  for (std::size_t r = 0; r < truth.n_rows; ++r) {
    if (!mask.at(r, tcol)) continue;
    const double d = imputed.at(r, tcol) - truth.at(r, tcol);
    sse += d * d;
    ++n;
  }
  if (n == 0) throw std::invalid_argument("rmse_time: no masked time cells to score");
  return std::sqrt(sse / static_cast<double>(n));
}

std::pair<double, double> accuracy_ci(const ConfusionCounts& counts, double level) {
  const std::size_t n = counts.total();
  if (n == 0) throw std::invalid_argument("accuracy_ci: no scored cells");
  if (!(level > 0.0 && level < 1.0) && level != 0.0)
    throw std::invalid_argument("accuracy_ci: level must be in [0, 1)");
  const double p = static_cast<double>(counts.tp + counts.tn) / static_cast<double>(n);
  const double z = level == 0.0 ? 0.0 : normal_quantile(0.5 + level / 2.0);
  const double nn = static_cast<double>(n);
  const double denom = 1.0 + z * z / nn;
  const double center = (p + z * z / (2.0 * nn)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
  double lo = center - half, hi = center + half;
  if (lo < 0.0) lo = 0.0;
  if (hi > 1.0) hi = 1.0;
  return {lo, hi};
}

ScoreReport make_score_report(const ConfusionCounts& counts, double rmse, double level) {
  ScoreReport r;
  r.n_scored = counts.total();
  r.accuracy = r.n_scored == 0
                   ? 0.0
                   : static_cast<double>(counts.tp + counts.tn) / static_cast<double>(r.n_scored);
  if (r.n_scored > 0) {
    const auto ci = accuracy_ci(counts, level);
    r.acc_lo = ci.first;
    r.acc_hi = ci.second;
  }
  if (counts.tp + counts.fn > 0)
    r.sensitivity = static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
  if (counts.tn + counts.fp > 0)
    r.specificity = static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
  r.rmse = rmse;
  return r;
}

namespace {
std::string pct1(double x) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(1);
  os << x * 100.0;
  return os.str();
}
}  // namespace

std::string format_accuracy(const ScoreReport& report) {
  return pct1(report.accuracy) + "(" + pct1(report.acc_lo) + "," + pct1(report.acc_hi) + ")";
}

std::string ScoreRow::csv_header() {
  return "method,dataset,mechanism,proportion,accuracy,acc_lo,acc_hi,rmse,"
         "sensitivity,specificity,n_scored,seed";
}

std::string ScoreRow::to_csv() const {
  std::ostringstream os;
  os << method << ',' << dataset << ',' << mechanism << ',' << format_double(proportion)
     << ',' << format_double(report.accuracy) << ',' << format_double(report.acc_lo) << ','
     << format_double(report.acc_hi) << ',' << format_double(report.rmse) << ','
     << (report.sensitivity ? format_double(*report.sensitivity) : "NA") << ','
     << (report.specificity ? format_double(*report.specificity) : "NA") << ','
     << report.n_scored << ',' << seed;
  return os.str();
}

std::string ScoreRow::to_json() const {
  nlohmann::json j = {
      {"method", method},
      {"dataset", dataset},
      {"mechanism", mechanism},
      {"proportion", proportion},
      {"accuracy", report.accuracy},
      {"acc_lo", report.acc_lo},
      {"acc_hi", report.acc_hi},
      {"rmse", report.rmse},
      {"sensitivity", report.sensitivity ? nlohmann::json(*report.sensitivity)
                                         : nlohmann::json(nullptr)},
      {"specificity", report.specificity ? nlohmann::json(*report.specificity)
                                         : nlohmann::json(nullptr)},
      {"n_scored", report.n_scored},
      {"seed", seed},
  };
  return j.dump();
}

}  // namespace ltfu
