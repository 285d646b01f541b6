#include "ltfu/survival.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "ltfu/csv.hpp"
#include "ltfu/stats.hpp"

namespace ltfu {

SurvivalCurve kaplan_meier(const std::vector<double>& times, const std::vector<int>& events) {
  if (times.empty()) throw std::invalid_argument("kaplan_meier: empty input");
  if (times.size() != events.size())
    throw std::invalid_argument("kaplan_meier: times/events length mismatch");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw std::invalid_argument("kaplan_meier: times must be positive");
    if (events[i] != 0 && events[i] != 1)
      throw std::invalid_argument("kaplan_meier: event indicators must be 0 or 1");
  }

  std::vector<std::size_t> order(times.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return times[a] < times[b]; });

  SurvivalCurve curve;
  double s = 1.0;
  double var_acc = 0.0;
  std::size_t at_risk = times.size();
  std::size_t i = 0;
  while (i < order.size()) {
    const double t = times[order[i]];
    std::size_t d = 0, c = 0;
    std::size_t j = i;
    while (j < order.size() && times[order[j]] == t) {
      events[order[j]] == 1 ? ++d : ++c;
      ++j;
    }
    if (d > 0) {
      s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
      var_acc += static_cast<double>(d) /
                 (static_cast<double>(at_risk) * static_cast<double>(at_risk - d));
      curve.event_times.push_back(t);
      curve.survival.push_back(s);
      curve.at_risk.push_back(at_risk);
      curve.events.push_back(d);
      curve.greenwood_var.push_back(var_acc);
    }
    at_risk -= d + c;
    i = j;
  }
  return curve;
}

ConfidenceBand km_confidence_band(const SurvivalCurve& curve, double level) {
  if (!(level >= 0.0 && level < 1.0))
    throw std::invalid_argument("km_confidence_band: level must be in [0, 1)");
  const double z = level == 0.0 ? 0.0 : normal_quantile(0.5 + level / 2.0);

  ConfidenceBand band;
  band.lo.resize(curve.survival.size());
  band.hi.resize(curve.survival.size());
  for (std::size_t i = 0; i < curve.survival.size(); ++i) {
    const double s = curve.survival[i];
    if (s <= 0.0 || s >= 1.0 || z == 0.0) {
      band.lo[i] = s;
      band.hi[i] = s;
      continue;
    }
    // se of log(-log S) by the delta method over the Greenwood variance.
    const double se = std::sqrt(curve.greenwood_var[i]) / std::fabs(std::log(s));
    double lo = std::pow(s, std::exp(z * se));
    double hi = std::pow(s, std::exp(-z * se));
    band.lo[i] = std::clamp(lo, 0.0, 1.0);
    band.hi[i] = std::clamp(hi, 0.0, 1.0);
  }
  return band;
}

namespace {
std::optional<double> first_crossing(const std::vector<double>& times,
                                     const std::vector<double>& values, double level) {
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] <= level) return times[i];
  return std::nullopt;
}
}  // namespace

MedianEstimate median_survival(const SurvivalCurve& curve, const ConfidenceBand& band) {
  if (band.lo.size() != curve.survival.size() || band.hi.size() != curve.survival.size())
    throw std::invalid_argument("median_survival: band does not match curve");
  MedianEstimate est;
  est.median = first_crossing(curve.event_times, curve.survival, 0.5);
  est.lo = first_crossing(curve.event_times, band.lo, 0.5);
  est.hi = first_crossing(curve.event_times, band.hi, 0.5);
  return est;
}

void write_curve_csv(const SurvivalCurve& curve, const ConfidenceBand& band,
                     const std::string& path) {
  if (band.lo.size() != curve.survival.size())
    throw std::invalid_argument("write_curve_csv: band does not match curve");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_curve_csv: cannot open '" + path + "'");
  out << "time,at_risk,events,survival,lo,hi\n";
  for (std::size_t i = 0; i < curve.event_times.size(); ++i) {
    out << format_double(curve.event_times[i]) << ',' << curve.at_risk[i] << ','
        << curve.events[i] << ',' << format_double(curve.survival[i]) << ','
        << format_double(band.lo[i]) << ',' << format_double(band.hi[i]) << '\n';
  }
  if (!out) throw std::runtime_error("write_curve_csv: write failed for '" + path + "'");
}

}  // namespace ltfu
