#pragma once

namespace ltfu {

/// Standard normal CDF.
double normal_cdf(double x);

/// Standard normal quantile; p in (0, 1). Acklam's rational approximation
/// refined with one Halley step, accurate to ~1e-15.
double normal_quantile(double p);

}  // namespace ltfu
