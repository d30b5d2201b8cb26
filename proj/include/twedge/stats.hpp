#pragma once

#include <span>

namespace twedge {

/// Type-7 (linear interpolation) quantile of ascending `sorted` at p in [0, 1].
double quantile_type7(std::span<const double> sorted, double p);

/// Fraction of ascending `sorted` values that are <= x.
double empirical_cdf(std::span<const double> sorted, double x);

}  // namespace twedge
