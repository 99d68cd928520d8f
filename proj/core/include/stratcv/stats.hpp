#pragma once

#include <span>

namespace stratcv {

double mean(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> xs);

/// Sample Pearson correlation. Throws InvalidArgument for mismatched or
/// too-short inputs and UndefinedCorrelation when either input is constant.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Least-squares slope of ys against 0, 1, 2, ...
double ols_slope(std::span<const double> ys);

}  // namespace stratcv
