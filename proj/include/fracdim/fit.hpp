#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fracdim {

/// Least-squares line y = slope * x + intercept on log-log data.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double window_min = 0.0;  ///< smallest abscissa used (untransformed)
  double window_max = 0.0;
  double stderr_slope = 0.0;
  std::size_t points = 0;
};

/// An indexed series with consecutive ratios values[i+1] / values[i].
struct ScalingSeries {
  std::vector<double> index;
  std::vector<double> values;
  std::vector<double> ratios;
};

ScalingSeries make_series(std::vector<double> index, std::vector<double> values);

/// Ordinary least squares of y on x. Needs at least two distinct abscissae.
ExponentFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Fits ln y against ln x; inputs must be positive.
ExponentFit log_log_fit(std::span<const double> x, std::span<const double> y);

/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

/// Geometric mean of the ratios at indices [first, ratios.size()).
double geometric_mean_ratio(const ScalingSeries& series, std::size_t first = 0);

}  // namespace fracdim
