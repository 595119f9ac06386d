#include "fracdim/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracdim/errors.hpp"

namespace fracdim {

ScalingSeries make_series(std::vector<double> index, std::vector<double> values) {
  if (index.size() != values.size()) throw InvalidArgument("series index/value size mismatch");
  ScalingSeries s;
  s.index = std::move(index);
  s.values = std::move(values);
  for (std::size_t i = 1; i < s.values.size(); ++i) s.ratios.push_back(s.values[i] / s.values[i - 1]);
  return s;
}

ExponentFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit input size mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw InvalidArgument("fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("fit needs two distinct abscissae");
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.points = n;
  fit.window_min = *std::min_element(x.begin(), x.end());
  fit.window_max = *std::max_element(x.begin(), x.end());
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = y[i] - fit.intercept - fit.slope * x[i];
      sse += r * r;
    }
    fit.stderr_slope = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
  }
  return fit;
}

ExponentFit log_log_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit input size mismatch");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  auto fit = linear_fit(lx, ly);
  fit.window_min = *std::min_element(x.begin(), x.end());
  fit.window_max = *std::max_element(x.begin(), x.end());
  return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return v[i] < v[j]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("spearman needs two equal series of length >= 2");
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double geometric_mean_ratio(const ScalingSeries& series, std::size_t first) {
  if (first >= series.ratios.size()) throw InvalidArgument("no ratios in the requested range");
  double acc = 0.0;
  for (std::size_t i = first; i < series.ratios.size(); ++i) acc += std::log(series.ratios[i]);
  return std::exp(acc / static_cast<double>(series.ratios.size() - first));
}

}  // namespace fracdim
