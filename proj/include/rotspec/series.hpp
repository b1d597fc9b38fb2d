#pragma once

// Small helpers for sampled 1-d curves: extrema location, trapezoid weights,
// peak-normalised comparison. Used by the fringe/width analysis and by the
// reconstruction reports.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace rotspec {

// Indices of strict interior local maxima.
inline std::vector<std::size_t> local_maxima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] > y[i + 1]) out.push_back(i);
  return out;
}

// Indices of strict interior local minima.
inline std::vector<std::size_t> local_minima(std::span<const double> y) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < y.size(); ++i)
    if (y[i] < y[i - 1] && y[i] < y[i + 1]) out.push_back(i);
  return out;
}

// Deepest strict interior local minimum, if any.
inline std::optional<std::size_t> deepest_local_min(std::span<const double> y) {
  std::optional<std::size_t> best;
  for (std::size_t i : local_minima(y))
    if (!best || y[i] < y[*best]) best = i;
  return best;
}

// Nearest local maximum on each side of index i; a monotone run that hits the
// series edge yields the edge value.
inline std::pair<double, double> flanking_maxima(std::span<const double> y,
                                                 std::size_t i) {
  if (y.size() < 3 || i == 0 || i + 1 >= y.size())
    throw std::invalid_argument("flanking_maxima: index not interior");
  std::size_t l = i;
  while (l > 0 && !(l + 1 < y.size() && y[l] > y[l - 1] && y[l] > y[l + 1])) --l;
  std::size_t r = i;
  while (r + 1 < y.size() && !(r > 0 && y[r] > y[r - 1] && y[r] > y[r + 1])) ++r;
  return {y[l], y[r]};
}

// Trapezoid quadrature weights for an (optionally non-uniform) grid.
inline std::vector<double> trapezoid_weights(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) {
    if (n == 1) w[0] = 1.0;
    return w;
  }
  w[0] = 0.5 * (x[1] - x[0]);
  w[n - 1] = 0.5 * (x[n - 1] - x[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) w[i] = 0.5 * (x[i + 1] - x[i - 1]);
  return w;
}

// RMS difference of two curves after scaling each to unit peak. Comparisons of
// reconstructed intensities are made in this form because their overall scale
// is arbitrary.
inline double nrmse_peak_normalized(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("nrmse_peak_normalized: size mismatch");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma = std::max(ma, std::abs(a[i]));
    mb = std::max(mb, std::abs(b[i]));
  }
  if (ma == 0.0 || mb == 0.0)
    throw std::invalid_argument("nrmse_peak_normalized: zero curve");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] / ma - b[i] / mb;
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(a.size()));
}

}  // namespace rotspec
