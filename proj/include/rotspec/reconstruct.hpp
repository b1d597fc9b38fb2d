#pragma once

// Time-spectrum reconstruction from excitation-function data.
//
// All three routes are finite-window discrete transforms with the analysis
// kernel e^{-iEt},
//
//   P(t) = dE sum_n e^{-i E_n t} g(E_n),
//
// where g is the full complex amplitude, the cross-section fluctuation
// sigma - <sigma>, or the detrended, direct-magnitude-normalised combination
// (sigma - sigma_tilde)/sqrt(sigma_d). The time resolution is 1/I for a window
// of length I, and the transform is meaningful only up to the alias bound
// pi/dE. Direct summation is used throughout: the windows here are a few
// hundred points, and arbitrary off-grid times are wanted.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ensemble.hpp"
#include "model.hpp"
#include "warning.hpp"

namespace rotspec {

enum class ReconstructionSource { from_amplitude, from_fluctuation, general };

inline const char* to_string(ReconstructionSource s) {
  switch (s) {
    case ReconstructionSource::from_amplitude: return "amplitude";
    case ReconstructionSource::from_fluctuation: return "fluctuation";
    case ReconstructionSource::general: return "general";
  }
  return "?";
}

struct TimeAmplitude {
  double theta = 0.0;
  TimeGrid times;
  std::vector<std::complex<double>> values;
  double resolution = 0.0;  // 1/I
  ReconstructionSource source = ReconstructionSource::from_amplitude;

  std::vector<double> power() const {
    std::vector<double> p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::norm(values[i]);
    return p;
  }
};

// P(t) = dE sum_n e^{-i E_n t} f_n, summed in ascending n. No domain
// restrictions; negative times are legitimate for causality diagnostics.
inline std::vector<std::complex<double>> dtft(std::span<const std::complex<double>> f,
                                              double e_min, double delta_e,
                                              std::span<const double> times) {
  std::vector<std::complex<double>> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t n = 0; n < f.size(); ++n)
      acc += std::polar(1.0, -(e_min + delta_e * static_cast<double>(n)) * t) * f[n];
    out[i] = delta_e * acc;
  }
  return out;
}

namespace detail {

// Error beyond the alias bound pi/dE, warning within the last 10% of it.
inline void check_alias(double t_abs_max, double delta_e, const char* who) {
  const double bound = kPi / delta_e;
  if (t_abs_max > bound * (1.0 + 1e-9))
    throw std::domain_error(std::string(who) +
                            ": requested time beyond the alias bound pi/dE = " +
                            std::to_string(bound));
  if (t_abs_max >= 0.9 * bound)
    warn(std::string(who) + ": requested times within 10% of the alias bound pi/dE");
}

}  // namespace detail

// Amplitude route: consumes the full complex f(E_n).
inline TimeAmplitude reconstruct_from_amplitude(const ExcitationFunction& xf,
                                                const TimeGrid& times) {
  xf.validate();
  times.validate();
  if (!xf.has_amplitude())
    throw std::invalid_argument("reconstruct_from_amplitude: no amplitude series");
  detail::check_alias(times.t.back(), xf.delta_e, "reconstruct_from_amplitude");
  TimeAmplitude out;
  out.theta = xf.theta;
  out.times = times;
  out.values = dtft(xf.amplitude, xf.e_min, xf.delta_e, times.t);
  out.resolution = 1.0 / xf.window();
  out.source = ReconstructionSource::from_amplitude;
  return out;
}

namespace detail {

inline TimeAmplitude transform_real_series(const ExcitationFunction& xf,
                                           std::span<const double> series,
                                           const TimeGrid& times,
                                           ReconstructionSource source) {
  std::vector<std::complex<double>> g(series.begin(), series.end());
  TimeAmplitude out;
  out.theta = xf.theta;
  out.times = times;
  out.values = dtft(g, xf.e_min, xf.delta_e, times.t);
  out.resolution = 1.0 / xf.window();
  out.source = source;
  return out;
}

}  // namespace detail

// Fluctuation route: transform of Delta sigma = sigma - <sigma>. Valid as an
// estimate of the delayed amplitude only for t > 0 and when direct processes
// dominate the cross section.
inline TimeAmplitude reconstruct_from_fluctuation(const ExcitationFunction& xf,
                                                  std::span<const double> mean_sigma,
                                                  const TimeGrid& times) {
  xf.validate();
  times.validate();
  if (mean_sigma.size() != xf.sigma.size())
    throw std::invalid_argument("reconstruct_from_fluctuation: mean series mismatch");
  if (!(times.t.front() > 0.0))
    throw std::domain_error("reconstruct_from_fluctuation: times must be > 0");
  detail::check_alias(times.t.back(), xf.delta_e, "reconstruct_from_fluctuation");
  std::vector<double> ds(xf.sigma.size());
  for (std::size_t n = 0; n < ds.size(); ++n) ds[n] = xf.sigma[n] - mean_sigma[n];
  return detail::transform_real_series(xf, ds, times,
                                       ReconstructionSource::from_fluctuation);
}

inline TimeAmplitude reconstruct_from_fluctuation(const ExcitationFunction& xf,
                                                  double mean_sigma,
                                                  const TimeGrid& times) {
  std::vector<double> m(xf.sigma.size(), mean_sigma);
  return reconstruct_from_fluctuation(xf, m, times);
}

// Window-average mean by default.
inline TimeAmplitude reconstruct_from_fluctuation(const ExcitationFunction& xf,
                                                  const TimeGrid& times) {
  xf.validate();
  double m = 0.0;
  for (double s : xf.sigma) m += s;
  m /= static_cast<double>(xf.sigma.size());
  return reconstruct_from_fluctuation(xf, m, times);
}

struct TrendFit {
  int order = 0;
  std::vector<double> coefficients;  // polynomial in (E - Ebar)
  std::vector<double> smooth;        // sigma_tilde(E_n)
  std::vector<double> residual;      // sigma - sigma_tilde
};

// Least-squares polynomial trend of order floor(I/i_d)+1 in the centred
// energy. i_d is the characteristic variation scale of the direct cross
// section and is supplied by the caller.
inline TrendFit detrend(const ExcitationFunction& xf, double i_d) {
  xf.validate();
  if (!(i_d > 0.0)) throw std::invalid_argument("detrend: i_d must be > 0");
  const double window = xf.window();
  if (i_d > window * (1.0 + 1e-9))
    throw std::invalid_argument("detrend: i_d exceeds the energy window");
  const int order = static_cast<int>(std::floor(window / i_d)) + 1;
  const std::size_t n_pts = xf.sigma.size();
  if (n_pts < static_cast<std::size_t>(order) + 2)
    throw std::invalid_argument("detrend: underdetermined polynomial fit");

  // Normal equations on u = (E - Ebar)/(I/2) in [-1, 1] for conditioning.
  const double e_bar = xf.e_bar();
  const double half = 0.5 * window;
  const int m = order + 1;
  std::vector<double> ata(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> atb(m, 0.0);
  std::vector<double> pow_u(m);
  for (std::size_t n = 0; n < n_pts; ++n) {
    const double u = (xf.energy(n) - e_bar) / half;
    pow_u[0] = 1.0;
    for (int k = 1; k < m; ++k) pow_u[k] = pow_u[k - 1] * u;
    for (int r = 0; r < m; ++r) {
      atb[r] += pow_u[r] * xf.sigma[n];
      for (int c = 0; c < m; ++c) ata[r * m + c] += pow_u[r] * pow_u[c];
    }
  }
  // Gaussian elimination with partial pivoting.
  std::vector<double> coef(atb);
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int r = col + 1; r < m; ++r)
      if (std::abs(ata[r * m + col]) > std::abs(ata[piv * m + col])) piv = r;
    if (ata[piv * m + col] == 0.0)
      throw std::runtime_error("detrend: singular normal equations");
    if (piv != col) {
      for (int c = 0; c < m; ++c) std::swap(ata[piv * m + c], ata[col * m + c]);
      std::swap(coef[piv], coef[col]);
    }
    for (int r = col + 1; r < m; ++r) {
      const double f = ata[r * m + col] / ata[col * m + col];
      for (int c = col; c < m; ++c) ata[r * m + c] -= f * ata[col * m + c];
      coef[r] -= f * coef[col];
    }
  }
  for (int r = m - 1; r >= 0; --r) {
    for (int c = r + 1; c < m; ++c) coef[r] -= ata[r * m + c] * coef[c];
    coef[r] /= ata[r * m + r];
  }

  TrendFit fit;
  fit.order = order;
  fit.coefficients.resize(m);
  double scale = 1.0;
  for (int k = 0; k < m; ++k) {
    fit.coefficients[k] = coef[k] / scale;  // back to powers of (E - Ebar)
    scale *= half;
  }
  fit.smooth.resize(n_pts);
  fit.residual.resize(n_pts);
  for (std::size_t n = 0; n < n_pts; ++n) {
    const double u = (xf.energy(n) - e_bar) / half;
    double v = 0.0;
    for (int k = m - 1; k >= 0; --k) v = v * u + coef[k];
    fit.smooth[n] = v;
    fit.residual[n] = xf.sigma[n] - v;
  }
  return fit;
}

// General route: transform of (sigma - sigma_tilde)/sqrt(sigma_d), evaluated
// at laboratory times t > t_dir and re-indexed to the delayed-process clock
// t' = t - t_dir (the direct pulse defines the origin of the observable time).
inline TimeAmplitude reconstruct_general(const ExcitationFunction& xf,
                                         const TrendFit& trend,
                                         std::span<const double> sigma_d,
                                         double t_dir, const TimeGrid& times) {
  xf.validate();
  times.validate();
  if (trend.smooth.size() != xf.sigma.size())
    throw std::invalid_argument("reconstruct_general: trend size mismatch");
  if (sigma_d.size() != xf.sigma.size())
    throw std::invalid_argument("reconstruct_general: sigma_d size mismatch");
  for (double s : sigma_d)
    if (!(s > 0.0))
      throw std::domain_error("reconstruct_general: sigma_d must be > 0 elementwise");
  if (t_dir < 0.0) throw std::domain_error("reconstruct_general: t_dir must be >= 0");
  if (!(times.t.front() > t_dir))
    throw std::domain_error("reconstruct_general: times must exceed t_dir");
  detail::check_alias(times.t.back(), xf.delta_e, "reconstruct_general");

  std::vector<double> g(xf.sigma.size());
  for (std::size_t n = 0; n < g.size(); ++n)
    g[n] = (xf.sigma[n] - trend.smooth[n]) / std::sqrt(sigma_d[n]);
  TimeAmplitude out =
      detail::transform_real_series(xf, g, times, ReconstructionSource::general);
  for (double& t : out.times.t) t -= t_dir;
  return out;
}

// Window average of sigma_tilde - sigma_d: the energy-averaged cross section
// of the time-delayed processes.
inline double sigma_fl_average(const ExcitationFunction& xf, const TrendFit& trend,
                               std::span<const double> sigma_d) {
  xf.validate();
  if (trend.smooth.size() != xf.sigma.size() || sigma_d.size() != xf.sigma.size())
    throw std::invalid_argument("sigma_fl_average: size mismatch");
  double acc = 0.0, tot = 0.0;
  for (std::size_t n = 0; n < sigma_d.size(); ++n) {
    acc += trend.smooth[n] - sigma_d[n];
    tot += std::abs(xf.sigma[n]);
  }
  acc /= static_cast<double>(sigma_d.size());
  tot /= static_cast<double>(sigma_d.size());
  if (acc < -1e-6 * tot)
    warn("sigma_fl_average: negative fluctuating cross section; inputs inconsistent");
  return acc;
}

// Direct cross section from the standard fluctuation-analysis estimate: for
// one effective channel the normalised variance R of the detrended cross
// section obeys R = 1 - y_d^2 with y_d the direct fraction, giving
// <sigma_fl> = <sigma>(1 - y_d) and sigma_d(E) = sigma_tilde(E) - <sigma_fl>.
inline std::vector<double> ericson_direct_estimate(const ExcitationFunction& xf,
                                                   const TrendFit& trend) {
  xf.validate();
  if (trend.smooth.size() != xf.sigma.size())
    throw std::invalid_argument("ericson_direct_estimate: size mismatch");
  double mean = 0.0, var = 0.0;
  for (std::size_t n = 0; n < xf.sigma.size(); ++n) {
    mean += trend.smooth[n];
    var += trend.residual[n] * trend.residual[n];
  }
  mean /= static_cast<double>(xf.sigma.size());
  var /= static_cast<double>(xf.sigma.size());
  if (!(mean > 0.0))
    throw std::invalid_argument("ericson_direct_estimate: nonpositive mean");
  const double r = var / (mean * mean);
  const double y_d = std::sqrt(std::max(0.0, 1.0 - r));
  const double sfl = mean * (1.0 - y_d);
  std::vector<double> sigma_d(trend.smooth);
  for (double& s : sigma_d) s -= sfl;
  return sigma_d;
}

}  // namespace rotspec
