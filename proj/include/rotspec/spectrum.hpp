#pragma once

// Analytic time power spectrum of the decaying, coherently rotating complex
// and its derived observables.
//
// The decay intensity is a double sum over total spin,
//
//   P(t,theta) = e^{-Gamma t} sum_{J,J'} (2J+1)(2J'+1) sqrt(W_J W_J')
//                  exp[i(Phi - omega t)(J-J') - beta |J-J'| t]
//                  P_J(cos theta) P_J'(cos theta),
//
// which collapses to a quadratic form in the spin weights
// c_J = (2J+1) sqrt(W_J) P_J(cos theta). Grouping by spin lag k = |J-J'| and
// taking the diagonal plus twice the real part of the ordered pairs makes the
// result exactly real by construction. Every other observable in this header
// (energy-averaged cross section, autocorrelation) is the same quadratic form
// with a different closed-form kernel over the lag.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "model.hpp"
#include "series.hpp"
#include "warning.hpp"

namespace rotspec {

namespace detail {

// c_J = (2J+1) sqrt(W(J)) P_J(cos theta), J = 0..j_max.
inline std::vector<double> spin_weights(const ModelParams& p, double theta) {
  const int jm = p.spin_cutoff();
  const auto leg = legendre_table(jm, std::cos(theta));
  std::vector<double> c(static_cast<std::size_t>(jm) + 1);
  for (int j = 0; j <= jm; ++j)
    c[j] = (2.0 * j + 1.0) * std::sqrt(spin_window(j, p)) * leg[j];
  return c;
}

// Lag sums S_k = sum_J c_J c_{J+k}; S_0 is the diagonal of the double sum.
inline std::vector<double> weight_lag_sums(std::span<const double> c) {
  const std::size_t n = c.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j + k < n; ++j) acc += c[j] * c[j + k];
    s[k] = acc;
  }
  return s;
}

// P(t,theta) assembled from precomputed lag sums (theta enters only through S).
inline double spectrum_from_lags(const ModelParams& p, double t,
                                 std::span<const double> s) {
  const double damp = std::exp(-p.beta * t);
  const double arg0 = p.phi - p.omega() * t;
  double total = s[0];
  double dk = 1.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    dk *= damp;
    total += 2.0 * std::cos(arg0 * static_cast<double>(k)) * dk * s[k];
  }
  return std::exp(-p.gamma * t) * total;
}

// sum over lags of Re{ e^{i Phi k} s_k / (s_k^2 + eps^2) } S_k with
// s_k = (Gamma + beta k) + i omega k. This is the cosine half-Fourier
// transform of the time spectrum, integrated term by term; eps = 0 gives the
// time integral, i.e. the energy-averaged cross section.
inline double damped_cosine_sum(const ModelParams& p, double theta, double eps) {
  const auto c = spin_weights(p, theta);
  const auto s = weight_lag_sums(c);
  const double e2 = eps * eps;
  double total = s[0] * p.gamma / (p.gamma * p.gamma + e2);
  for (std::size_t k = 1; k < s.size(); ++k) {
    const std::complex<double> sk(p.gamma + p.beta * static_cast<double>(k),
                                  p.omega() * static_cast<double>(k));
    const std::complex<double> kernel = sk / (sk * sk + e2);
    const std::complex<double> phase =
        std::polar(1.0, p.phi * static_cast<double>(k));
    total += 2.0 * std::real(phase * kernel) * s[k];
  }
  return total;
}

inline void check_angle(double theta, const char* who) {
  if (theta < -1e-12 || theta > kPi + 1e-12)
    throw std::domain_error(std::string(who) + ": angle outside [0, pi]");
}

}  // namespace detail

// Decay intensity P(t,theta). Warns (does not fail) when a level spacing D is
// set and t reaches 1/D, past which the level-sum-to-integral approximation
// degrades.
inline double power_spectrum(const ModelParams& p, double t, double theta) {
  p.validate();
  if (t < 0.0) throw std::domain_error("power_spectrum: t must be >= 0");
  detail::check_angle(theta, "power_spectrum");
  if (p.level_spacing && t >= 1.0 / *p.level_spacing)
    warn("power_spectrum: t = " + std::to_string(t) +
         " reaches 1/D = " + std::to_string(1.0 / *p.level_spacing) +
         "; results beyond this time are qualitative");
  const auto c = detail::spin_weights(p, theta);
  const auto s = detail::weight_lag_sums(c);
  return detail::spectrum_from_lags(p, t, s);
}

// Energy-averaged cross section <sigma(theta)> = int_0^inf P(t,theta) dt,
// evaluated term by term in closed form. Strictly positive.
inline double mean_cross_section(const ModelParams& p, double theta) {
  p.validate();
  detail::check_angle(theta, "mean_cross_section");
  return detail::damped_cosine_sum(p, theta, 0.0);
}

// A such that A P(0,0) / <sigma(0)> = 1.
inline double normalization_constant(const ModelParams& p) {
  return mean_cross_section(p, 0.0) / power_spectrum(p, 0.0, 0.0);
}

// Normalised cross-section energy autocorrelation
// C(eps,theta)/C(0,theta) = [int_0^inf cos(eps t) P(t,theta) dt] / <sigma(theta)>.
// eps = 0 returns exactly 1 (identical code path for numerator and norm).
inline double autocorrelation(const ModelParams& p, double epsilon, double theta) {
  p.validate();
  if (epsilon < 0.0) throw std::domain_error("autocorrelation: eps must be >= 0");
  detail::check_angle(theta, "autocorrelation");
  return detail::damped_cosine_sum(p, theta, epsilon) /
         detail::damped_cosine_sum(p, theta, 0.0);
}

struct PowerSpectrum {
  ModelParams params;
  AngleGrid angles;
  TimeGrid times;
  std::vector<std::vector<double>> values;  // [time][angle]
  double norm_a = 1.0;
};

// Fill a (time x angle) grid of P. Spin weights are computed once per angle;
// the per-time assembly is bit-identical to power_spectrum().
inline PowerSpectrum sample_power_spectrum(const ModelParams& p,
                                           const TimeGrid& times,
                                           const AngleGrid& angles) {
  p.validate();
  times.validate();
  angles.validate();
  if (p.level_spacing && times.t.back() >= 1.0 / *p.level_spacing)
    warn("sample_power_spectrum: grid extends past 1/D = " +
         std::to_string(1.0 / *p.level_spacing));
  PowerSpectrum ps{p, angles, times, {}, 1.0};
  ps.values.assign(times.size(), std::vector<double>(angles.size(), 0.0));
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const auto c = detail::spin_weights(p, angles.theta[a]);
    const auto s = detail::weight_lag_sums(c);
    for (std::size_t r = 0; r < times.size(); ++r)
      ps.values[r][a] = detail::spectrum_from_lags(p, times.t[r], s);
  }
  return ps;
}

namespace detail {

inline std::size_t time_row(const PowerSpectrum& ps, double t, const char* who) {
  for (std::size_t r = 0; r < ps.times.size(); ++r)
    if (std::abs(ps.times.t[r] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return r;
  throw std::invalid_argument(std::string(who) + ": t not on the sampled grid");
}

}  // namespace detail

// Interference fringe visibility on the angular window [theta_lo, theta_hi]:
// the deepest interior local minimum P_min and its two flanking maxima give
// (mean(max) - P_min) / (mean(max) + P_min) in [0, 1]. Returns 0 when the
// window has no interior minimum. Requires sampling no coarser than 0.2 deg.
inline double fringe_contrast(const PowerSpectrum& ps, double t, double theta_lo,
                              double theta_hi) {
  if (!(theta_lo < theta_hi) || theta_lo < -1e-12 || theta_hi > kPi + 1e-12)
    throw std::invalid_argument("fringe_contrast: bad angular window");
  const std::size_t row = detail::time_row(ps, t, "fringe_contrast");
  const auto& th = ps.angles.theta;
  std::size_t lo = 0, hi = th.size();
  while (lo < th.size() && th[lo] < theta_lo - 1e-12) ++lo;
  while (hi > lo && th[hi - 1] > theta_hi + 1e-12) --hi;
  if (hi - lo < 3)
    throw std::invalid_argument("fringe_contrast: window not covered by the grid");
  const double max_step = deg_to_rad(0.2) + 1e-12;
  if (th[lo] > theta_lo + max_step || th[hi - 1] < theta_hi - max_step)
    throw std::invalid_argument("fringe_contrast: grid does not span the window");
  for (std::size_t i = lo + 1; i < hi; ++i)
    if (th[i] - th[i - 1] > max_step)
      throw std::invalid_argument(
          "fringe_contrast: angular sampling coarser than 0.2 deg");

  std::span<const double> y(ps.values[row].data() + lo, hi - lo);
  const auto imin = deepest_local_min(y);
  if (!imin) return 0.0;
  const auto [pa, pb] = flanking_maxima(y, *imin);
  const double top = 0.5 * (pa + pb);
  if (!(top + y[*imin] > 0.0)) return 0.0;
  const double c = (top - y[*imin]) / (top + y[*imin]);
  return std::clamp(c, 0.0, 1.0);
}

// RMS angular width of the dominant wave packet at time t, taken over a
// half-plane window of half-width pi/2 centred on the packet. A maximum that
// sits on the domain edge is a packet folded at theta = 0 or pi; the second
// moment is then taken about the edge, which the fold preserves. Throws when a
// second packet of comparable height shares the window (ambiguous centroid).
inline double angular_width(const PowerSpectrum& ps, double t) {
  const std::size_t row = detail::time_row(ps, t, "angular_width");
  const auto& th = ps.angles.theta;
  const auto& y = ps.values[row];
  if (th.size() < 5) throw std::invalid_argument("angular_width: grid too coarse");

  std::size_t imax = 0;
  for (std::size_t i = 1; i < y.size(); ++i)
    if (y[i] > y[imax]) imax = i;
  const bool folded = (imax == 0 || imax + 1 == th.size());
  const double center = th[imax];

  std::size_t lo = 0, hi = th.size();
  while (lo < th.size() && th[lo] < center - kPi / 2.0) ++lo;
  while (hi > lo && th[hi - 1] > center + kPi / 2.0) --hi;
  std::span<const double> yw(y.data() + lo, hi - lo);
  std::span<const double> tw(th.data() + lo, hi - lo);

  for (std::size_t i : local_maxima(yw)) {
    const std::size_t gi = lo + i;
    if (gi == imax) continue;
    if (y[gi] >= 0.5 * y[imax] && std::abs(th[gi] - center) > 0.02 &&
        (gi > imax ? gi - imax : imax - gi) > 3)
      throw std::runtime_error(
          "angular_width: two packets of comparable height overlap");
  }

  const auto w = trapezoid_weights(tw);
  double norm = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < yw.size(); ++i) {
    norm += w[i] * yw[i];
    mean += w[i] * yw[i] * tw[i];
  }
  if (!(norm > 0.0)) throw std::runtime_error("angular_width: vanishing intensity");
  const double mu = folded ? center : mean / norm;
  double m2 = 0.0;
  for (std::size_t i = 0; i < yw.size(); ++i)
    m2 += w[i] * yw[i] * (tw[i] - mu) * (tw[i] - mu);
  return std::sqrt(m2 / norm);
}

struct CorrelationFunction {
  AngleGrid angles;
  std::vector<double> epsilons;               // MeV, >= 0
  std::vector<std::vector<double>> values;    // [epsilon][angle], value(0) = 1
};

inline CorrelationFunction sample_autocorrelation(const ModelParams& p,
                                                  const std::vector<double>& epsilons,
                                                  const AngleGrid& angles) {
  p.validate();
  angles.validate();
  CorrelationFunction cf{angles, epsilons, {}};
  cf.values.assign(epsilons.size(), std::vector<double>(angles.size(), 0.0));
  for (std::size_t a = 0; a < angles.size(); ++a) {
    const double norm = detail::damped_cosine_sum(p, angles.theta[a], 0.0);
    for (std::size_t e = 0; e < epsilons.size(); ++e) {
      if (epsilons[e] < 0.0)
        throw std::domain_error("sample_autocorrelation: eps must be >= 0");
      cf.values[e][a] =
          detail::damped_cosine_sum(p, angles.theta[a], epsilons[e]) / norm;
    }
  }
  return cf;
}

}  // namespace rotspec
