#pragma once

// Reference figure bundles: the three (beta, d) combinations plotted against
// each other throughout. Angular snapshots (fig1), backward-angle time series
// (fig2) and autocorrelation curves (fig3). The normalisation constant A is
// fixed once on the first (reference) set and reused for the others.

#include <cstddef>
#include <string>
#include <vector>

#include "model.hpp"
#include "parallel.hpp"
#include "spectrum.hpp"

namespace rotspec {

struct FigureSet {
  double beta;
  double d;
  std::string label;
};

inline const std::vector<FigureSet>& reference_parameter_sets() {
  static const std::vector<FigureSet> sets{{0.01, 3.0, "b0.010_d3"},
                                           {0.04, 4.0, "b0.040_d4"},
                                           {0.075, 8.0, "b0.075_d8"}};
  return sets;
}

inline ModelParams reference_params(double beta, double d) {
  ModelParams p;
  p.phi = 0.0;
  p.d = d;
  p.j_bar = 14.0;
  p.beta = beta;
  p.hbar_omega = 1.45;
  p.gamma = 0.3;
  return p;
}

// A P(t,theta)/<sigma(theta)> on an angle grid, one row per requested time.
inline std::vector<std::vector<double>> normalized_angle_curves(
    const ModelParams& p, double norm_a, const std::vector<double>& times,
    const AngleGrid& angles, unsigned threads = 1) {
  p.validate();
  angles.validate();
  for (double t : times)
    if (t < 0.0)
      throw std::domain_error("normalized_angle_curves: t must be >= 0");
  std::vector<std::vector<double>> rows(times.size(),
                                        std::vector<double>(angles.size()));
  parallel_for(angles.size(), threads, [&](std::size_t a) {
    const auto c = detail::spin_weights(p, angles.theta[a]);
    const auto s = detail::weight_lag_sums(c);
    const double ms = detail::damped_cosine_sum(p, angles.theta[a], 0.0);
    for (std::size_t r = 0; r < times.size(); ++r)
      rows[r][a] = norm_a * detail::spectrum_from_lags(p, times[r], s) / ms;
  });
  return rows;
}

// A P(t,theta)/<sigma(theta)> as a time series at fixed angle.
inline std::vector<double> normalized_time_curve(const ModelParams& p, double norm_a,
                                                 const std::vector<double>& times,
                                                 double theta) {
  p.validate();
  detail::check_angle(theta, "normalized_time_curve");
  for (double t : times)
    if (t < 0.0) throw std::domain_error("normalized_time_curve: t must be >= 0");
  const auto c = detail::spin_weights(p, theta);
  const auto s = detail::weight_lag_sums(c);
  const double ms = detail::damped_cosine_sum(p, theta, 0.0);
  std::vector<double> out(times.size());
  for (std::size_t i = 0; i < times.size(); ++i)
    out[i] = norm_a * detail::spectrum_from_lags(p, times[i], s) / ms;
  return out;
}

// PowerSpectrum whose values hold A P(t,theta)/<sigma(theta)> -- the quantity
// the reference figures plot; per-angle normalisation cancels the smooth
// Legendre modulation and exposes the interference fringes.
inline PowerSpectrum sample_normalized_spectrum(const ModelParams& p, double norm_a,
                                                const TimeGrid& times,
                                                const AngleGrid& angles,
                                                unsigned threads = 1) {
  p.validate();
  times.validate();
  angles.validate();
  PowerSpectrum ps{p, angles, times,
                   normalized_angle_curves(p, norm_a, times.t, angles, threads),
                   norm_a};
  return ps;
}

struct Fig1Bundle {
  AngleGrid angles;
  std::vector<double> times;  // 3T/8, 7T/16, T/2, 5T/8
  double norm_a = 1.0;
  // values[time][set][angle]
  std::vector<std::vector<std::vector<double>>> values;
};

inline Fig1Bundle build_fig1(double step_deg = 0.1, unsigned threads = 1) {
  Fig1Bundle b;
  b.angles = AngleGrid::uniform_deg(0.0, 180.0, step_deg);
  const auto& sets = reference_parameter_sets();
  const ModelParams ref = reference_params(sets[0].beta, sets[0].d);
  const double period = ref.period();
  b.times = {0.375 * period, 0.4375 * period, 0.5 * period, 0.625 * period};
  b.norm_a = normalization_constant(ref);
  b.values.assign(b.times.size(), {});
  std::vector<std::vector<std::vector<double>>> per_set(sets.size());
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const ModelParams p = reference_params(sets[s].beta, sets[s].d);
    per_set[s] = normalized_angle_curves(p, b.norm_a, b.times, b.angles, threads);
  }
  for (std::size_t r = 0; r < b.times.size(); ++r) {
    b.values[r].resize(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) b.values[r][s] = per_set[s][r];
  }
  return b;
}

struct Fig2Bundle {
  std::vector<double> times;   // [0, 1.5T]
  std::vector<double> angles;  // radians: 180 deg, 170.6 deg
  double norm_a = 1.0;
  // values[angle][set][time]
  std::vector<std::vector<std::vector<double>>> values;
};

inline Fig2Bundle build_fig2(double step_over_period = 0.002) {
  Fig2Bundle b;
  const auto& sets = reference_parameter_sets();
  const ModelParams ref = reference_params(sets[0].beta, sets[0].d);
  const double period = ref.period();
  b.times = linspace_step(0.0, 1.5 * period, step_over_period * period);
  b.angles = {deg_to_rad(180.0), deg_to_rad(170.6)};
  b.norm_a = normalization_constant(ref);
  b.values.assign(b.angles.size(), {});
  for (std::size_t a = 0; a < b.angles.size(); ++a) {
    b.values[a].resize(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const ModelParams p = reference_params(sets[s].beta, sets[s].d);
      b.values[a][s] = normalized_time_curve(p, b.norm_a, b.times, b.angles[a]);
    }
  }
  return b;
}

struct Fig3Bundle {
  std::vector<double> epsilons;  // [0, 8] MeV
  std::vector<double> angles;    // radians: 180 deg, 170.6 deg
  // values[angle][set][epsilon]
  std::vector<std::vector<std::vector<double>>> values;
};

inline Fig3Bundle build_fig3(double eps_step = 0.02) {
  Fig3Bundle b;
  const auto& sets = reference_parameter_sets();
  b.epsilons = linspace_step(0.0, 8.0, eps_step);
  b.angles = {deg_to_rad(180.0), deg_to_rad(170.6)};
  b.values.assign(b.angles.size(), {});
  for (std::size_t a = 0; a < b.angles.size(); ++a) {
    b.values[a].resize(sets.size());
    for (std::size_t s = 0; s < sets.size(); ++s) {
      const ModelParams p = reference_params(sets[s].beta, sets[s].d);
      const double norm = detail::damped_cosine_sum(p, b.angles[a], 0.0);
      auto& col = b.values[a][s];
      col.resize(b.epsilons.size());
      for (std::size_t e = 0; e < b.epsilons.size(); ++e)
        col[e] = detail::damped_cosine_sum(p, b.angles[a], b.epsilons[e]) / norm;
    }
  }
  return b;
}

}  // namespace rotspec
