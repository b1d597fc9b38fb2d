#pragma once

// Stochastic forward model: a correlated Brownian phase ladder over the spin
// channels. Rung m carries an independent Brownian path eta_m with increment
// variance 2 beta dt, and channel J accumulates phi_J = sum_{m<=J} eta_m, so
// that phi_J - phi_J' is Gaussian with variance 2 beta |J-J'| t and
//
//   < exp[i(phi_J - phi_J')] > = exp(-beta |J-J'| t),
//
// reproducing the spin off-diagonal damping of the analytic spectrum exactly.
// The per-realization amplitude
//
//   a(t,theta) = e^{-Gamma t/2} sum_J (2J+1) sqrt(W_J) e^{i Phi J}
//                e^{-i omega J t} e^{i phi_J(t)} P_J(cos theta)
//
// then satisfies <|a|^2> = P(t,theta), and synthetic excitation functions are
// obtained by transforming a(t) to the energy axis and adding an energy-smooth
// direct amplitude.
//
// Randomness is counter-based: realization k derives its generator seed from
// (base_seed, k) alone, so ensembles are reproducible under any scheduling.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "model.hpp"
#include "spectrum.hpp"

namespace rotspec {

struct EnsembleConfig {
  int n_realizations = 1;
  std::uint64_t base_seed = 0;
  double dt = 0.02;        // uniform time step (1/MeV)
  int n_time_steps = 2334; // grid t_k = k dt, k = 0..n_time_steps

  double t_max() const { return dt * n_time_steps; }

  TimeGrid time_grid() const {
    TimeGrid g;
    g.t.resize(static_cast<std::size_t>(n_time_steps) + 1);
    for (int k = 0; k <= n_time_steps; ++k) g.t[k] = dt * k;
    return g;
  }

  static EnsembleConfig for_span(int n_realizations, std::uint64_t seed, double dt,
                                 double t_span) {
    if (!(dt > 0.0)) throw std::invalid_argument("EnsembleConfig: dt must be > 0");
    EnsembleConfig cfg;
    cfg.n_realizations = n_realizations;
    cfg.base_seed = seed;
    cfg.dt = dt;
    cfg.n_time_steps = static_cast<int>(std::ceil(t_span / dt - 1e-9));
    return cfg;
  }

  // dt must resolve both the decay and the rotation; t_max must run the
  // e^{-Gamma t/2} envelope below e^-7.
  void validate(const ModelParams& p) const {
    if (n_realizations < 1)
      throw std::invalid_argument("EnsembleConfig: n_realizations must be >= 1");
    if (!(dt > 0.0) || n_time_steps < 1)
      throw std::invalid_argument("EnsembleConfig: bad time grid");
    const double limit = 0.02 * std::min(1.0 / p.gamma, p.period());
    if (dt > limit * (1.0 + 1e-9))
      throw std::invalid_argument("EnsembleConfig: dt exceeds 0.02*min(1/Gamma, T)");
    if (t_max() < 14.0 / p.gamma * (1.0 - 1e-9))
      throw std::invalid_argument("EnsembleConfig: t_max below 14/Gamma");
  }
};

inline std::uint64_t realization_seed(std::uint64_t base_seed,
                                      std::uint64_t realization) {
  // splitmix64 finalizer over a per-realization counter stream
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ull * (realization + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

struct PhaseLadder {
  int n_spins = 0;   // rows: J = 0..j_max
  int n_steps = 0;   // columns: k = 0..n_steps
  std::vector<double> phi;  // phi[J*(n_steps+1) + k]

  double at(int j, int k) const {
    return phi[static_cast<std::size_t>(j) * (n_steps + 1) + k];
  }
};

// phi_J(t_k) for one realization. Draw order is fixed (time outer, rung
// inner), so results are independent of how realizations are scheduled.
inline PhaseLadder phase_ladder(const ModelParams& p, const EnsembleConfig& cfg,
                                int realization) {
  p.validate();
  cfg.validate(p);
  if (realization < 0 || realization >= cfg.n_realizations)
    throw std::invalid_argument("phase_ladder: realization out of range");
  const int rows = p.spin_cutoff() + 1;
  const int cols = cfg.n_time_steps + 1;
  PhaseLadder lad{rows, cfg.n_time_steps,
                  std::vector<double>(static_cast<std::size_t>(rows) * cols, 0.0)};
  if (p.beta == 0.0) return lad;  // zero-variance increments: all phases stay 0

  std::mt19937_64 rng(realization_seed(cfg.base_seed, realization));
  std::normal_distribution<double> step(0.0, std::sqrt(2.0 * p.beta * cfg.dt));
  std::vector<double> rung(rows, 0.0);
  for (int k = 1; k < cols; ++k) {
    double prefix = 0.0;
    for (int m = 0; m < rows; ++m) {
      rung[m] += step(rng);
      prefix += rung[m];
      lad.phi[static_cast<std::size_t>(m) * cols + k] = prefix;
    }
  }
  return lad;
}

// (2J+1) sqrt(W_J) P_J(cos theta) -- the spin weights of the amplitude sum.
inline std::vector<double> spin_amplitude_weights(const ModelParams& p,
                                                  double theta) {
  return detail::spin_weights(p, theta);
}

// a(t_k, theta) for one time index, given the realization's phase ladder.
inline std::complex<double> time_amplitude_point(const ModelParams& p,
                                                 const EnsembleConfig& cfg,
                                                 const PhaseLadder& lad,
                                                 std::span<const double> weights,
                                                 int k) {
  const double t = cfg.dt * k;
  std::complex<double> sum(0.0, 0.0);
  for (int j = 0; j < lad.n_spins; ++j) {
    const double arg = p.phi * j - p.omega() * j * t + lad.at(j, k);
    sum += weights[j] * std::polar(1.0, arg);
  }
  return std::exp(-0.5 * p.gamma * t) * sum;
}

inline std::vector<std::complex<double>> time_amplitude(const ModelParams& p,
                                                        const EnsembleConfig& cfg,
                                                        double theta,
                                                        const PhaseLadder& lad) {
  detail::check_angle(theta, "time_amplitude");
  const auto w = spin_amplitude_weights(p, theta);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(cfg.n_time_steps) + 1);
  for (int k = 0; k <= cfg.n_time_steps; ++k)
    a[k] = time_amplitude_point(p, cfg, lad, w, k);
  return a;
}

inline std::vector<std::complex<double>> time_amplitude(const ModelParams& p,
                                                        const EnsembleConfig& cfg,
                                                        double theta,
                                                        int realization) {
  return time_amplitude(p, cfg, theta, phase_ladder(p, cfg, realization));
}

// Intensity-weighted centroid of the rotational lines, sum_J (2J+1)^2 W(J)
// omega J / sum_J (2J+1)^2 W(J). Energy windows centred here truncate the
// band symmetrically in intensity.
inline double line_intensity_centroid(const ModelParams& p) {
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= p.spin_cutoff(); ++j) {
    const double w = (2.0 * j + 1.0) * (2.0 * j + 1.0) * spin_window(j, p);
    num += w * p.omega() * j;
    den += w;
  }
  return num / den;
}

struct EnergyGridSpec {
  double e_min = 0.0;   // MeV
  double delta_e = 0.1; // MeV
  int n_steps = 1;      // N; the grid has N+1 samples

  double e_max() const { return e_min + delta_e * n_steps; }
  double window() const { return delta_e * n_steps; }  // I = N dE
  double e_bar() const { return 0.5 * (e_min + e_max()); }
  double energy(int n) const { return e_min + delta_e * n; }

  void validate() const {
    if (!(delta_e > 0.0) || n_steps < 1)
      throw std::invalid_argument("EnergyGridSpec: bad grid");
  }
};

struct DirectAmplitudeSpec {
  // |f_dir|(E) = sum_k magnitude_poly[k] E^k over the working window. An
  // all-zero polynomial means no direct amplitude at all.
  std::vector<double> magnitude_poly{1.0};
  double phase0 = 0.0;  // phase at the window centre (rad)
  // Linear energy slope of the direct phase, arg f_dir = phase0 - (E-Ebar) t_dir.
  // With the analysis kernel e^{-iEt} used downstream this shifts the
  // reconstructed delayed process later by t_dir: the direct pulse starts the
  // observable clock.
  double t_dir = 0.0;
  double target_direct_fraction = 0.0;  // desired <sigma_dir>/<sigma> in [0,1)

  bool is_zero() const {
    for (double c : magnitude_poly)
      if (c != 0.0) return false;
    return true;
  }

  double magnitude(double e) const {
    double v = 0.0;
    for (std::size_t k = magnitude_poly.size(); k-- > 0;)
      v = v * e + magnitude_poly[k];
    return v;
  }

  std::complex<double> amplitude(double e, double e_bar) const {
    return magnitude(e) * std::polar(1.0, phase0 - (e - e_bar) * t_dir);
  }

  void validate(const ModelParams& p, const EnergyGridSpec& grid) const {
    if (!(target_direct_fraction >= 0.0) || !(target_direct_fraction < 1.0))
      throw std::invalid_argument(
          "DirectAmplitudeSpec: target_direct_fraction must lie in [0, 1)");
    if (t_dir < 0.0 || t_dir > 0.2 / p.gamma)
      throw std::invalid_argument(
          "DirectAmplitudeSpec: t_dir must lie in [0, 0.2/Gamma]");
    if (!is_zero()) {
      for (int n = 0; n <= grid.n_steps; ++n)
        if (!(magnitude(grid.energy(n)) > 0.0))
          throw std::invalid_argument(
              "DirectAmplitudeSpec: |f_dir| must be > 0 across the window");
    }
  }
};

struct ExcitationFunction {
  double theta = 0.0;   // working angle (rad)
  double e_min = 0.0;   // MeV
  double delta_e = 0.0; // MeV
  std::vector<double> sigma;                  // cross section, N+1 samples
  std::vector<std::complex<double>> amplitude;  // optional full f(E); may be empty

  bool has_amplitude() const { return !amplitude.empty(); }
  std::size_t steps() const { return sigma.size() - 1; }      // N
  double window() const { return delta_e * static_cast<double>(steps()); }
  double energy(std::size_t n) const { return e_min + delta_e * n; }
  double e_bar() const { return e_min + 0.5 * window(); }

  void validate() const {
    if (sigma.size() < 2)
      throw std::invalid_argument("ExcitationFunction: need at least 2 samples");
    if (!(delta_e > 0.0))
      throw std::invalid_argument("ExcitationFunction: delta_e must be > 0");
    for (double s : sigma)
      if (s < 0.0)
        throw std::invalid_argument("ExcitationFunction: sigma must be >= 0");
    if (has_amplitude() && amplitude.size() != sigma.size())
      throw std::invalid_argument("ExcitationFunction: amplitude length mismatch");
  }
};

struct SynthStats {
  double scale = 1.0;                   // factor applied to the fluctuating part
  double realized_direct_fraction = 0.0;
  double mean_sigma = 0.0;              // window mean of sigma
  double mean_sigma_direct = 0.0;       // window mean of |f_dir|^2
  double mean_sigma_fl = 0.0;           // window mean of |scaled delta f|^2
  std::vector<std::complex<double>> scaled_delta_f;
  std::vector<double> sigma_direct;
};

// One synthetic excitation function: the fluctuating amplitude is the energy
// transform of a(t) with kernel e^{+iEt}, rescaled so that the realized
// <sigma_dir>/<sigma> over the actual window hits the requested fraction, then
// added to the direct amplitude.
inline ExcitationFunction synth_excitation(const ModelParams& p,
                                           const EnsembleConfig& cfg, double theta,
                                           const DirectAmplitudeSpec& dspec,
                                           const EnergyGridSpec& grid,
                                           int realization,
                                           SynthStats* stats = nullptr) {
  p.validate();
  cfg.validate(p);
  grid.validate();
  dspec.validate(p, grid);
  if (grid.window() < 20.0 * p.gamma * (1.0 - 1e-9))
    throw std::invalid_argument("synth_excitation: window I must be >= 20*Gamma");
  if (grid.delta_e > 0.5 * p.gamma * (1.0 + 1e-9))
    throw std::invalid_argument("synth_excitation: delta_e must be <= Gamma/2");

  const auto a = time_amplitude(p, cfg, theta, realization);
  const int n_pts = grid.n_steps + 1;

  std::vector<std::complex<double>> delta_f(n_pts);
  for (int n = 0; n < n_pts; ++n) {
    const double e = grid.energy(n);
    std::complex<double> acc(0.0, 0.0);
    for (int k = 0; k < static_cast<int>(a.size()); ++k)
      acc += std::polar(1.0, e * cfg.dt * k) * a[k];
    delta_f[n] = cfg.dt * acc;
  }

  std::vector<std::complex<double>> f_dir(n_pts);
  for (int n = 0; n < n_pts; ++n)
    f_dir[n] = dspec.amplitude(grid.energy(n), grid.e_bar());

  double s_dir = 0.0, s_fl = 0.0, cross = 0.0;
  for (int n = 0; n < n_pts; ++n) {
    s_dir += std::norm(f_dir[n]);
    s_fl += std::norm(delta_f[n]);
    cross += 2.0 * std::real(delta_f[n] * std::conj(f_dir[n]));
  }
  s_dir /= n_pts;
  s_fl /= n_pts;
  cross /= n_pts;

  const double rho = dspec.target_direct_fraction;
  double scale = 1.0;
  if (dspec.is_zero()) {
    if (rho != 0.0)
      throw std::invalid_argument(
          "synth_excitation: nonzero direct fraction requested with no direct amplitude");
  } else if (s_fl <= 0.0) {
    // degenerate window with no fluctuating part: the fraction is pinned at 1
    if (std::abs(1.0 - rho) > 0.02)
      throw std::invalid_argument(
          "synth_excitation: cannot reach the target direct fraction (no fluctuation)");
  } else if (rho == 0.0) {
    throw std::invalid_argument(
        "synth_excitation: target fraction 0 unreachable with a direct amplitude present");
  } else {
    // solve s_fl c^2 + cross c - s_dir (1/rho - 1) = 0 for the positive root
    const double rhs = s_dir * (1.0 / rho - 1.0);
    const double disc = cross * cross + 4.0 * s_fl * rhs;
    scale = (-cross + std::sqrt(disc)) / (2.0 * s_fl);
  }

  ExcitationFunction xf;
  xf.theta = theta;
  xf.e_min = grid.e_min;
  xf.delta_e = grid.delta_e;
  xf.sigma.resize(n_pts);
  xf.amplitude.resize(n_pts);
  double mean_sigma = 0.0, mean_fl = 0.0;
  for (int n = 0; n < n_pts; ++n) {
    const std::complex<double> df = scale * delta_f[n];
    xf.amplitude[n] = f_dir[n] + df;
    xf.sigma[n] = std::norm(xf.amplitude[n]);
    mean_sigma += xf.sigma[n];
    mean_fl += std::norm(df);
  }
  mean_sigma /= n_pts;
  mean_fl /= n_pts;

  if (stats) {
    stats->scale = scale;
    stats->mean_sigma = mean_sigma;
    stats->mean_sigma_direct = s_dir;
    stats->mean_sigma_fl = mean_fl;
    stats->realized_direct_fraction = mean_sigma > 0.0 ? s_dir / mean_sigma : 1.0;
    stats->scaled_delta_f.resize(n_pts);
    stats->sigma_direct.resize(n_pts);
    for (int n = 0; n < n_pts; ++n) {
      stats->scaled_delta_f[n] = scale * delta_f[n];
      stats->sigma_direct[n] = std::norm(f_dir[n]);
    }
  }
  return xf;
}

// var(sigma)/mean(sigma)^2 with the plain (divide by n) estimator.
inline double normalized_variance(const ExcitationFunction& xf) {
  xf.validate();
  if (xf.sigma.size() < 11)
    throw std::invalid_argument("normalized_variance: need N >= 10");
  double mean = 0.0;
  for (double s : xf.sigma) mean += s;
  mean /= static_cast<double>(xf.sigma.size());
  double var = 0.0;
  for (double s : xf.sigma) var += (s - mean) * (s - mean);
  var /= static_cast<double>(xf.sigma.size());
  if (!(mean != 0.0)) throw std::invalid_argument("normalized_variance: zero mean");
  return var / (mean * mean);
}

}  // namespace rotspec
