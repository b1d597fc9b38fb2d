#pragma once

// Parameter set and spin-space utilities for the coherent rotating-wave-packet
// decay model: the Gaussian J-window over total spin, Legendre polynomials and
// the angle/time grids shared by the rest of the library.
//
// Units: hbar = 1 throughout. Energies and widths are in MeV, times in 1/MeV,
// angles in radians. One full revolution of the intermediate complex takes
// T = 2*pi/omega with omega equal to hbar_omega numerically.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rotspec {

inline constexpr double kPi = std::numbers::pi_v<double>;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

struct ModelParams {
  double phi = 0.0;          // deflection phase per unit spin (rad)
  double d = 3.0;            // J-window width (spin units)
  double j_bar = 14.0;       // mean total spin (hbar units)
  double beta = 0.01;        // spin phase-relaxation width (MeV)
  double hbar_omega = 1.45;  // rotational quantum (MeV)
  double gamma = 0.3;        // total decay width (MeV)
  std::optional<int> j_max{};            // spin-sum cutoff override
  std::optional<double> level_spacing{}; // mean level spacing D (MeV), warnings only

  double omega() const { return hbar_omega; }  // angular velocity, hbar = 1
  double period() const { return 2.0 * kPi / hbar_omega; }

  // Default cutoff j_bar + 5 d keeps the truncated window weight below e^-25.
  int spin_cutoff() const {
    return j_max ? *j_max : static_cast<int>(std::ceil(j_bar + 5.0 * d));
  }

  void validate() const {
    if (!(d > 0.0)) throw std::invalid_argument("ModelParams: d must be > 0");
    if (!(j_bar > 0.0)) throw std::invalid_argument("ModelParams: j_bar must be > 0");
    if (!(beta >= 0.0)) throw std::invalid_argument("ModelParams: beta must be >= 0");
    if (!(hbar_omega > 0.0))
      throw std::invalid_argument("ModelParams: hbar_omega must be > 0");
    if (!(gamma > 0.0)) throw std::invalid_argument("ModelParams: gamma must be > 0");
    if (j_max && *j_max < 0)
      throw std::invalid_argument("ModelParams: j_max must be >= 0");
    if (level_spacing && !(*level_spacing > 0.0))
      throw std::invalid_argument("ModelParams: level_spacing must be > 0");
  }
};

// W(J) = exp[-(J - j_bar)^2 / d^2], the J-window of average partial reaction
// probability. Peak value 1 at J = j_bar.
inline double spin_window(int j, const ModelParams& p) {
  const double u = (static_cast<double>(j) - p.j_bar) / p.d;
  return std::exp(-u * u);
}

// Legendre polynomial P_n(x) via the upward Bonnet recurrence; stable far
// beyond the spin cutoffs used here. Exact at the endpoints.
inline double legendre(int n, double x) {
  if (n < 0) throw std::domain_error("legendre: order must be >= 0");
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::domain_error("legendre: argument outside [-1, 1]");
  x = std::clamp(x, -1.0, 1.0);
  if (n == 0) return 1.0;
  double pm1 = 1.0, p = x;
  for (int k = 2; k <= n; ++k) {
    const double pk = ((2.0 * k - 1.0) * x * p - (k - 1.0) * pm1) / k;
    pm1 = p;
    p = pk;
  }
  return p;
}

// P_0(x) .. P_{n_max}(x) in one sweep of the recurrence.
inline std::vector<double> legendre_table(int n_max, double x) {
  if (n_max < 0) throw std::domain_error("legendre_table: order must be >= 0");
  if (std::abs(x) > 1.0 + 1e-12)
    throw std::domain_error("legendre_table: argument outside [-1, 1]");
  x = std::clamp(x, -1.0, 1.0);
  std::vector<double> t(static_cast<std::size_t>(n_max) + 1);
  t[0] = 1.0;
  if (n_max >= 1) t[1] = x;
  for (int k = 2; k <= n_max; ++k)
    t[k] = ((2.0 * k - 1.0) * x * t[k - 1] - (k - 1.0) * t[k - 2]) / k;
  return t;
}

// Inclusive uniform grid lo, lo+step, ...; the final point is snapped onto
// `hi` when it lands there up to round-off.
inline std::vector<double> linspace_step(double lo, double hi, double step) {
  if (!(step > 0.0)) throw std::invalid_argument("linspace_step: step must be > 0");
  if (hi < lo) throw std::invalid_argument("linspace_step: hi < lo");
  const double span = (hi - lo) / step;
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9));
  std::vector<double> v;
  v.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    double x = lo + static_cast<double>(i) * step;
    if (i == n && std::abs(x - hi) <= 1e-9 * step) x = hi;
    v.push_back(x);
  }
  return v;
}

struct AngleGrid {
  std::vector<double> theta;  // radians, strictly increasing, within [0, pi]

  static AngleGrid from_degrees(const std::vector<double>& deg) {
    AngleGrid g;
    g.theta.reserve(deg.size());
    for (double x : deg) g.theta.push_back(deg_to_rad(x));
    g.validate();
    return g;
  }
  static AngleGrid uniform_deg(double lo_deg, double hi_deg, double step_deg) {
    return from_degrees(linspace_step(lo_deg, hi_deg, step_deg));
  }

  std::size_t size() const { return theta.size(); }

  void validate() const {
    if (theta.empty()) throw std::invalid_argument("AngleGrid: empty");
    for (std::size_t i = 0; i < theta.size(); ++i) {
      if (theta[i] < -1e-12 || theta[i] > kPi + 1e-12)
        throw std::invalid_argument("AngleGrid: angle outside [0, pi]");
      if (i > 0 && !(theta[i] > theta[i - 1]))
        throw std::invalid_argument("AngleGrid: angles must be strictly increasing");
    }
  }
};

struct TimeGrid {
  std::vector<double> t;  // 1/MeV, strictly increasing, t >= 0

  static TimeGrid uniform(double lo, double hi, double step) {
    TimeGrid g;
    g.t = linspace_step(lo, hi, step);
    g.validate();
    return g;
  }

  std::size_t size() const { return t.size(); }

  void validate() const {
    if (t.empty()) throw std::invalid_argument("TimeGrid: empty");
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] < 0.0)
        throw std::invalid_argument("TimeGrid: times must be >= 0");
      if (i > 0 && !(t[i] > t[i - 1]))
        throw std::invalid_argument("TimeGrid: times must be strictly increasing");
    }
  }
};

}  // namespace rotspec
