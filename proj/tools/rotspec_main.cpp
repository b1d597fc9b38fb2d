// Command-line front end: angular snapshots and time series of the decay
// intensity, autocorrelation curves, synthetic excitation functions, and the
// time-spectrum reconstruction pipeline. All outputs are CSV files with a
// parameter echo in their comment headers.
//
// Exit codes: 0 success, 1 usage/config error, 2 domain/validation error,
// 3 figure check failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <rotspec/config.hpp>
#include <rotspec/csv.hpp>
#include <rotspec/ensemble.hpp>
#include <rotspec/figures.hpp>
#include <rotspec/parallel.hpp>
#include <rotspec/reconstruct.hpp>
#include <rotspec/series.hpp>
#include <rotspec/spectrum.hpp>

namespace fs = std::filesystem;
using namespace rotspec;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  unsigned threads = 1;
};

RunConfig load_config(const GlobalOpts& g) {
  RunConfig rc = g.config_path.empty() ? default_run_config()
                                       : parse_config_file(g.config_path);
  if (!g.out_dir.empty()) rc.output_dir = g.out_dir;
  if (g.seed) rc.ensemble.base_seed = *g.seed;
  return rc;
}

fs::path prepare_out_dir(const RunConfig& rc) {
  fs::path dir(rc.output_dir);
  fs::create_directories(dir);
  return dir;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open output file " + p.string());
  return f;
}

// times accept a plain 1/MeV value or a multiple of the revolution period,
// e.g. "0.4375T"
double parse_time_token(const std::string& tok, double period) {
  std::string s = tok;
  double scale = 1.0;
  if (!s.empty() && (s.back() == 'T' || s.back() == 't')) {
    scale = period;
    s.pop_back();
  }
  return parse_double(s, "time '" + tok + "'") * scale;
}

std::vector<double> parse_time_list(const std::string& list, double period) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_time_token(tok, period));
  }
  if (out.empty()) throw std::invalid_argument("empty time list");
  return out;
}

// "lo:hi:step", each token optionally with the T suffix
std::vector<double> parse_range(const std::string& spec, double period) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(tok);
  if (parts.size() != 3)
    throw std::invalid_argument("expected lo:hi:step, got '" + spec + "'");
  return linspace_step(parse_time_token(parts[0], period),
                       parse_time_token(parts[1], period),
                       parse_time_token(parts[2], period));
}

std::vector<double> parse_list(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(parse_double(tok, "list entry"));
  }
  if (out.empty()) throw std::invalid_argument("empty list");
  return out;
}

std::string sanitize(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '/' || c == ' ' || c == ':') c = '_';
  return out;
}

// ---------------------------------------------------------------- spectrum

int cmd_spectrum(const GlobalOpts& g, const std::string& t_list,
                 const std::string& theta_range, const std::string& fixed_a_path) {
  const RunConfig rc = load_config(g);
  rc.model.validate();
  const double period = rc.model.period();
  const auto times = parse_time_list(t_list, period);

  const auto deg = parse_range(theta_range, 1.0);
  const auto angles = AngleGrid::from_degrees(deg);

  ModelParams a_model = rc.model;
  if (!fixed_a_path.empty()) a_model = parse_config_file(fixed_a_path).model;
  const double norm_a = normalization_constant(a_model);

  const auto rows =
      normalized_angle_curves(rc.model, norm_a, times, angles, g.threads);
  const auto dir = prepare_out_dir(rc);
  std::stringstream tokens(t_list);
  std::string tok;
  std::size_t idx = 0;
  while (std::getline(tokens, tok, ',')) {
    if (tok.empty()) continue;
    auto f = open_out(dir / ("spectrum_t" + sanitize(tok) + ".csv"));
    KeyValues meta = config_echo(rc);
    meta.emplace_back("t_invMeV", format_double(times[idx]));
    meta.emplace_back("t_over_T", format_double(times[idx] / period));
    meta.emplace_back("norm_A", format_double(norm_a));
    write_comment_kv(f, meta);
    f << "theta_deg,AP_over_meansigma\n";
    for (std::size_t i = 0; i < angles.size(); ++i)
      f << format_double(rad_to_deg(angles.theta[i])) << ','
        << format_double(rows[idx][i]) << '\n';
    ++idx;
  }
  return 0;
}

// ---------------------------------------------------------------- autocorr

int cmd_autocorr(const GlobalOpts& g, const std::string& eps_range,
                 const std::string& theta_list) {
  const RunConfig rc = load_config(g);
  rc.model.validate();
  const auto eps = parse_range(eps_range, 1.0);
  const auto thetas_deg = parse_list(theta_list);

  // column per requested angle, in the order given
  std::vector<std::vector<double>> cols(thetas_deg.size());
  for (std::size_t a = 0; a < thetas_deg.size(); ++a) {
    cols[a].resize(eps.size());
    for (std::size_t e = 0; e < eps.size(); ++e)
      cols[a][e] = autocorrelation(rc.model, eps[e], deg_to_rad(thetas_deg[a]));
  }

  const auto dir = prepare_out_dir(rc);
  auto f = open_out(dir / "autocorr.csv");
  write_comment_kv(f, config_echo(rc));
  f << "eps_MeV";
  for (double d : thetas_deg) f << ",C_norm@" << format_double(d) << "deg";
  f << '\n';
  for (std::size_t e = 0; e < eps.size(); ++e) {
    f << format_double(eps[e]);
    for (std::size_t a = 0; a < thetas_deg.size(); ++a)
      f << ',' << format_double(cols[a][e]);
    f << '\n';
  }
  return 0;
}

// ------------------------------------------------------------------- synth

int cmd_synth(const GlobalOpts& g, double theta_deg) {
  RunConfig rc = load_config(g);
  rc.model.validate();
  const double theta = deg_to_rad(theta_deg);
  const auto dir = prepare_out_dir(rc);

  std::vector<ExcitationFunction> runs(rc.ensemble.n_realizations);
  std::vector<SynthStats> stats(rc.ensemble.n_realizations);
  parallel_for(rc.ensemble.n_realizations, g.threads, [&](std::size_t r) {
    runs[r] = synth_excitation(rc.model, rc.ensemble, theta, rc.direct, rc.grid,
                               static_cast<int>(r), &stats[r]);
  });

  for (int r = 0; r < rc.ensemble.n_realizations; ++r) {
    char name[64];
    std::snprintf(name, sizeof(name), "synth_r%03d.csv", r);
    auto f = open_out(dir / name);
    KeyValues meta{{"seed", std::to_string(rc.ensemble.base_seed)},
                   {"realization", std::to_string(r)},
                   {"direct_fraction",
                    format_double(stats[r].realized_direct_fraction)}};
    KeyValues echo = config_echo(rc);
    meta.insert(meta.end(), echo.begin(), echo.end());
    write_excitation_csv(f, runs[r], meta);
  }

  {
    auto f = open_out(dir / "manifest.cfg");
    write_config(f, rc);
  }
  {
    auto f = open_out(dir / "realizations.csv");
    write_comment_kv(f, config_echo(rc));
    f << "realization,stream_seed,scale,direct_fraction,mean_sigma_fl_over_mean_sigma\n";
    for (int r = 0; r < rc.ensemble.n_realizations; ++r)
      f << r << ',' << realization_seed(rc.ensemble.base_seed, r) << ','
        << format_double(stats[r].scale) << ','
        << format_double(stats[r].realized_direct_fraction) << ','
        << format_double(stats[r].mean_sigma_fl / stats[r].mean_sigma) << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- reconstruct

int cmd_reconstruct(const GlobalOpts& g, const std::string& input,
                    const std::string& mode, const std::string& t_range,
                    double i_d, double t_dir, const std::string& truth_path,
                    const std::string& sigma_d_csv, double sigma_d_const) {
  const RunConfig rc = load_config(g);
  rc.model.validate();
  const double period = rc.model.period();

  std::ifstream in(input);
  if (!in) throw ConfigError("cannot open input csv '" + input + "'");
  const auto loaded = read_excitation_csv(in);
  const auto& xf = loaded.xf;

  TimeGrid times;
  times.t = parse_range(t_range, period);
  times.validate();

  TimeAmplitude out;
  std::string sigma_d_source = "none";
  if (mode == "amplitude") {
    out = reconstruct_from_amplitude(xf, times);
  } else if (mode == "fluctuation") {
    out = reconstruct_from_fluctuation(xf, times);
  } else if (mode == "general") {
    const auto trend = detrend(xf, i_d);
    std::vector<double> sigma_d;
    if (!sigma_d_csv.empty()) {
      std::ifstream sf(sigma_d_csv);
      if (!sf) throw ConfigError("cannot open sigma_d csv '" + sigma_d_csv + "'");
      sigma_d = read_excitation_csv(sf).xf.sigma;
      sigma_d_source = "csv:" + sigma_d_csv;
    } else if (sigma_d_const > 0.0) {
      sigma_d.assign(xf.sigma.size(), sigma_d_const);
      sigma_d_source = "constant";
    } else {
      sigma_d = ericson_direct_estimate(xf, trend);
      sigma_d_source = "ericson-variance-estimate";
    }
    out = reconstruct_general(xf, trend, sigma_d, t_dir, times);
  } else {
    throw CLI::ValidationError("--mode", "must be amplitude|fluctuation|general");
  }

  const auto dir = prepare_out_dir(rc);
  {
    auto f = open_out(dir / "recon.csv");
    KeyValues meta{{"input", input}, {"mode", mode}};
    KeyValues echo = config_echo(rc);
    meta.insert(meta.end(), echo.begin(), echo.end());
    write_time_amplitude_csv(f, out, period, t_dir, meta);
  }

  // report: fringe minimum near half a revolution, resolution, optional NRMSE
  const auto power = out.power();
  double fringe_t = std::numeric_limits<double>::quiet_NaN();
  double fringe_depth = 0.0;
  {
    std::size_t lo = 0, hi = out.times.size();
    while (lo < hi && out.times.t[lo] < 0.3 * period) ++lo;
    while (hi > lo && out.times.t[hi - 1] > 0.7 * period) --hi;
    if (hi - lo >= 5) {
      std::span<const double> w(power.data() + lo, hi - lo);
      auto maxima = local_maxima(w);
      if (maxima.size() >= 2) {
        std::sort(maxima.begin(), maxima.end(),
                  [&](std::size_t a, std::size_t b) { return w[a] > w[b]; });
        std::size_t a = maxima[0], b = maxima[1];
        if (a > b) std::swap(a, b);
        if (b - a >= 2) {
          std::size_t im = a + 1;
          for (std::size_t i = a + 1; i < b; ++i)
            if (w[i] < w[im]) im = i;
          fringe_t = out.times.t[lo + im];
          double peak = *std::max_element(power.begin(), power.end());
          fringe_depth = (std::min(w[a], w[b]) - w[im]) / peak;
        }
      }
    }
  }

  double nrmse = std::numeric_limits<double>::quiet_NaN();
  if (!truth_path.empty()) {
    std::ifstream tf(truth_path);
    if (!tf) throw ConfigError("cannot open truth csv '" + truth_path + "'");
    // truth: a time-amplitude csv on the same grid
    std::string line;
    std::vector<double> tt, tp;
    std::getline(tf, line);  // header comments start with '#'
    while (line.size() && line[0] == '#') std::getline(tf, line);
    if (line != "t_invMeV,t_over_T,re_P,im_P,absP2")
      throw std::invalid_argument("truth csv: unexpected header");
    while (std::getline(tf, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto cells = split_csv_line(line);
      if (cells.size() != 5) throw std::invalid_argument("truth csv: ragged row");
      tt.push_back(parse_double(cells[0], "t"));
      tp.push_back(parse_double(cells[4], "absP2"));
    }
    if (tt.size() != power.size())
      throw std::invalid_argument("truth csv: grid size mismatch");
    for (std::size_t i = 0; i < tt.size(); ++i)
      if (std::abs(tt[i] - out.times.t[i]) > 1e-9)
        throw std::invalid_argument("truth csv: grid mismatch");
    nrmse = nrmse_peak_normalized(power, tp);
  }

  {
    auto f = open_out(dir / "recon_report.txt");
    f << "input = " << input << '\n';
    f << "mode = " << mode << '\n';
    f << "rows = " << xf.sigma.size() << '\n';
    f << "window_I_mev = " << format_double(xf.window()) << '\n';
    f << "resolution_invmev = " << format_double(out.resolution) << '\n';
    f << "t_dir = " << format_double(t_dir) << '\n';
    f << "sigma_d_source = " << sigma_d_source << '\n';
    f << "fringe_min_t_invMeV = " << format_double(fringe_t) << '\n';
    f << "fringe_min_t_over_T = " << format_double(fringe_t / period) << '\n';
    f << "fringe_depth_rel_peak = " << format_double(fringe_depth) << '\n';
    f << "nrmse_vs_truth = " << format_double(nrmse) << '\n';
  }
  std::cout << "recon: fringe min at t = " << fringe_t << " (t/T = "
            << fringe_t / period << "), resolution " << out.resolution
            << " 1/MeV\n";
  return 0;
}

// ----------------------------------------------------------------- figures

// common model constants of the three reference sets, echoed into every
// figure csv
std::string figure_echo() {
  const ModelParams p = reference_params(0.01, 3.0);
  std::ostringstream ss;
  ss << "phi=" << format_double(p.phi) << " jbar=" << format_double(p.j_bar)
     << " hbar_omega_mev=" << format_double(p.hbar_omega)
     << " gamma_mev=" << format_double(p.gamma) << " sets=";
  const auto& sets = reference_parameter_sets();
  for (std::size_t s = 0; s < sets.size(); ++s)
    ss << (s ? "," : "") << sets[s].label;
  return ss.str();
}

void write_fig1(const fs::path& dir, const Fig1Bundle& b) {
  const auto& sets = reference_parameter_sets();
  const char* names[4] = {"0.375T", "0.4375T", "0.5T", "0.625T"};
  for (std::size_t r = 0; r < b.times.size(); ++r) {
    auto f = open_out(dir / ("fig1_t" + std::string(names[r]) + ".csv"));
    f << "# " << figure_echo() << '\n';
    f << "# norm_A=" << format_double(b.norm_a)
      << " t_invMeV=" << format_double(b.times[r]) << '\n';
    f << "theta_deg";
    for (const auto& s : sets) f << ',' << s.label;
    f << '\n';
    for (std::size_t i = 0; i < b.angles.size(); ++i) {
      f << format_double(rad_to_deg(b.angles.theta[i]));
      for (std::size_t s = 0; s < sets.size(); ++s)
        f << ',' << format_double(b.values[r][s][i]);
      f << '\n';
    }
  }
}

void write_fig2(const fs::path& dir, const Fig2Bundle& b, double period) {
  const auto& sets = reference_parameter_sets();
  const char* names[2] = {"180", "170.6"};
  for (std::size_t a = 0; a < b.angles.size(); ++a) {
    auto f = open_out(dir / ("fig2_theta" + std::string(names[a]) + ".csv"));
    f << "# " << figure_echo() << '\n';
    f << "# norm_A=" << format_double(b.norm_a)
      << " theta_deg=" << names[a] << '\n';
    f << "t_invMeV,t_over_T";
    for (const auto& s : sets) f << ',' << s.label;
    f << '\n';
    for (std::size_t i = 0; i < b.times.size(); ++i) {
      f << format_double(b.times[i]) << ',' << format_double(b.times[i] / period);
      for (std::size_t s = 0; s < sets.size(); ++s)
        f << ',' << format_double(b.values[a][s][i]);
      f << '\n';
    }
  }
}

void write_fig3(const fs::path& dir, const Fig3Bundle& b) {
  const auto& sets = reference_parameter_sets();
  const char* names[2] = {"180", "170.6"};
  for (std::size_t a = 0; a < b.angles.size(); ++a) {
    auto f = open_out(dir / ("fig3_theta" + std::string(names[a]) + ".csv"));
    f << "# " << figure_echo() << '\n';
    f << "# theta_deg=" << names[a] << '\n';
    f << "eps_MeV";
    for (const auto& s : sets) f << ',' << s.label;
    f << '\n';
    for (std::size_t i = 0; i < b.epsilons.size(); ++i) {
      f << format_double(b.epsilons[i]);
      for (std::size_t s = 0; s < sets.size(); ++s)
        f << ',' << format_double(b.values[a][s][i]);
      f << '\n';
    }
  }
}

double max_pairwise_diff(const std::vector<std::vector<double>>& curves) {
  double m = 0.0;
  for (std::size_t a = 0; a < curves.size(); ++a)
    for (std::size_t b = a + 1; b < curves.size(); ++b)
      for (std::size_t i = 0; i < curves[a].size(); ++i)
        m = std::max(m, std::abs(curves[a][i] - curves[b][i]));
  return m;
}

int cmd_figures(const GlobalOpts& g, const std::string& which, bool check) {
  RunConfig rc = load_config(g);
  const auto dir = prepare_out_dir(rc);
  const ModelParams ref = reference_params(0.01, 3.0);
  const double period = ref.period();
  bool ok = true;
  std::ostringstream summary;

  if (which == "fig1") {
    const auto b = build_fig1(0.1, g.threads);
    write_fig1(dir, b);
    // contrast ordering at t = T/2 and flat-time insensitivity
    std::vector<double> contrast(3);
    for (std::size_t s = 0; s < 3; ++s) {
      PowerSpectrum ps{reference_params(reference_parameter_sets()[s].beta,
                                        reference_parameter_sets()[s].d),
                       b.angles,
                       TimeGrid{{b.times[2]}},
                       {b.values[2][s]},
                       b.norm_a};
      contrast[s] =
          fringe_contrast(ps, b.times[2], deg_to_rad(150.0), deg_to_rad(179.9));
    }
    const double d_mid = max_pairwise_diff(b.values[2]);
    const double d_lo = max_pairwise_diff(b.values[0]);
    const double d_hi = max_pairwise_diff(b.values[3]);
    const bool ordering = contrast[0] > contrast[1] && contrast[1] > contrast[2];
    const bool insensitive = d_lo < 0.25 * d_mid && d_hi < 0.25 * d_mid;
    ok = ordering && insensitive;
    summary << "contrast_T_half = " << contrast[0] << ", " << contrast[1] << ", "
            << contrast[2] << "\n"
            << "ordering_decreasing = " << (ordering ? "pass" : "fail") << "\n"
            << "maxdiff_3T8_over_T2 = " << d_lo / d_mid << "\n"
            << "maxdiff_5T8_over_T2 = " << d_hi / d_mid << "\n"
            << "insensitive_off_peak = " << (insensitive ? "pass" : "fail") << "\n";
  } else if (which == "fig2") {
    const auto b = build_fig2();
    write_fig2(dir, b, period);
    // minimum depth ordering at 170.6 deg and insensitivity at 180 deg
    std::vector<double> minval(3, 1e300);
    for (std::size_t s = 0; s < 3; ++s) {
      const auto& y = b.values[1][s];
      for (std::size_t i = 1; i + 1 < y.size(); ++i) {
        const double t = b.times[i];
        if (t < 0.35 * period || t > 0.65 * period) continue;
        if (y[i] < y[i - 1] && y[i] < y[i + 1]) minval[s] = std::min(minval[s], y[i]);
      }
    }
    const double d180 = max_pairwise_diff(b.values[0]);
    const double d170 = max_pairwise_diff(b.values[1]);
    const bool deeper = minval[0] < minval[1] && minval[1] < minval[2];
    const bool insensitive = d180 < 0.25 * d170;
    ok = deeper && insensitive;
    summary << "min_at_170.6 = " << minval[0] << ", " << minval[1] << ", "
            << minval[2] << "\n"
            << "deeper_for_smaller_beta = " << (deeper ? "pass" : "fail") << "\n"
            << "maxdiff_180_over_170.6 = " << d180 / d170 << "\n"
            << "insensitive_at_180 = " << (insensitive ? "pass" : "fail") << "\n";
  } else if (which == "fig3") {
    const auto b = build_fig3();
    write_fig3(dir, b);
    auto band_diff = [&](std::size_t angle) {
      double m = 0.0;
      for (std::size_t i = 0; i < b.epsilons.size(); ++i) {
        if (b.epsilons[i] < 4.0 || b.epsilons[i] > 8.0) continue;
        m = std::max(m, std::abs(b.values[angle][0][i] - b.values[angle][2][i]));
      }
      return m;
    };
    const double m170 = band_diff(1);
    const double m180 = band_diff(0);
    const bool in_band = m170 >= 0.3 && m170 <= 0.5;
    const bool smaller = m180 <= 0.5 * m170;
    ok = in_band && smaller;
    summary << "maxdiff_C_4to8_170.6 = " << m170 << "\n"
            << "in_band_0.3_0.5 = " << (in_band ? "pass" : "fail") << "\n"
            << "maxdiff_C_4to8_180 = " << m180 << "\n"
            << "factor_two_smaller_at_180 = " << (smaller ? "pass" : "fail") << "\n";
  } else {
    throw CLI::ValidationError("figures", "expected fig1|fig2|fig3");
  }

  {
    auto f = open_out(dir / (which + "_summary.txt"));
    f << summary.str();
  }
  std::cout << summary.str();
  if (check && !ok) return 3;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coherent rotational wave-packet spectra and their "
               "reconstruction from excitation functions"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "run configuration file");
  app.add_option("--out", g.out_dir, "output directory (overrides [output] dir)");
  app.add_option("--seed", g.seed, "override the ensemble base seed");
  app.add_option("--threads", g.threads, "worker threads (speed only)")
      ->check(CLI::Range(1u, 256u));

  auto* spectrum = app.add_subcommand(
      "spectrum", "angular curves of A P(t,theta)/<sigma(theta)>");
  std::string t_list = "0.375T,0.4375T,0.5T,0.625T";
  std::string theta_range = "0:180:0.1";
  std::string fixed_a;
  spectrum->add_option("--t-list", t_list, "times (1/MeV, or multiples like 0.5T)");
  spectrum->add_option("--theta", theta_range, "angle grid lo:hi:step in degrees");
  spectrum->add_option("--fixed-A", fixed_a,
                       "config whose model fixes the normalisation constant");

  auto* autocorr =
      app.add_subcommand("autocorr", "normalised autocorrelation C(eps,theta)");
  std::string eps_range = "0:8:0.02";
  std::string theta_list = "180,170.6";
  autocorr->add_option("--eps", eps_range, "energy grid lo:hi:step in MeV");
  autocorr->add_option("--theta-list", theta_list, "angles in degrees");

  auto* synth =
      app.add_subcommand("synth", "synthetic excitation functions and manifest");
  double theta_deg = 170.6;
  synth->add_option("--theta-deg", theta_deg, "working angle in degrees");

  auto* recon = app.add_subcommand("reconstruct",
                                   "time spectrum from an excitation function");
  std::string input, mode = "fluctuation", t_range = "0.05T:1.5T:0.01";
  std::string truth, sigma_d_csv;
  double i_d = 4.5, t_dir = 0.0, sigma_d_const = 0.0;
  recon->add_option("--input", input, "excitation function csv")->required();
  recon->add_option("--mode", mode, "amplitude|fluctuation|general");
  recon->add_option("--t-grid", t_range, "time grid lo:hi:step (T suffix ok)");
  recon->add_option("--i-d", i_d, "direct variation scale I_d (MeV, general mode)");
  recon->add_option("--t-dir", t_dir, "direct time delay (1/MeV, general mode)");
  recon->add_option("--truth", truth, "time-amplitude csv to compare against");
  recon->add_option("--sigma-d-csv", sigma_d_csv,
                    "direct cross section csv (general mode)");
  recon->add_option("--sigma-d-const", sigma_d_const,
                    "constant direct cross section (general mode)");

  auto* figures = app.add_subcommand("figures", "reference curve bundles");
  std::string which;
  bool check = false;
  figures->add_option("which", which, "fig1|fig2|fig3")->required();
  figures->add_flag("--check", check, "verify the bundle's summary metrics");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (spectrum->parsed()) return cmd_spectrum(g, t_list, theta_range, fixed_a);
    if (autocorr->parsed()) return cmd_autocorr(g, eps_range, theta_list);
    if (synth->parsed()) return cmd_synth(g, theta_deg);
    if (recon->parsed())
      return cmd_reconstruct(g, input, mode, t_range, i_d, t_dir, truth,
                             sigma_d_csv, sigma_d_const);
    if (figures->parsed()) return cmd_figures(g, which, check);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
