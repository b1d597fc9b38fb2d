#pragma once

// Run configuration: a flat `key = value` text format with '#' comments and
// sections [model], [ensemble], [grid], [direct], [output]. Unknown sections
// or keys are hard errors so typos cannot pass silently. The same writer
// produces manifests that re-parse to an equivalent configuration.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "csv.hpp"
#include "ensemble.hpp"
#include "model.hpp"

namespace rotspec {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  ModelParams model;
  EnsembleConfig ensemble;
  EnergyGridSpec grid;
  DirectAmplitudeSpec direct;
  std::string output_dir = ".";
};

// Paper-less defaults: the reference parameter combination with a one-percent
// phase-relaxation width, a paper-scale energy window centred on the
// rotational band, and a 75% constant direct amplitude.
inline RunConfig default_run_config() {
  RunConfig rc;
  rc.model = ModelParams{};  // phi 0, d 3, j_bar 14, beta 0.01, hw 1.45, gamma 0.3
  rc.ensemble.n_realizations = 1;
  rc.ensemble.base_seed = 12345;
  rc.ensemble.dt = 0.02;
  rc.ensemble.n_time_steps =
      static_cast<int>(std::ceil(14.0 / rc.model.gamma / rc.ensemble.dt - 1e-9));
  rc.grid.delta_e = 0.133;
  rc.grid.n_steps = 78;
  // centre the window on the rotational band's intensity centroid
  rc.grid.e_min = line_intensity_centroid(rc.model) - 0.5 * rc.grid.window();
  rc.direct.magnitude_poly = {1.0};
  rc.direct.phase0 = 1.4;
  rc.direct.t_dir = 0.0;
  rc.direct.target_direct_fraction = 0.75;
  return rc;
}

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<double> parse_double_list(const std::string& s,
                                             const std::string& where) {
  std::vector<double> out;
  std::string cur;
  for (char ch : s + ",") {
    if (ch == ',' || ch == ' ') {
      if (!trim(cur).empty()) out.push_back(parse_double(trim(cur), where));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list for " + where);
  return out;
}

}  // namespace detail

inline RunConfig parse_config(std::istream& is, const std::string& name = "<config>") {
  RunConfig rc = default_run_config();
  bool t_max_given = false;
  double t_max_req = 0.0;
  bool e_min_given = false;

  std::string line, section;
  int lineno = 0;
  auto fail = [&](const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(lineno) + ": " + msg);
  };

  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("malformed section header");
      section = line.substr(1, line.size() - 2);
      if (section != "model" && section != "ensemble" && section != "grid" &&
          section != "direct" && section != "output")
        fail("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail("expected key = value");

    try {
      if (section == "model") {
        if (key == "phi") rc.model.phi = parse_double(val, key);
        else if (key == "d") rc.model.d = parse_double(val, key);
        else if (key == "jbar") rc.model.j_bar = parse_double(val, key);
        else if (key == "beta_mev") rc.model.beta = parse_double(val, key);
        else if (key == "hbar_omega_mev") rc.model.hbar_omega = parse_double(val, key);
        else if (key == "gamma_mev") rc.model.gamma = parse_double(val, key);
        else if (key == "jmax") rc.model.j_max = static_cast<int>(parse_double(val, key));
        else if (key == "level_spacing_mev") rc.model.level_spacing = parse_double(val, key);
        else fail("unknown key '" + key + "' in [model]");
      } else if (section == "ensemble") {
        if (key == "n_realizations")
          rc.ensemble.n_realizations = static_cast<int>(parse_double(val, key));
        else if (key == "seed")
          rc.ensemble.base_seed = std::stoull(val);
        else if (key == "dt")
          rc.ensemble.dt = parse_double(val, key);
        else if (key == "t_max") {
          t_max_req = parse_double(val, key);
          t_max_given = true;
        } else
          fail("unknown key '" + key + "' in [ensemble]");
      } else if (section == "grid") {
        if (key == "e_min_mev") {
          rc.grid.e_min = parse_double(val, key);
          e_min_given = true;
        } else if (key == "delta_e_mev")
          rc.grid.delta_e = parse_double(val, key);
        else if (key == "n_steps")
          rc.grid.n_steps = static_cast<int>(parse_double(val, key));
        else
          fail("unknown key '" + key + "' in [grid]");
      } else if (section == "direct") {
        if (key == "magnitude_poly")
          rc.direct.magnitude_poly = detail::parse_double_list(val, key);
        else if (key == "phase0")
          rc.direct.phase0 = parse_double(val, key);
        else if (key == "t_dir")
          rc.direct.t_dir = parse_double(val, key);
        else if (key == "target_direct_fraction")
          rc.direct.target_direct_fraction = parse_double(val, key);
        else
          fail("unknown key '" + key + "' in [direct]");
      } else if (section == "output") {
        if (key == "dir") rc.output_dir = val;
        else fail("unknown key '" + key + "' in [output]");
      } else {
        fail("key outside of any section");
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }

  if (!t_max_given) t_max_req = 14.0 / rc.model.gamma;
  rc.ensemble.n_time_steps =
      static_cast<int>(std::ceil(t_max_req / rc.ensemble.dt - 1e-9));
  if (!e_min_given)
    rc.grid.e_min = line_intensity_centroid(rc.model) - 0.5 * rc.grid.window();
  return rc;
}

inline RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(f, path);
}

inline void write_config(std::ostream& os, const RunConfig& rc) {
  os << "[model]\n";
  os << "phi = " << format_double(rc.model.phi) << '\n';
  os << "d = " << format_double(rc.model.d) << '\n';
  os << "jbar = " << format_double(rc.model.j_bar) << '\n';
  os << "beta_mev = " << format_double(rc.model.beta) << '\n';
  os << "hbar_omega_mev = " << format_double(rc.model.hbar_omega) << '\n';
  os << "gamma_mev = " << format_double(rc.model.gamma) << '\n';
  if (rc.model.j_max) os << "jmax = " << *rc.model.j_max << '\n';
  if (rc.model.level_spacing)
    os << "level_spacing_mev = " << format_double(*rc.model.level_spacing) << '\n';
  os << "\n[ensemble]\n";
  os << "n_realizations = " << rc.ensemble.n_realizations << '\n';
  os << "seed = " << rc.ensemble.base_seed << '\n';
  os << "dt = " << format_double(rc.ensemble.dt) << '\n';
  os << "t_max = " << format_double(rc.ensemble.t_max()) << '\n';
  os << "\n[grid]\n";
  os << "e_min_mev = " << format_double(rc.grid.e_min) << '\n';
  os << "delta_e_mev = " << format_double(rc.grid.delta_e) << '\n';
  os << "n_steps = " << rc.grid.n_steps << '\n';
  os << "\n[direct]\n";
  os << "magnitude_poly = ";
  for (std::size_t i = 0; i < rc.direct.magnitude_poly.size(); ++i)
    os << (i ? "," : "") << format_double(rc.direct.magnitude_poly[i]);
  os << '\n';
  os << "phase0 = " << format_double(rc.direct.phase0) << '\n';
  os << "t_dir = " << format_double(rc.direct.t_dir) << '\n';
  os << "target_direct_fraction = " << format_double(rc.direct.target_direct_fraction)
     << '\n';
  os << "\n[output]\n";
  os << "dir = " << rc.output_dir << '\n';
}

// Flattened key=value echo for CSV comment headers.
inline KeyValues config_echo(const RunConfig& rc) {
  KeyValues kv;
  kv.emplace_back("model.phi", format_double(rc.model.phi));
  kv.emplace_back("model.d", format_double(rc.model.d));
  kv.emplace_back("model.jbar", format_double(rc.model.j_bar));
  kv.emplace_back("model.beta_mev", format_double(rc.model.beta));
  kv.emplace_back("model.hbar_omega_mev", format_double(rc.model.hbar_omega));
  kv.emplace_back("model.gamma_mev", format_double(rc.model.gamma));
  if (rc.model.j_max) kv.emplace_back("model.jmax", std::to_string(*rc.model.j_max));
  if (rc.model.level_spacing)
    kv.emplace_back("model.level_spacing_mev", format_double(*rc.model.level_spacing));
  kv.emplace_back("ensemble.n_realizations",
                  std::to_string(rc.ensemble.n_realizations));
  kv.emplace_back("ensemble.seed", std::to_string(rc.ensemble.base_seed));
  kv.emplace_back("ensemble.dt", format_double(rc.ensemble.dt));
  kv.emplace_back("ensemble.t_max", format_double(rc.ensemble.t_max()));
  kv.emplace_back("grid.e_min_mev", format_double(rc.grid.e_min));
  kv.emplace_back("grid.delta_e_mev", format_double(rc.grid.delta_e));
  kv.emplace_back("grid.n_steps", std::to_string(rc.grid.n_steps));
  return kv;
}

}  // namespace rotspec
