#pragma once

// CSV serialization for excitation functions and reconstructed time
// amplitudes. Data rows use shortest round-trip formatting, and every file
// starts with '#' comment lines of key=value metadata so outputs are
// self-describing.

#include <cctype>
#include <charconv>
#include <complex>
#include <cstddef>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ensemble.hpp"
#include "reconstruct.hpp"

namespace rotspec {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("could not parse number '" + s + "' for " + what);
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

inline void write_comment_kv(std::ostream& os, const KeyValues& kv) {
  os << '#';
  for (const auto& [k, v] : kv) os << ' ' << k << '=' << v;
  os << '\n';
}

// Layout: one metadata comment line, optional extra comment lines, a header
// row `E_MeV,sigma[,re_f,im_f]`, then one row per energy step.
inline void write_excitation_csv(std::ostream& os, const ExcitationFunction& xf,
                                 const KeyValues& extra_meta = {},
                                 const std::vector<std::string>& comments = {}) {
  KeyValues meta{{"theta_deg", format_double(rad_to_deg(xf.theta))},
                 {"e_min", format_double(xf.e_min)},
                 {"delta_e", format_double(xf.delta_e)}};
  meta.insert(meta.end(), extra_meta.begin(), extra_meta.end());
  write_comment_kv(os, meta);
  for (const auto& c : comments) os << "# " << c << '\n';
  os << (xf.has_amplitude() ? "E_MeV,sigma,re_f,im_f" : "E_MeV,sigma") << '\n';
  for (std::size_t n = 0; n < xf.sigma.size(); ++n) {
    os << format_double(xf.energy(n)) << ',' << format_double(xf.sigma[n]);
    if (xf.has_amplitude())
      os << ',' << format_double(xf.amplitude[n].real()) << ','
         << format_double(xf.amplitude[n].imag());
    os << '\n';
  }
}

struct LoadedExcitation {
  ExcitationFunction xf;
  std::map<std::string, std::string> meta;
};

inline LoadedExcitation read_excitation_csv(std::istream& is) {
  LoadedExcitation out;
  std::string line;
  std::vector<std::string> header;
  // comments and header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string tok;
      while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos)
          out.meta[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    header = split_csv_line(line);
    break;
  }
  if (header.size() < 2 || header[0] != "E_MeV" || header[1] != "sigma")
    throw std::invalid_argument("excitation csv: expected header E_MeV,sigma[,re_f,im_f]");
  const bool with_amp = header.size() >= 4;

  std::vector<double> energy;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument("excitation csv: ragged row '" + line + "'");
    energy.push_back(parse_double(cells[0], "E_MeV"));
    out.xf.sigma.push_back(parse_double(cells[1], "sigma"));
    if (with_amp)
      out.xf.amplitude.emplace_back(parse_double(cells[2], "re_f"),
                                    parse_double(cells[3], "im_f"));
  }
  if (energy.size() < 2)
    throw std::invalid_argument("excitation csv: need at least 2 rows");

  if (auto it = out.meta.find("e_min"); it != out.meta.end())
    out.xf.e_min = parse_double(it->second, "e_min");
  else
    out.xf.e_min = energy.front();
  if (auto it = out.meta.find("delta_e"); it != out.meta.end())
    out.xf.delta_e = parse_double(it->second, "delta_e");
  else
    out.xf.delta_e = energy[1] - energy[0];
  if (auto it = out.meta.find("theta_deg"); it != out.meta.end())
    out.xf.theta = deg_to_rad(parse_double(it->second, "theta_deg"));
  for (std::size_t n = 0; n + 1 < energy.size(); ++n) {
    const double step = energy[n + 1] - energy[n];
    if (std::abs(step - out.xf.delta_e) > 1e-6 * std::max(1.0, std::abs(out.xf.delta_e)))
      throw std::invalid_argument("excitation csv: energy grid not equidistant");
  }
  out.xf.validate();
  return out;
}

// Columns t_invMeV,t_over_T,re_P,im_P,absP2; metadata records the working
// angle, window, resolution, direct time shift and source route.
inline void write_time_amplitude_csv(std::ostream& os, const TimeAmplitude& ta,
                                     double period, double t_dir = 0.0,
                                     const KeyValues& extra_meta = {},
                                     const std::vector<std::string>& comments = {}) {
  KeyValues meta{{"theta_deg", format_double(rad_to_deg(ta.theta))},
                 {"window_I_mev", format_double(1.0 / ta.resolution)},
                 {"resolution_invmev", format_double(ta.resolution)},
                 {"t_dir", format_double(t_dir)},
                 {"source", to_string(ta.source)}};
  meta.insert(meta.end(), extra_meta.begin(), extra_meta.end());
  write_comment_kv(os, meta);
  for (const auto& c : comments) os << "# " << c << '\n';
  os << "t_invMeV,t_over_T,re_P,im_P,absP2\n";
  for (std::size_t i = 0; i < ta.values.size(); ++i) {
    const double t = ta.times.t[i];
    os << format_double(t) << ',' << format_double(t / period) << ','
       << format_double(ta.values[i].real()) << ','
       << format_double(ta.values[i].imag()) << ','
       << format_double(std::norm(ta.values[i])) << '\n';
  }
}

}  // namespace rotspec
