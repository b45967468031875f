#include "eqft/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eqft {

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::defaults() {
  ExperimentConfig c;
  auto& v = c.values_;
  v["experiment.name"] = "all";
  v["experiment.out"] = "results";

  // reference mollifier geometry (momentum scale keeps the x^6-weighted
  // moment quadratures conditioned in double precision)
  v["moments.a_1d"] = "32";
  v["moments.b_1d"] = "64";
  v["moments.half_extent_1d"] = "64";
  v["moments.points_1d"] = "32768";
  v["moments.a_3d"] = "64";
  v["moments.b_3d"] = "128";
  v["moments.mass_tol"] = "1e-10";
  v["moments.higher_tol"] = "1e-8";
  v["moments.max_order"] = "6";

  v["field.rho_a"] = "1";
  v["field.rho_b"] = "2";
  v["field.chi_a"] = "1";
  v["field.chi_b"] = "2";

  v["sifting.eps_start"] = "0.2";
  v["sifting.eps_count"] = "8";
  v["sifting.eps_ratio"] = "0.5";
  v["sifting.slope_min"] = "6";
  v["sifting.floor"] = "1e-11";
  v["sifting.m2_order"] = "2";
  v["sifting.m2_slope_margin"] = "0.2";

  v["norms.mass"] = "1";
  v["norms.eps_start"] = "0.2";
  v["norms.eps_count"] = "8";
  v["norms.eps_ratio"] = "0.5";
  v["norms.slope_tol"] = "0.05";
  v["norms.gnorm_eps"] = "0.05";
  v["norms.gnorm_tol"] = "1e-6";

  v["zpe.mass"] = "1";
  v["zpe.eps_start"] = "0.2";
  v["zpe.eps_count"] = "8";
  v["zpe.decades"] = "1.5";
  v["zpe.slope_tol"] = "0.15";
  v["zpe.band_coefficient"] = "1";
  v["zpe.model_mass"] = "4";
  v["zpe.model_eps_start"] = "0.1";
  v["zpe.model_eps_count"] = "3";
  v["zpe.averaging_eps"] = "0.01";
  v["zpe.averaging_delta_t"] = "2.5";
  v["zpe.averaging_tol"] = "1e-3";

  v["commutators.modes"] = "9";
  v["commutators.n_max"] = "5";
  v["commutators.eps"] = "0.5";
  v["commutators.mass"] = "1";
  v["commutators.zero_tol"] = "1e-12";
  v["commutators.kernel_tol"] = "1e-6";
  v["commutators.r_max"] = "0.75";
  v["commutators.r_count"] = "4";

  v["blocks.modes"] = "9";
  v["blocks.n_max"] = "4";
  v["blocks.mass"] = "1";
  v["blocks.pmax"] = "2";
  v["blocks.eps_start"] = "0.05";
  v["blocks.eps_count"] = "9";
  v["blocks.eps_ratio"] = "0.78";
  v["blocks.slope_min"] = "3";

  v["heisenberg.modes"] = "5";
  v["heisenberg.n_max"] = "4";
  v["heisenberg.power"] = "3";
  v["heisenberg.g"] = "0.1";
  v["heisenberg.mass"] = "1";
  v["heisenberg.pmax"] = "2";
  v["heisenberg.eps"] = "0.5";
  v["heisenberg.dt"] = "0.6";
  v["heisenberg.order_tol"] = "0.1";
  v["fieldeq.eps_coarse"] = "1";
  v["fieldeq.eps_fine"] = "0.5";

  v["scattering.modes"] = "2";
  v["scattering.n_max"] = "4";
  v["scattering.power"] = "3";
  v["scattering.g"] = "0.1";
  v["scattering.mass"] = "2";
  v["scattering.pmax"] = "1";
  v["scattering.eps"] = "1";
  v["scattering.tau"] = "0";
  v["scattering.t_max"] = "1";
  v["scattering.steps"] = "257";
  v["scattering.unitarity_tol"] = "1e-11";
  v["scattering.max_order"] = "4";
  v["scattering.shift_tol"] = "1e-10";
  return c;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c = defaults();
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[') {
      if (t.back() != ']')
        throw std::invalid_argument("config line " + std::to_string(lineno) +
                                    ": unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty section");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key");
    const std::string full = section.empty() ? key : section + "." + key;
    if (!c.has(full))
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown field '" +
                                  full + "'");
    c.values_[full] = value;
  }
  return c;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ExperimentConfig::serialize() const {
  // canonical form: sections sorted, keys sorted within a section
  std::ostringstream out;
  std::string current;
  for (const auto& [full, value] : values_) {
    const auto dot = full.find('.');
    const std::string section = full.substr(0, dot);
    const std::string key = full.substr(dot + 1);
    if (section != current) {
      if (!current.empty()) out << "\n";
      out << "[" << section << "]\n";
      current = section;
    }
    out << key << " = " << value << "\n";
  }
  return out.str();
}

const std::string& ExperimentConfig::str(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw std::invalid_argument("config: unknown field '" + key + "'");
  return it->second;
}

double ExperimentConfig::number(const std::string& key) const {
  const std::string& s = str(key);
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (...) {
    throw std::invalid_argument("config: field '" + key + "' is not a number: '" + s + "'");
  }
}

int ExperimentConfig::integer(const std::string& key) const {
  const double v = number(key);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw std::invalid_argument("config: field '" + key + "' is not an integer");
  return i;
}

void ExperimentConfig::set(const std::string& key, double value) {
  values_[key] = format_number(value);
}

void ExperimentConfig::set(const std::string& key, int value) {
  values_[key] = std::to_string(value);
}

}  // namespace eqft
