#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "esdg/error.hpp"
#include "esdg/reference_element.hpp"
#include "esdg/solver.hpp"

namespace esdg::harness {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "ops-check", "flux-check", "entropy-wave", "pulse-1d",         "sod",
      "sine-shock", "pulse-2d",  "vortex",       "riemann-2d",       "projection-study",
      "burgers-equivalence"};
  return names;
}

/// Everything an experiment driver needs. Sweeps are lists; scalar settings
/// take their per-experiment defaults from `default_spec`.
struct ExperimentSpec {
  std::string experiment;
  std::vector<int> N;
  std::vector<int> K;
  std::vector<double> cfl;
  std::vector<double> log_eps;
  double final_time = 0.0;
  FluxMode flux = FluxMode::eclf;
  QuadratureMode quad = QuadratureMode::gauss2;
  double gamma = 1.4;
  int trials = 1000;
  int output_every = 1;
  int threads = 1;
  bool dump = false;
  std::string out = "results";

  bool operator==(const ExperimentSpec&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw Error(ErrorKind::config_error, key + ": not a number '" + v + "'");
  return x;
}

inline int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, x);
  if (ec != std::errc() || p != end) throw Error(ErrorKind::config_error, key + ": not an integer '" + v + "'");
  return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error(ErrorKind::config_error, key + ": not a boolean '" + v + "'");
}

/// "1..5" expands to 1,2,3,4,5; otherwise a comma list.
inline std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& item : split_list(v)) {
    const auto dots = item.find("..");
    if (dots != std::string::npos) {
      const int a = parse_int(key, trim(item.substr(0, dots))), b = parse_int(key, trim(item.substr(dots + 2)));
      if (b < a) throw Error(ErrorKind::config_error, key + ": empty range '" + item + "'");
      for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
      out.push_back(parse_int(key, item));
    }
  }
  if (out.empty()) throw Error(ErrorKind::config_error, key + ": empty list");
  return out;
}

inline std::vector<double> parse_double_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split_list(v)) out.push_back(parse_double(key, item));
  if (out.empty()) throw Error(ErrorKind::config_error, key + ": empty list");
  return out;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

}  // namespace detail

inline bool is_experiment(const std::string& name) {
  const auto& n = experiment_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

/// Per-experiment defaults, mirroring the published setups.
inline ExperimentSpec default_spec(const std::string& experiment) {
  if (!is_experiment(experiment)) throw Error(ErrorKind::config_error, "unknown experiment '" + experiment + "'");
  ExperimentSpec s;
  s.experiment = experiment;
  s.cfl = {0.125};
  s.log_eps = {1e-4};
  if (experiment == "ops-check") {
    s.N = {1, 2, 3, 4, 5};
    s.K = {1};
  } else if (experiment == "flux-check") {
    s.N = {1};
    s.K = {1};
    s.trials = 1000;
  } else if (experiment == "entropy-wave") {
    s.N = {1, 2, 3, 4, 5};
    s.K = {4, 8, 16, 32, 64};
    s.final_time = 0.7;
    s.flux = FluxMode::eclf;
    s.quad = QuadratureMode::gauss2;
  } else if (experiment == "pulse-1d") {
    s.N = {4};
    s.K = {16};
    s.cfl = {0.5, 0.25, 0.125, 0.0625};
    s.final_time = 2.0;
    s.flux = FluxMode::ec;
  } else if (experiment == "sod") {
    s.N = {4};
    s.K = {32};
    s.final_time = 0.2;
    s.flux = FluxMode::eclf;
  } else if (experiment == "sine-shock") {
    s.N = {4};
    s.K = {40};
    s.cfl = {0.05};
    s.final_time = 1.8;
    s.flux = FluxMode::eclf;
  } else if (experiment == "pulse-2d") {
    s.N = {4};
    s.K = {8};
    s.cfl = {0.5, 0.25, 0.125};
    s.final_time = 2.0;
    s.flux = FluxMode::ec;
    s.quad = QuadratureMode::tri2n;
    s.output_every = 10;
  } else if (experiment == "vortex") {
    s.N = {1, 2};
    s.K = {2, 4, 8, 16};
    s.final_time = 5.0;
    s.flux = FluxMode::eclf;
    s.quad = QuadratureMode::tri2n;
    s.output_every = 50;
  } else if (experiment == "riemann-2d") {
    s.N = {3};
    s.K = {32};
    s.final_time = 0.25;
    s.flux = FluxMode::eclf;
    s.quad = QuadratureMode::tri2n;
    s.output_every = 20;
  } else if (experiment == "projection-study") {
    s.N = {1, 2, 3, 4, 5};
    s.K = {4, 8, 16, 32, 64};
  } else if (experiment == "burgers-equivalence") {
    s.N = {1, 2, 3, 4, 5};
    s.K = {8};
    s.trials = 100;
  }
  return s;
}

inline void validate(const ExperimentSpec& s) {
  for (int n : s.N)
    if (n < 1) throw Error(ErrorKind::config_error, "N: degree must be >= 1");
  for (int k : s.K)
    if (k < 1) throw Error(ErrorKind::config_error, "K: element count must be >= 1");
  for (double c : s.cfl)
    if (!(c > 0.0)) throw Error(ErrorKind::config_error, "cfl: must be > 0");
  for (double e : s.log_eps)
    if (!(e > 0.0)) throw Error(ErrorKind::config_error, "log_eps: must be > 0");
  if (!(s.final_time >= 0.0)) throw Error(ErrorKind::config_error, "T: must be >= 0");
  if (!(s.gamma > 1.0)) throw Error(ErrorKind::config_error, "gamma: must be > 1");
  if (s.trials < 1) throw Error(ErrorKind::config_error, "trials: must be >= 1");
  if (s.output_every < 1) throw Error(ErrorKind::config_error, "output_every: must be >= 1");
  if (s.threads < 1) throw Error(ErrorKind::config_error, "threads: must be >= 1");
  if (s.N.empty() || s.K.empty() || s.cfl.empty() || s.log_eps.empty())
    throw Error(ErrorKind::config_error, "sweeps must be non-empty");
}

/// Applies one key=value setting.
inline void apply_setting(ExperimentSpec& s, const std::string& key, const std::string& value) {
  using namespace detail;
  try {
    if (key == "N") s.N = parse_int_list(key, value);
    else if (key == "K") s.K = parse_int_list(key, value);
    else if (key == "cfl") s.cfl = parse_double_list(key, value);
    else if (key == "log_eps") s.log_eps = parse_double_list(key, value);
    else if (key == "T") s.final_time = parse_double(key, value);
    else if (key == "flux") s.flux = flux_mode_from_string(value);
    else if (key == "quad") s.quad = quadrature_mode_from_string(value);
    else if (key == "gamma") s.gamma = parse_double(key, value);
    else if (key == "trials") s.trials = parse_int(key, value);
    else if (key == "output_every") s.output_every = parse_int(key, value);
    else if (key == "threads") s.threads = parse_int(key, value);
    else if (key == "dump") s.dump = parse_bool(key, value);
    else if (key == "out") s.out = value;
    else throw Error(ErrorKind::config_error, "unknown key '" + key + "'");
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::config_error) throw;
    throw Error(ErrorKind::config_error, key + ": " + e.what());
  }
}

/// Parses flat key=value text. Lines before any [section] header apply to
/// every experiment; a [name] section applies only to experiment `name`.
/// '#' starts a comment.
inline ExperimentSpec parse_config(const std::string& text, const std::string& experiment) {
  ExperimentSpec s = default_spec(experiment);
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": bad section");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (!is_experiment(section))
        throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": unknown section '" + section + "'");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config_error, "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
    if (!section.empty() && section != experiment) {
      // Still reject unknown keys in other sections so typos surface early.
      ExperimentSpec scratch = default_spec(section);
      apply_setting(scratch, key, value);
      continue;
    }
    apply_setting(s, key, value);
  }
  validate(s);
  return s;
}

inline ExperimentSpec parse_config_file(const std::string& path, const std::string& experiment) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::config_error, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), experiment);
}

/// Canonical text form; parse_config(emit_config(s), s.experiment) == s.
inline std::string emit_config(const ExperimentSpec& s) {
  std::ostringstream os;
  os.precision(17);
  os << "[" << s.experiment << "]\n"
     << "N = " << detail::join(s.N) << "\n"
     << "K = " << detail::join(s.K) << "\n"
     << "cfl = " << detail::join(s.cfl) << "\n"
     << "log_eps = " << detail::join(s.log_eps) << "\n"
     << "T = " << s.final_time << "\n"
     << "flux = " << to_string(s.flux) << "\n"
     << "quad = " << to_string(s.quad) << "\n"
     << "gamma = " << s.gamma << "\n"
     << "trials = " << s.trials << "\n"
     << "output_every = " << s.output_every << "\n"
     << "threads = " << s.threads << "\n"
     << "dump = " << (s.dump ? "true" : "false") << "\n"
     << "out = " << s.out << "\n";
  return os.str();
}

}  // namespace esdg::harness
