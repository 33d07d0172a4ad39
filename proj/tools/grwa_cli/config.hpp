#pragma once

// Scenario configuration: a TOML file, then command-line overrides. Every
// key is checked; unknown keys are errors.

#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <toml.hpp>

#include "grwa/dynamics.hpp"
#include "grwa/error.hpp"
#include "grwa/io.hpp"
#include "grwa/model.hpp"
#include "grwa/workflows.hpp"

namespace grwa::cli {

struct time_range {
  double start = 0.0, stop = 0.0, step = 1.0;
};

struct kitten_config {
  double stop = 0.0;         // end of the long scan; 0 = 1.3 x the lambda^-4 guess
  double step = 1000.0;      // long-scan sampling step
  int grid_resolution = 96;  // coarse grid for the long scan
  std::vector<int> fractions{1, 2, 3};
  double half_width = 12000.0;
  double fine_step = 25.0;
};

struct scenario_config {
  double omega = 1.0, delta = 1.0, lambda = 0.1;
  double alpha_re = 0.0, alpha_im = 0.0;
  bell_sign sign = bell_sign::minus;
  truncation_options truncation;
  double grid_extent = 0.0;  // 0 = default extent
  int grid_resolution = 256;
  int theta_resolution = 1024;
  double theta = 0.0;  // quadrature angle (radians) for the "variance" measure
  std::vector<double> times{0.0};
  std::vector<double> sweep_lambdas;  // optional lambda sweep for `scan`
  std::string output_dir = "out";
  std::vector<std::string> measures{"sigma_z", "entropy"};
  int threads = 0;
  kitten_config kitten;

  model_params params() const { return {omega, delta, lambda}; }
  initial_state_spec state() const { return {complex{alpha_re, alpha_im}, sign, params(), initial_kind::bell}; }

  // Canonical text of every field that affects numerical output (not the
  // output directory or thread count), used for the provenance digest.
  std::string canonical() const {
    io::json j{{"omega", omega},
               {"delta", delta},
               {"lambda", lambda},
               {"alpha_re", alpha_re},
               {"alpha_im", alpha_im},
               {"bell_sign", sign == bell_sign::plus ? "+" : "-"},
               {"truncation", {{"initial_n", truncation.initial_n},
                               {"norm_tail", truncation.norm_tail},
                               {"hard_cap", truncation.hard_cap}}},
               {"grid", {{"extent", grid_extent}, {"resolution", grid_resolution},
                         {"theta_resolution", theta_resolution}}},
               {"theta", theta},
               {"times", times},
               {"sweep_lambdas", sweep_lambdas},
               {"measures", measures},
               {"kitten", {{"stop", kitten.stop}, {"step", kitten.step},
                           {"grid_resolution", kitten.grid_resolution}, {"fractions", kitten.fractions},
                           {"half_width", kitten.half_width}, {"fine_step", kitten.fine_step}}}};
    return j.dump();
  }
  std::string digest() const { return io::digest(canonical()); }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& what) { throw error(errc::config, what); }

inline void check_keys(const toml::table& t, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : t) {
    const std::string key(k.str());
    if (!allowed.contains(key)) config_error("unknown key '" + where + key + "'");
  }
}

inline double get_number(const toml::node& n, const std::string& name) {
  if (auto v = n.value<double>()) return *v;
  config_error("'" + name + "' must be a number");
}

inline int get_int(const toml::node& n, const std::string& name) {
  if (auto v = n.value<int64_t>()) return static_cast<int>(*v);
  config_error("'" + name + "' must be an integer");
}

inline std::vector<double> get_numbers(const toml::node& n, const std::string& name) {
  const auto* arr = n.as_array();
  if (!arr) config_error("'" + name + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *arr) out.push_back(get_number(e, name));
  return out;
}

inline bell_sign parse_sign(const std::string& s) {
  if (s == "+" || s == "plus") return bell_sign::plus;
  if (s == "-" || s == "minus") return bell_sign::minus;
  config_error("bell_sign must be \"+\" or \"-\"");
}

}  // namespace detail

/// Parses "a,b,c" or "start:stop:step".
inline std::vector<double> parse_times(const std::string& text) {
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      detail::config_error("invalid time value '" + s + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) detail::config_error("time range must be start:stop:step");
    return uniform_times(to_double(parts[0]), to_double(parts[1]), to_double(parts[2]));
  }
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  if (out.empty()) detail::config_error("empty time list");
  return out;
}

inline void validate(const scenario_config& c) {
  (void)c.params();  // throws invalid_argument for bad physics constants
  auto check = [](bool ok, const std::string& what) {
    if (!ok) detail::config_error(what);
  };
  check(std::isfinite(c.alpha_re) && std::isfinite(c.alpha_im), "alpha must be finite");
  check(c.grid_extent >= 0.0, "grid.extent must be nonnegative");
  check(c.grid_resolution >= 2, "grid.resolution must be at least 2");
  check(c.theta_resolution >= 3, "grid.theta_resolution must be at least 3");
  check(!c.times.empty(), "times must not be empty");
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    check(std::isfinite(c.times[i]), "times must be finite");
    check(i == 0 || c.times[i] > c.times[i - 1], "times must be strictly increasing");
  }
  for (double l : c.sweep_lambdas) check(std::isfinite(l) && l >= 0.0, "sweep lambdas must be nonnegative");
  check(c.truncation.norm_tail > 0.0, "truncation.norm_tail must be positive");
  check(c.truncation.hard_cap >= 1, "truncation.hard_cap must be positive");
  check(c.truncation.initial_n >= 0, "truncation.initial_n must be nonnegative");
  for (const auto& m : c.measures)
    check(std::find(known_measures().begin(), known_measures().end(), m) != known_measures().end(),
          "unknown measure '" + m + "'");
  check(c.kitten.step > 0.0 && c.kitten.fine_step > 0.0 && c.kitten.half_width > 0.0,
        "kitten steps and half_width must be positive");
  check(c.kitten.stop >= 0.0, "kitten.stop must be nonnegative");
  check(c.kitten.grid_resolution >= 2, "kitten.grid_resolution must be at least 2");
  for (int q : c.kitten.fractions) check(q >= 1, "kitten.fractions must be positive integers");
  check(c.threads >= 0, "threads must be nonnegative");
}

inline scenario_config parse_config(const toml::table& root) {
  using detail::check_keys;
  using detail::get_int;
  using detail::get_number;
  scenario_config c;
  check_keys(root, {"omega", "delta", "lambda", "alpha_re", "alpha_im", "bell_sign", "truncation", "grid",
                    "theta", "times", "sweep", "output_dir", "measures", "threads", "kitten"},
             "");
  if (auto n = root["omega"]) c.omega = get_number(*n.node(), "omega");
  if (auto n = root["delta"]) c.delta = get_number(*n.node(), "delta");
  if (auto n = root["lambda"]) c.lambda = get_number(*n.node(), "lambda");
  if (auto n = root["alpha_re"]) c.alpha_re = get_number(*n.node(), "alpha_re");
  if (auto n = root["alpha_im"]) c.alpha_im = get_number(*n.node(), "alpha_im");
  if (auto n = root["theta"]) c.theta = get_number(*n.node(), "theta");
  if (auto n = root["threads"]) c.threads = get_int(*n.node(), "threads");
  if (auto n = root["bell_sign"]) {
    auto s = n.value<std::string>();
    if (!s) detail::config_error("bell_sign must be a string");
    c.sign = detail::parse_sign(*s);
  }
  if (auto n = root["output_dir"]) {
    auto s = n.value<std::string>();
    if (!s) detail::config_error("output_dir must be a string");
    c.output_dir = *s;
  }
  if (auto n = root["measures"]) {
    const auto* arr = n.as_array();
    if (!arr) detail::config_error("measures must be an array of strings");
    c.measures.clear();
    for (const auto& e : *arr) {
      auto s = e.value<std::string>();
      if (!s) detail::config_error("measures must be an array of strings");
      c.measures.push_back(*s);
    }
  }
  if (auto n = root["truncation"]) {
    const auto* t = n.as_table();
    if (!t) detail::config_error("truncation must be a table");
    check_keys(*t, {"initial_n", "norm_tail", "hard_cap"}, "truncation.");
    if (auto v = (*t)["initial_n"]) c.truncation.initial_n = get_int(*v.node(), "truncation.initial_n");
    if (auto v = (*t)["norm_tail"]) c.truncation.norm_tail = get_number(*v.node(), "truncation.norm_tail");
    if (auto v = (*t)["hard_cap"]) c.truncation.hard_cap = get_int(*v.node(), "truncation.hard_cap");
  }
  if (auto n = root["grid"]) {
    const auto* t = n.as_table();
    if (!t) detail::config_error("grid must be a table");
    check_keys(*t, {"extent", "resolution", "theta_resolution"}, "grid.");
    if (auto v = (*t)["extent"]) c.grid_extent = get_number(*v.node(), "grid.extent");
    if (auto v = (*t)["resolution"]) c.grid_resolution = get_int(*v.node(), "grid.resolution");
    if (auto v = (*t)["theta_resolution"]) c.theta_resolution = get_int(*v.node(), "grid.theta_resolution");
  }
  if (auto n = root["times"]) {
    if (n.is_array()) {
      c.times = detail::get_numbers(*n.node(), "times");
    } else if (const auto* t = n.as_table()) {
      check_keys(*t, {"list", "start", "stop", "step"}, "times.");
      if (auto v = (*t)["list"]) {
        if ((*t)["start"] || (*t)["stop"] || (*t)["step"])
          detail::config_error("times: give either list or start/stop/step");
        c.times = detail::get_numbers(*v.node(), "times.list");
      } else {
        time_range r;
        if (!(*t)["stop"] || !(*t)["step"]) detail::config_error("times: start/stop/step range needs stop and step");
        if (auto v = (*t)["start"]) r.start = get_number(*v.node(), "times.start");
        r.stop = get_number(*(*t)["stop"].node(), "times.stop");
        r.step = get_number(*(*t)["step"].node(), "times.step");
        c.times = uniform_times(r.start, r.stop, r.step);
      }
    } else {
      detail::config_error("times must be an array or a table");
    }
  }
  if (auto n = root["sweep"]) {
    const auto* t = n.as_table();
    if (!t) detail::config_error("sweep must be a table");
    check_keys(*t, {"lambdas"}, "sweep.");
    if (auto v = (*t)["lambdas"]) c.sweep_lambdas = detail::get_numbers(*v.node(), "sweep.lambdas");
  }
  if (auto n = root["kitten"]) {
    const auto* t = n.as_table();
    if (!t) detail::config_error("kitten must be a table");
    check_keys(*t, {"stop", "step", "grid_resolution", "fractions", "half_width", "fine_step"}, "kitten.");
    if (auto v = (*t)["stop"]) c.kitten.stop = get_number(*v.node(), "kitten.stop");
    if (auto v = (*t)["step"]) c.kitten.step = get_number(*v.node(), "kitten.step");
    if (auto v = (*t)["grid_resolution"]) c.kitten.grid_resolution = get_int(*v.node(), "kitten.grid_resolution");
    if (auto v = (*t)["half_width"]) c.kitten.half_width = get_number(*v.node(), "kitten.half_width");
    if (auto v = (*t)["fine_step"]) c.kitten.fine_step = get_number(*v.node(), "kitten.fine_step");
    if (auto v = (*t)["fractions"]) {
      const auto* arr = v.as_array();
      if (!arr) detail::config_error("kitten.fractions must be an array of integers");
      c.kitten.fractions.clear();
      for (const auto& e : *arr) c.kitten.fractions.push_back(get_int(e, "kitten.fractions"));
    }
  }
  return c;
}

inline scenario_config load_config(const std::string& path) {
  try {
    return parse_config(toml::parse_file(path));
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "cannot parse " << path << ": " << e.description() << " at line " << e.source().begin.line;
    throw error(errc::config, msg.str());
  }
}

}  // namespace grwa::cli
