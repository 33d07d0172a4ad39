// grwa: command-line front end for the qubit-oscillator simulations.
//
//   grwa <subcommand> [--config file.toml] [--out dir] [overrides...]
//
// Every output file is deterministic for a given configuration. Failures are
// reported as a JSON object on stderr with a nonzero exit status.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "config.hpp"
#include "grwa/fock_oracle.hpp"
#include "grwa/grwa.hpp"
#include "grwa/io.hpp"
#include "grwa/workflows.hpp"

namespace fs = std::filesystem;
using namespace grwa;
using grwa::io::json;

namespace {

struct overrides {
  std::string config_path;
  std::string out;
  int threads = -1;
  std::optional<double> lambda;
  std::string alpha;
  std::string times;
  int grid_res = 0;
  std::vector<std::string> measures;
};

// "re" or "re,im"
complex parse_alpha(const std::string& text) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) return {std::stod(text), 0.0};
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
  } catch (const std::exception&) {
    throw error(errc::config, "invalid --alpha '" + text + "'");
  }
}

cli::scenario_config resolve(const overrides& o) {
  cli::scenario_config c = o.config_path.empty() ? cli::scenario_config{} : cli::load_config(o.config_path);
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.threads >= 0) c.threads = o.threads;
  if (o.lambda) c.lambda = *o.lambda;
  if (!o.alpha.empty()) {
    const auto a = parse_alpha(o.alpha);
    c.alpha_re = a.real();
    c.alpha_im = a.imag();
  }
  if (!o.times.empty()) c.times = cli::parse_times(o.times);
  if (o.grid_res > 0) c.grid_resolution = o.grid_res;
  if (!o.measures.empty()) c.measures = o.measures;
  cli::validate(c);
  default_thread_count() = c.threads;
  fs::create_directories(c.output_dir);
  return c;
}

std::string out_path(const cli::scenario_config& c, const std::string& name) {
  return (fs::path(c.output_dir) / name).string();
}

json base_provenance(const cli::scenario_config& c, int truncation) {
  json p = io::provenance(c.digest(), truncation);
  p["params"] = io::params_json(c.params());
  p["alpha"] = {c.alpha_re, c.alpha_im};
  p["bell_sign"] = c.sign == bell_sign::plus ? "+" : "-";
  return p;
}

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03zu", i);
  return stem + "_" + buf + ext;
}

void print_summary(const json& j) { std::cout << j.dump(2) << '\n'; }

// ---------------------------------------------------------------------------

int run_spectrum(const cli::scenario_config& c) {
  const auto coeffs = prepare_state(c.state(), c.truncation);
  const auto& sp = coeffs.spectrum();
  io::csv_writer w(base_provenance(c, sp.truncation()),
                   {"n", "energy_plus", "energy_minus", "zeta", "chi", "eps", "mu_plus", "mu_minus", "zeta_sign"});
  // n = 0 is the singlet ground state, reported in the energy_minus column.
  w.row({"0", "", io::format_double(sp.ground_energy()), "", "", "", "", "", ""});
  for (int n = 1; n <= sp.truncation(); ++n)
    w.row({std::to_string(n), io::format_double(sp.energy(n, branch::plus)),
           io::format_double(sp.energy(n, branch::minus)), io::format_double(sp.zeta(n)),
           io::format_double(sp.chi(n)), io::format_double(sp.eps(n)), io::format_double(sp.mu(n, branch::plus)),
           io::format_double(sp.mu(n, branch::minus)), io::format_double(sp.zeta_sign(n))});
  io::write_file(out_path(c, "spectrum.csv"), w.str());
  print_summary({{"command", "spectrum"}, {"truncation", sp.truncation()}, {"ground_energy", sp.ground_energy()}});
  return 0;
}

int run_evolve(const cli::scenario_config& c) {
  const auto coeffs = prepare_state(c.state(), c.truncation);
  const overlap_table overlaps(c.params().x(), coeffs.truncation());
  std::vector<qubit_density> rows(c.times.size());
  parallel_for(c.times.size(), [&](std::size_t i) {
    rows[i] = compute_qubit_density(amplitudes_at(coeffs, c.times[i]), overlaps);
  });
  io::csv_writer w(base_provenance(c, coeffs.truncation()),
                   {"time", "rho_11", "re_rho_12", "im_rho_12", "rho_22", "sigma_z", "entropy"});
  for (const auto& q : rows)
    w.row({q.t, 0.5 + q.varrho, q.xi.real(), q.xi.imag(), 0.5 - q.varrho, population_inversion(q),
           von_neumann_entropy(q)});
  io::write_file(out_path(c, "evolve.csv"), w.str());
  print_summary({{"command", "evolve"}, {"truncation", coeffs.truncation()}, {"samples", rows.size()}});
  return 0;
}

int run_grid(const cli::scenario_config& c, grid_kind kind) {
  const auto coeffs = prepare_state(c.state(), c.truncation);
  const double extent = c.grid_extent > 0.0 ? c.grid_extent : default_extent(c.params(), c.state().alpha);
  json files = json::array();
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    const auto g = make_grid(amplitudes_at(coeffs, c.times[i]), kind, extent, c.grid_resolution);
    const auto prov = base_provenance(c, coeffs.truncation());
    const std::string stem = indexed(to_string(kind), i, "");
    io::write_file(out_path(c, stem + ".csv"), io::grid_csv(g, prov));
    json header = io::grid_header(g, prov);
    header["integral"] = g.integral();
    io::write_file(out_path(c, stem + ".json"), header.dump(2) + "\n");
    files.push_back(stem + ".csv");
  }
  print_summary({{"command", to_string(kind)}, {"files", files}});
  return 0;
}

int run_polar(const cli::scenario_config& c) {
  const auto coeffs = prepare_state(c.state(), c.truncation);
  json summary = json::array();
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    const auto pd = compute_polar_density(amplitudes_at(coeffs, c.times[i]), c.theta_resolution);
    const auto prov = base_provenance(c, coeffs.truncation());
    json header = prov;
    header["t"] = c.times[i];
    io::csv_writer w(header, {"theta", "value"});
    for (std::size_t k = 0; k < pd.theta.size(); ++k) w.row({pd.theta[k], pd.values[k]});
    io::write_file(out_path(c, indexed("polar", i, ".csv")), w.str());
    summary.push_back({{"t", c.times[i]},
                       {"peak_theta_deg", peak_angle(pd) * 180.0 / std::numbers::pi},
                       {"peak_count", count_kitten_peaks(pd)},
                       {"integral", pd.integral()}});
  }
  json out{{"command", "polar"}, {"provenance", base_provenance(c, coeffs.truncation())}, {"results", summary}};
  io::write_file(out_path(c, "polar_summary.json"), out.dump(2) + "\n");
  print_summary(out);
  return 0;
}

scan_settings scan_settings_of(const cli::scenario_config& c) {
  return {{c.grid_extent, c.grid_resolution}, c.theta, c.threads};
}

int run_scan(const cli::scenario_config& c) {
  if (!c.sweep_lambdas.empty()) {
    // One row per lambda: the time average of each measure over the times.
    require(c.times.size() >= 2, errc::config, "scan: a lambda sweep needs at least two times");
    std::vector<std::string> cols{"lambda"};
    for (const auto& m : c.measures) cols.push_back(m);
    io::csv_writer w(base_provenance(c, 0), cols);
    for (double lam : c.sweep_lambdas) {
      auto spec = c.state();
      spec.params = model_params(c.omega, c.delta, lam);
      const auto coeffs = prepare_state(spec, c.truncation);
      const auto values = scan_measures(coeffs, c.times, c.measures, scan_settings_of(c));
      std::vector<std::string> row{io::format_double(lam)};
      for (const auto& m : c.measures) {
        observable_series s{m, c.times, values.at(m), c.digest()};
        row.push_back(io::format_double(time_average(s)));
      }
      w.row(row);
    }
    io::write_file(out_path(c, "sweep.csv"), w.str());
    print_summary({{"command", "scan"}, {"sweep", c.sweep_lambdas.size()}, {"file", "sweep.csv"}});
    return 0;
  }
  const auto coeffs = prepare_state(c.state(), c.truncation);
  const auto values = scan_measures(coeffs, c.times, c.measures, scan_settings_of(c));
  std::vector<std::string> cols{"time"};
  for (const auto& m : c.measures) cols.push_back(m);
  json prov = base_provenance(c, coeffs.truncation());
  prov["grid"] = {{"extent", c.grid_extent > 0.0 ? c.grid_extent : default_extent(c.params(), c.state().alpha)},
                  {"resolution", c.grid_resolution}};
  io::csv_writer w(prov, cols);
  json averages = json::object();
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    std::vector<std::string> row{io::format_double(c.times[i])};
    for (const auto& m : c.measures) row.push_back(io::format_double(values.at(m)[i]));
    w.row(row);
  }
  if (c.times.size() >= 2)
    for (const auto& m : c.measures) averages[m] = time_average(observable_series{m, c.times, values.at(m), ""});
  io::write_file(out_path(c, "scan.csv"), w.str());
  print_summary({{"command", "scan"}, {"samples", c.times.size()}, {"time_averages", averages}});
  return 0;
}

// ---------------------------------------------------------------------------
// kitten: long S_Q scan (checkpointed), T_long, then windows at T_long / q

int run_kitten(const cli::scenario_config& c) {
  const auto spec = c.state();
  const auto coeffs = prepare_state(spec, c.truncation);
  const double x = c.params().x();
  const double lam = c.lambda / c.omega;
  require(lam > 0.0, errc::config, "kitten: lambda must be positive");
  // Rough scale 0.03 lambda^-4 e^{x/2}; the scan covers two of them so that
  // the autocorrelation sees a full period.
  const double stop = c.kitten.stop > 0.0 ? c.kitten.stop : 2.0 * 0.03 * std::pow(lam, -4.0) * std::exp(0.5 * x);
  const auto times = uniform_times(0.0, stop, c.kitten.step);
  const std::string progress_path = out_path(c, "kitten.progress.json");

  std::vector<double> resumed;
  if (fs::exists(progress_path)) {
    std::ifstream f(progress_path);
    json p = json::parse(f, nullptr, false);
    if (!p.is_discarded() && p.value("config_digest", "") == c.digest() && p.contains("values"))
      resumed = p["values"].get<std::vector<double>>();
    if (resumed.size() > times.size()) resumed.clear();
  }
  const auto checkpoint = [&](std::size_t, const std::vector<double>& done) {
    const json p{{"config_digest", c.digest()}, {"values", done}};
    const std::string tmp = progress_path + ".tmp";
    io::write_file(tmp, p.dump() + "\n");
    fs::rename(tmp, progress_path);
  };
  auto series = wehrl_series(coeffs, times, {c.grid_extent, c.kitten.grid_resolution}, c.threads, resumed, 256,
                             checkpoint);
  series.params_digest = c.digest();
  json prov = base_provenance(c, coeffs.truncation());
  prov["grid_resolution"] = c.kitten.grid_resolution;
  io::write_file(out_path(c, "kitten_long.csv"), io::series_csv(series, prov));

  const double t_long = long_period_estimate(series);
  json windows = json::array();
  kitten_window_settings ks;
  ks.half_width = c.kitten.half_width;
  ks.step = c.kitten.fine_step;
  ks.grid = {c.grid_extent, c.kitten.grid_resolution};
  ks.theta_resolution = c.theta_resolution;
  ks.threads = c.threads;
  for (int q : c.kitten.fractions) {
    const auto r = analyse_kitten_window(coeffs, t_long / q, q, ks);
    windows.push_back({{"q", q},
                       {"center", r.center},
                       {"t_min", r.t_min},
                       {"t_max", r.t_max},
                       {"entropy_at_min", r.entropy_at_min},
                       {"peaks_at_min", r.peaks_at_min},
                       {"peaks_at_max", r.peaks_at_max},
                       {"t_short", r.t_short}});
  }
  json out{{"command", "kitten"},
           {"provenance", prov},
           {"t_long", t_long},
           {"t_long_lambda4_exp", t_long * std::pow(lam, 4.0) * std::exp(-0.5 * x)},
           {"windows", windows}};
  io::write_file(out_path(c, "kitten.json"), out.dump(2) + "\n");
  fs::remove(progress_path);
  print_summary(out);
  return 0;
}

// ---------------------------------------------------------------------------
// oracle-check: closed forms against the number-basis reference

int run_oracle_check(const cli::scenario_config& c) {
  const auto coeffs = prepare_state(c.state(), c.truncation);
  json checks = json::array();
  bool all_ok = true;
  auto record = [&](const std::string& name, double t, double deviation, double tolerance) {
    const bool ok = deviation <= tolerance;
    all_ok = all_ok && ok;
    checks.push_back({{"check", name}, {"t", t}, {"deviation", deviation}, {"tolerance", tolerance}, {"pass", ok}});
  };
  const double extent = default_extent(c.params(), c.state().alpha);
  for (double t : c.times) {
    const auto modes = amplitudes_at(coeffs, t);
    const auto rep = oscillator_density(modes);
    const auto rho = oracle::displaced_to_fock(rep);
    record("trace", t, std::abs(rho.trace().real() - 1.0), 1e-9);
    record("entropy", t, std::abs(von_neumann_entropy(compute_qubit_density(modes)) - oracle::oracle_entropy(rho)),
           1e-6);
    const auto ps = photon_stats(rep);
    const auto om = oracle::photon_moments(rho);
    record("mean_n", t, std::abs(ps.mean - om.mean), 1e-8);
    record("var_n", t, std::abs(ps.variance - om.variance), 1e-8);
    double dq = 0.0, dw = 0.0;
    for (int k = 0; k < 8; ++k) {
      const double ang = 2.0 * std::numbers::pi * k / 8.0;
      const complex beta = std::polar(0.4 * extent * (0.25 + 0.1 * k), ang);
      dq = std::max(dq, std::abs(husimi(rep, beta) - oracle::husimi(rho, beta)));
      dw = std::max(dw, std::abs(wigner_closed(rep, beta) - oracle::wigner(rho, beta)));
    }
    record("husimi", t, dq, 1e-8);
    record("wigner", t, dw, 1e-8);
  }
  json out{{"command", "oracle-check"},
           {"provenance", base_provenance(c, coeffs.truncation())},
           {"checks", checks},
           {"pass", all_ok}};
  io::write_file(out_path(c, "oracle_check.json"), out.dump(2) + "\n");
  print_summary(out);
  return all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GRWA qubit-oscillator simulations"};
  app.require_subcommand(1);
  overrides o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "TOML scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    sub->add_option("--lambda", o.lambda, "coupling strength");
    sub->add_option("--alpha", o.alpha, "coherent amplitude: re or re,im");
    sub->add_option("--times", o.times, "times: a,b,c or start:stop:step");
    sub->add_option("--grid-res", o.grid_res, "grid points per axis");
    sub->add_option("--measure", o.measures, "measure to scan (repeatable)");
  };

  struct command {
    const char* name;
    const char* help;
  };
  const std::vector<command> commands = {
      {"spectrum", "dump the GRWA eigensystem"},
      {"evolve", "qubit density, <sigma_z> and entropy over time"},
      {"wigner", "Wigner grids at the listed times"},
      {"husimi", "Husimi grids at the listed times"},
      {"polar", "polar phase density and peak counts"},
      {"scan", "time series of scalar measures (optionally a lambda sweep)"},
      {"kitten", "long-period estimate and kitten peak schedule"},
      {"oracle-check", "cross-validate against the number-basis oracle"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    add_common(sub);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto c = resolve(o);
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "spectrum") return run_spectrum(c);
    if (name == "evolve") return run_evolve(c);
    if (name == "wigner") return run_grid(c, grid_kind::wigner);
    if (name == "husimi") return run_grid(c, grid_kind::husimi);
    if (name == "polar") return run_polar(c);
    if (name == "scan") return run_scan(c);
    if (name == "kitten") return run_kitten(c);
    if (name == "oracle-check") return run_oracle_check(c);
    return 1;
  } catch (const error& e) {
    std::cerr << io::error_json(e).dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << io::error_json(error(errc::io, e.what())).dump() << '\n';
    return 2;
  }
}
