#pragma once

// Multi-step computations shared by the command-line tool and the test
// suites: measure scans over time, and the long/short period analysis of
// the weak-coupling kitten regime.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grwa/density.hpp"
#include "grwa/dynamics.hpp"
#include "grwa/error.hpp"
#include "grwa/observables.hpp"
#include "grwa/parallel.hpp"
#include "grwa/phase_space.hpp"

namespace grwa {

inline const std::vector<std::string>& known_measures() {
  static const std::vector<std::string> names = {
      "sigma_z", "entropy", "wehrl", "wigner_entropy", "negativity", "variance",
      "variance_min", "mean_n", "var_n", "mandel"};
  return names;
}

struct grid_settings {
  double extent = 0.0;  // 0 selects default_extent()
  int resolution = 256;
};

struct scan_settings {
  grid_settings grid;
  double theta = 0.0;  // quadrature angle for "variance"
  int threads = 0;
};

/// Evaluates every requested measure at every time. Time points run in
/// parallel; each one builds its own grids single-threaded, so the result
/// does not depend on the thread count.
inline std::map<std::string, std::vector<double>> scan_measures(const state_coefficients& coeffs,
                                                                const std::vector<double>& times,
                                                                const std::vector<std::string>& measures,
                                                                const scan_settings& settings) {
  for (const auto& m : measures)
    require(std::find(known_measures().begin(), known_measures().end(), m) != known_measures().end(),
            errc::invalid_argument, "unknown measure '" + m + "'");
  const auto& params = coeffs.spec().params;
  const double extent =
      settings.grid.extent > 0.0 ? settings.grid.extent : default_extent(params, coeffs.spec().alpha);
  const auto wants = [&](const char* name) {
    return std::find(measures.begin(), measures.end(), name) != measures.end();
  };
  const bool need_qubit = wants("sigma_z") || wants("entropy") || wants("variance") || wants("variance_min");
  const bool need_husimi = wants("wehrl");
  const bool need_wigner = wants("wigner_entropy") || wants("negativity");
  const std::optional<overlap_table> overlaps =
      need_qubit ? std::optional<overlap_table>(std::in_place, params.x(), coeffs.truncation()) : std::nullopt;

  std::map<std::string, std::vector<double>> out;
  for (const auto& m : measures) out[m].assign(times.size(), 0.0);
  parallel_for(
      times.size(),
      [&](std::size_t i) {
        const auto modes = amplitudes_at(coeffs, times[i]);
        const auto rep = oscillator_density(modes);
        std::optional<qubit_density> q;
        if (need_qubit) q = compute_qubit_density(modes, *overlaps);
        if (wants("sigma_z")) out.at("sigma_z")[i] = population_inversion(*q);
        if (wants("entropy")) out.at("entropy")[i] = von_neumann_entropy(*q);
        if (need_husimi)
          out.at("wehrl")[i] = wehrl_entropy(make_grid(rep, grid_kind::husimi, extent, settings.grid.resolution, 1));
        if (need_wigner) {
          const auto g = make_grid(rep, grid_kind::wigner, extent, settings.grid.resolution, 1);
          if (wants("wigner_entropy")) out.at("wigner_entropy")[i] = wigner_entropy(g);
          if (wants("negativity")) out.at("negativity")[i] = negativity(g);
        }
        if (wants("variance") || wants("variance_min")) {
          const auto mom = compute_moments(modes);
          if (wants("variance")) out.at("variance")[i] = quadrature(mom, q->varrho, params.x(), settings.theta).variance;
          if (wants("variance_min"))
            out.at("variance_min")[i] = min_quadrature_variance(mom, q->varrho, params.x()).variance;
        }
        if (wants("mean_n") || wants("var_n") || wants("mandel")) {
          const auto p = photon_stats(rep);
          if (wants("mean_n")) out.at("mean_n")[i] = p.mean;
          if (wants("var_n")) out.at("var_n")[i] = p.variance;
          if (wants("mandel")) {
            require(p.mandel_defined, errc::mandel_undefined, "mandel: mean photon number vanishes");
            out.at("mandel")[i] = p.mandel_q;
          }
        }
      },
      settings.threads, 1);
  return out;
}

/// start, start + step, ... up to stop (inclusive within 1e-9 step).
inline std::vector<double> uniform_times(double start, double stop, double step) {
  require(step > 0.0 && stop >= start, errc::invalid_argument, "uniform_times: invalid range");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  std::vector<double> t(count);
  for (std::size_t i = 0; i < count; ++i) t[i] = start + static_cast<double>(i) * step;
  return t;
}

/// S_Q at each time on a fixed grid. `progress(done, partial_values)` is
/// called after every block of `block` samples so callers can checkpoint;
/// samples already present in `values` (resume) are not recomputed.
inline observable_series wehrl_series(
    const state_coefficients& coeffs, const std::vector<double>& times, const grid_settings& grid,
    int threads = 0, std::vector<double> values = {}, std::size_t block = 256,
    const std::function<void(std::size_t, const std::vector<double>&)>& progress = {}) {
  const auto& spec = coeffs.spec();
  const double extent = grid.extent > 0.0 ? grid.extent : default_extent(spec.params, spec.alpha);
  require(values.size() <= times.size(), errc::invalid_argument, "wehrl_series: resume data too long");
  std::size_t done = values.size();
  values.resize(times.size());
  while (done < times.size()) {
    const std::size_t end = std::min(times.size(), done + block);
    parallel_for(
        end - done,
        [&](std::size_t k) {
          const std::size_t i = done + k;
          const auto rep = oscillator_density(amplitudes_at(coeffs, times[i]));
          values[i] = wehrl_entropy(make_grid(rep, grid_kind::husimi, extent, grid.resolution, 1));
        },
        threads, 1);
    done = end;
    if (progress) progress(done, std::vector<double>(values.begin(), values.begin() + done));
  }
  observable_series s;
  s.label = "wehrl";
  s.times = times;
  s.values = std::move(values);
  return s;
}

// ---------------------------------------------------------------------------
// Kitten analysis around rational fractions of the long period

struct kitten_window_result {
  int q = 1;
  double center = 0.0;    // window centre, normally T_long / q
  double t_min = 0.0;     // local minimum of S_Q nearest the centre
  double t_max = 0.0;     // next local maximum of S_Q after t_min
  double entropy_at_min = 0.0;  // qubit/oscillator von Neumann entropy at t_min
  int peaks_at_min = 0;
  int peaks_at_max = 0;
  double t_short = 0.0;   // dominant period of S_Q within the window
  observable_series series;
};

struct kitten_window_settings {
  double half_width = 12000.0;  // two short periods either side at q = 1
  double step = 25.0;
  grid_settings grid{0.0, 96};
  int theta_resolution = 1024;
  int threads = 0;
};

/// Index of the interior local extremum of v nearest to index `near`.
inline std::size_t nearest_local_extremum(const std::vector<double>& v, std::size_t near, bool minimum) {
  require(v.size() >= 3, errc::invalid_argument, "nearest_local_extremum: series too short");
  const auto is_ext = [&](std::size_t i) {
    return minimum ? (v[i] <= v[i - 1] && v[i] < v[i + 1]) : (v[i] >= v[i - 1] && v[i] > v[i + 1]);
  };
  std::optional<std::size_t> best;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (!is_ext(i)) continue;
    const auto dist = [&](std::size_t k) { return k > near ? k - near : near - k; };
    if (!best || dist(i) < dist(*best)) best = i;
  }
  require(best.has_value(), errc::aperiodic, "nearest_local_extremum: no local extremum");
  return *best;
}

inline int kitten_peaks_at(const state_coefficients& coeffs, double t, int theta_resolution, int threads = 0) {
  return count_kitten_peaks(
      compute_polar_density(oscillator_density(amplitudes_at(coeffs, t)), theta_resolution, threads));
}

/// S_Q on [center - half_width, center + half_width]; the short-period minimum
/// nearest the centre, the following maximum, peak counts at both, and the
/// short period itself.
inline kitten_window_result analyse_kitten_window(const state_coefficients& coeffs, double center, int q,
                                                  const kitten_window_settings& ks) {
  require(q >= 1, errc::invalid_argument, "kitten: q must be positive");
  require(center - ks.half_width >= 0.0, errc::invalid_argument, "kitten: window starts before t = 0");
  kitten_window_result r;
  r.q = q;
  r.center = center;
  const auto times = uniform_times(center - ks.half_width, center + ks.half_width, ks.step);
  r.series = wehrl_series(coeffs, times, ks.grid, ks.threads);
  const auto& v = r.series.values;

  const std::size_t imin = nearest_local_extremum(v, v.size() / 2, true);
  std::size_t imax = imin;
  for (std::size_t i = imin + 1; i + 1 < v.size(); ++i) {
    if (v[i] >= v[i - 1] && v[i] > v[i + 1]) {
      imax = i;
      break;
    }
  }
  require(imax != imin, errc::aperiodic, "kitten: no local maximum after the minimum");
  r.t_min = times[imin];
  r.t_max = times[imax];
  r.entropy_at_min = von_neumann_entropy(compute_qubit_density(amplitudes_at(coeffs, r.t_min)));
  r.peaks_at_min = kitten_peaks_at(coeffs, r.t_min, ks.theta_resolution, ks.threads);
  r.peaks_at_max = kitten_peaks_at(coeffs, r.t_max, ks.theta_resolution, ks.threads);
  r.t_short = long_period_estimate(r.series);
  return r;
}

}  // namespace grwa
