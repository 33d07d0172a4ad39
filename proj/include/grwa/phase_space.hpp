#pragma once

// Husimi Q, Wigner W and the polar phase density of the oscillator.
//
// Everything here works on the two displaced-frame vectors of
// oscillator_density_rep: rho_O = |u><u| + |d><d| with |u> = D(-s) sum u_k|k>
// and |d> = D(s) sum d_k|k>, s = lambda/omega. In that form
//   Q(beta) = (1/pi) sum_frames e^{-|gamma|^2} |sum_k c_k conj(gamma)^k / sqrt(k!)|^2
//   W(beta) = (2/pi) sum_frames sum_{m,n} c_m^* c_n (-1)^n <m|D(2 gamma)|n>
// with gamma = beta + s for the u frame and gamma = beta - s for the d frame.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "grwa/density.hpp"
#include "grwa/error.hpp"
#include "grwa/parallel.hpp"
#include "grwa/specfun.hpp"

namespace grwa {

enum class grid_kind { wigner, husimi };

inline const char* to_string(grid_kind k) { return k == grid_kind::wigner ? "wigner" : "husimi"; }

namespace detail {

// e^{-|z|^2/2} sum_k c_k conj(z)^k / sqrt(k!), accumulated forward so that
// the prefactor never overflows.
inline complex coherent_projection(std::span<const complex> c, complex z) {
  const complex zc = std::conj(z);
  complex term = std::exp(-0.5 * std::norm(z));
  complex sum = c[0] * term;
  for (std::size_t k = 1; k < c.size(); ++k) {
    term *= zc / std::sqrt(static_cast<double>(k));
    sum += c[k] * term;
  }
  return sum;
}

// (2/pi) sum_{m,n} c_m^* c_n (-1)^n <m|D(z)|n>, with the displacement cores
// already evaluated at |z|.
inline double parity_expectation(std::span<const complex> c, const displacement_cores& cores,
                                 double phi) {
  const int dim = static_cast<int>(c.size());
  double diag = 0.0;
  for (int n = 0; n < dim; ++n) {
    const double v = cores(n, 0) * std::norm(c[n]);
    diag += (n % 2 == 0) ? v : -v;
  }
  double off = 0.0;
  const complex step = std::polar(1.0, phi);
  complex rot = step;
  for (int j = 1; j < dim; ++j) {
    double acc = 0.0;
    for (int n = 0; n + j < dim; ++n) {
      const double v = cores(n, j) * (rot * c[n] * std::conj(c[n + j])).real();
      acc += (n % 2 == 0) ? v : -v;
    }
    off += acc;
    rot *= step;
  }
  return 2.0 / std::numbers::pi * (diag + 2.0 * off);
}

}  // namespace detail

inline double husimi(const oscillator_density_rep& rep, complex beta) {
  const double s = rep.params.shift();
  const double pu = std::norm(detail::coherent_projection(rep.u, beta + s));
  const double pd = std::norm(detail::coherent_projection(rep.d, beta - s));
  return (pu + pd) / std::numbers::pi;
}

inline double husimi(const mode_amplitudes& modes, complex beta) {
  return husimi(oscillator_density(modes), beta);
}

// Reusable scratch for repeated Wigner evaluations of one state.
class wigner_evaluator {
 public:
  explicit wigner_evaluator(const oscillator_density_rep& rep)
      : rep_(&rep), cores_(rep.size()) {}

  double operator()(complex beta) {
    const double s = rep_->params.shift();
    return frame(rep_->u, 2.0 * (beta + s)) + frame(rep_->d, 2.0 * (beta - s));
  }

 private:
  double frame(const std::vector<complex>& c, complex z) {
    cores_.evaluate(std::abs(z));
    return detail::parity_expectation(c, cores_, std::arg(z));
  }

  const oscillator_density_rep* rep_;
  displacement_cores cores_;
};

/// Closed-form W(beta). The matrix elements of D(2 gamma) come from the
/// Laguerre recurrence, so gamma = 0 needs no special branch.
inline double wigner_closed(const oscillator_density_rep& rep, complex beta) {
  wigner_evaluator w(rep);
  return w(beta);
}

inline double wigner_closed(const mode_amplitudes& modes, complex beta) {
  return wigner_closed(oscillator_density(modes), beta);
}

struct wigner_series_options {
  double tolerance = 1e-14;  // on the magnitude of a single term
  int max_terms = 4000;
};

/// W = (2/pi) sum_k (-1)^k <beta,k|rho_O|beta,k>, summed until the terms stay
/// below the tolerance for eight consecutive k past the state's support.
inline double wigner_series(const oscillator_density_rep& rep, complex beta,
                            const wigner_series_options& options = {}) {
  const int dim = rep.size();
  const double reach = std::abs(beta) + rep.params.shift();
  const int k_floor = dim + static_cast<int>(std::ceil(reach * reach + 6.0 * reach));
  double sum = 0.0;
  int quiet = 0;
  for (int k = 0; k < options.max_terms; ++k) {
    complex pu{}, pd{};
    for (int n = 0; n < dim; ++n) {
      pu += rep.u[n] * std::conj(coherent_displaced_overlap(n, branch::plus, beta, k, rep.params));
      pd += rep.d[n] * std::conj(coherent_displaced_overlap(n, branch::minus, beta, k, rep.params));
    }
    const double term = std::norm(pu) + std::norm(pd);
    sum += (k % 2 == 0) ? term : -term;
    quiet = term < options.tolerance ? quiet + 1 : 0;
    if (k >= k_floor && quiet >= 8) return 2.0 / std::numbers::pi * sum;
  }
  throw error(errc::non_convergence, "wigner_series: no convergence within " +
                                         std::to_string(options.max_terms) + " terms");
}

inline double wigner_series(const mode_amplitudes& modes, complex beta,
                            const wigner_series_options& options = {}) {
  return wigner_series(oscillator_density(modes), beta, options);
}

// Square sampling of [-R, R]^2 with both endpoints included. values is
// row-major with the imaginary part as the row index.
struct phase_grid {
  grid_kind kind = grid_kind::husimi;
  double extent = 0.0;
  int resolution = 0;
  double t = 0.0;
  model_params params{1.0, 0.0, 0.0};
  std::vector<double> values;

  double spacing() const { return 2.0 * extent / (resolution - 1); }
  double cell_area() const { return spacing() * spacing(); }
  double coordinate(int i) const { return -extent + i * spacing(); }
  double operator()(int row, int col) const {
    return values[static_cast<std::size_t>(row) * resolution + col];
  }
  // Riemann sum times cell area.
  double integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * cell_area();
  }
};

/// sqrt(x)/2 + |alpha| + 5
inline double default_extent(const model_params& params, complex alpha) {
  return params.shift() + std::abs(alpha) + 5.0;
}

inline phase_grid make_grid(const oscillator_density_rep& rep, grid_kind kind, double extent,
                            int resolution, int threads = 0) {
  require(extent > 0.0 && std::isfinite(extent), errc::invalid_argument,
          "make_grid: extent must be positive");
  require(resolution >= 2, errc::invalid_argument, "make_grid: resolution must be at least 2");
  phase_grid g;
  g.kind = kind;
  g.extent = extent;
  g.resolution = resolution;
  g.t = rep.t;
  g.params = rep.params;
  g.values.resize(static_cast<std::size_t>(resolution) * resolution);
  parallel_for(
      static_cast<std::size_t>(resolution),
      [&](std::size_t row) {
        const double im = g.coordinate(static_cast<int>(row));
        double* out = g.values.data() + row * resolution;
        if (kind == grid_kind::husimi) {
          for (int col = 0; col < resolution; ++col) out[col] = husimi(rep, {g.coordinate(col), im});
        } else {
          wigner_evaluator w(rep);
          for (int col = 0; col < resolution; ++col) out[col] = w({g.coordinate(col), im});
        }
      },
      threads, 1);
  return g;
}

inline phase_grid make_grid(const mode_amplitudes& modes, grid_kind kind, double extent,
                            int resolution, int threads = 0) {
  return make_grid(oscillator_density(modes), kind, extent, resolution, threads);
}

struct polar_density {
  std::vector<double> theta;   // uniform in [0, 2 pi)
  std::vector<double> values;  // Q(theta)
  double t = 0.0;

  // Periodic trapezoid (= rectangle) rule.
  double integral() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s * 2.0 * std::numbers::pi / static_cast<double>(values.size());
  }
};

namespace detail {

// g_j = sum_{k >= j} c_k C(k, j) h^{k-j} / sqrt(k!), so that
// sum_k c_k (conj(beta) + h)^k / sqrt(k!) = sum_j g_j conj(beta)^j.
inline std::vector<complex> shifted_power_coefficients(std::span<const complex> c, double h) {
  const int dim = static_cast<int>(c.size());
  std::vector<complex> g(dim);
  for (int j = 0; j < dim; ++j) {
    complex acc{};
    for (int k = j; k < dim; ++k) {
      // log of C(k, j) / sqrt(k!) without the power of h
      const double lw = log_factorial(k) - log_factorial(j) - log_factorial(k - j) - 0.5 * log_factorial(k);
      const int p = k - j;
      double w;
      if (p == 0) {
        w = std::exp(lw);
      } else if (h == 0.0) {
        continue;
      } else {
        w = std::exp(lw + p * std::log(std::abs(h)));
        if (h < 0.0 && p % 2 == 1) w = -w;
      }
      acc += w * c[k];
    }
    g[j] = acc;
  }
  return g;
}

// One frame's contribution to Q(theta): with beta = r e^{i theta} and
// e^{-|beta + h|^2} = e^{-(r + h cos)^2} e^{-h^2 sin^2},
//   (1/pi) e^{-h^2 sin^2} sum_p d_p(theta) I_{p+1}(h cos theta),
//   d_p(theta) = sum_{j+l=p} g_j conj(g_l) e^{-i(j-l) theta}.
inline double polar_frame(std::span<const complex> g, double h, double theta) {
  const int dim = static_cast<int>(g.size());
  const double X = h * std::cos(theta);
  const double sn = std::sin(theta);
  const auto moments = radial_moments(2 * dim - 1, X);
  std::vector<complex> gr(dim);
  const complex step = std::polar(1.0, -theta);
  complex rot{1.0, 0.0};
  for (int j = 0; j < dim; ++j) {
    gr[j] = g[j] * rot;
    rot *= step;
  }
  double sum = 0.0;
  for (int p = 0; p <= 2 * (dim - 1); ++p) {
    complex dp{};
    for (int j = std::max(0, p - dim + 1); j <= std::min(p, dim - 1); ++j) dp += gr[j] * std::conj(gr[p - j]);
    sum += dp.real() * moments[p + 1];
  }
  return std::exp(-h * h * sn * sn) * sum / std::numbers::pi;
}

}  // namespace detail

/// Q(theta) = int_0^inf Q(r e^{i theta}) r dr at theta_k = 2 pi k / resolution.
inline polar_density compute_polar_density(const oscillator_density_rep& rep, int theta_resolution = 1024,
                                           int threads = 0) {
  require(theta_resolution >= 3, errc::invalid_argument,
          "polar_density: resolution must be at least 3");
  const double s = rep.params.shift();
  const auto gu = detail::shifted_power_coefficients(rep.u, s);
  const auto gd = detail::shifted_power_coefficients(rep.d, -s);
  polar_density pd;
  pd.t = rep.t;
  pd.theta.resize(theta_resolution);
  pd.values.resize(theta_resolution);
  parallel_for(
      static_cast<std::size_t>(theta_resolution),
      [&](std::size_t i) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(i) / theta_resolution;
        pd.theta[i] = th;
        pd.values[i] = detail::polar_frame(gu, s, th) + detail::polar_frame(gd, -s, th);
      },
      threads);
  return pd;
}

inline polar_density compute_polar_density(const mode_amplitudes& modes, int theta_resolution = 1024,
                                           int threads = 0) {
  return compute_polar_density(oscillator_density(modes), theta_resolution, threads);
}

/// Angle of the global maximum, refined by a parabola through the three
/// neighbouring samples. In [0, 2 pi).
inline double peak_angle(const polar_density& pd) {
  const int n = static_cast<int>(pd.values.size());
  require(n >= 3, errc::invalid_argument, "peak_angle: too few samples");
  const int i = static_cast<int>(std::max_element(pd.values.begin(), pd.values.end()) - pd.values.begin());
  const double ym = pd.values[(i + n - 1) % n], y0 = pd.values[i], yp = pd.values[(i + 1) % n];
  const double denom = ym - 2.0 * y0 + yp;
  const double offset = denom != 0.0 ? 0.5 * (ym - yp) / denom : 0.0;
  const double step = 2.0 * std::numbers::pi / n;
  double th = (i + offset) * step;
  th = std::fmod(th, 2.0 * std::numbers::pi);
  return th < 0.0 ? th + 2.0 * std::numbers::pi : th;
}

/// Topographic prominence of every local maximum of a periodic sequence.
/// A maximum's prominence is its height above the higher of the two lowest
/// points met walking left and right until a strictly higher sample; the
/// global maximum is measured against the global minimum. Plateaus count
/// once, at their first sample.
inline std::vector<std::pair<int, double>> periodic_peak_prominences(const std::vector<double>& v) {
  const int n = static_cast<int>(v.size());
  std::vector<std::pair<int, double>> peaks;
  if (n < 3) return peaks;
  const double lo = *std::min_element(v.begin(), v.end());
  auto at = [&](int i) { return v[((i % n) + n) % n]; };
  for (int i = 0; i < n; ++i) {
    if (!(v[i] > at(i - 1))) continue;
    int k = 1;
    while (k < n && at(i + k) == v[i]) ++k;  // plateau
    if (k == n || at(i + k) > v[i]) continue;

    double left_min = v[i], right_min = v[i];
    bool bounded = false;
    for (int step = 1; step < n; ++step) {
      const double y = at(i - step);
      if (y > v[i]) { bounded = true; break; }
      left_min = std::min(left_min, y);
    }
    for (int step = k; step < n; ++step) {
      const double y = at(i + step);
      if (y > v[i]) { bounded = true; break; }
      right_min = std::min(right_min, y);
    }
    const double base = bounded ? std::max(left_min, right_min) : lo;
    peaks.emplace_back(i, v[i] - base);
  }
  return peaks;
}

/// Number of peaks of Q(theta) whose prominence is at least `prominence`.
inline int count_kitten_peaks(const polar_density& pd, double prominence) {
  require(prominence > 0.0, errc::invalid_argument, "count_kitten_peaks: prominence must be positive");
  int count = 0;
  for (const auto& [index, prom] : periodic_peak_prominences(pd.values))
    if (prom >= prominence) ++count;
  return count;
}

/// Default threshold: 5% of the maximum of Q(theta).
inline int count_kitten_peaks(const polar_density& pd) {
  const double top = *std::max_element(pd.values.begin(), pd.values.end());
  return count_kitten_peaks(pd, 0.05 * top);
}

}  // namespace grwa
