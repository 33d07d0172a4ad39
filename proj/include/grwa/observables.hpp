#pragma once

// Scalar measures of the oscillator and their time series: phase-space
// entropies and negativity, quadrature and photon-number moments, and the
// estimators for time averages and characteristic times.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "grwa/density.hpp"
#include "grwa/error.hpp"
#include "grwa/phase_space.hpp"

namespace grwa {

// ---------------------------------------------------------------------------
// Grid functionals

/// -int Q ln Q, natural log, with 0 ln 0 = 0.
inline double wehrl_entropy(const phase_grid& g) {
  require(g.kind == grid_kind::husimi, errc::invalid_argument, "wehrl_entropy: needs a husimi grid");
  double s = 0.0;
  for (double q : g.values)
    if (q > 0.0) s -= q * std::log(q);
  return s * g.cell_area();
}

/// -int |W| ln |W|.
inline double wigner_entropy(const phase_grid& g) {
  require(g.kind == grid_kind::wigner, errc::invalid_argument, "wigner_entropy: needs a wigner grid");
  double s = 0.0;
  for (double w : g.values) {
    const double a = std::abs(w);
    if (a > 0.0) s -= a * std::log(a);
  }
  return s * g.cell_area();
}

/// int |W| - 1, floored at zero.
inline double negativity(const phase_grid& g) {
  require(g.kind == grid_kind::wigner, errc::invalid_argument, "negativity: needs a wigner grid");
  double s = 0.0;
  for (double w : g.values) s += std::abs(w);
  return std::max(0.0, s * g.cell_area() - 1.0);
}

// ---------------------------------------------------------------------------
// Mode-sum moments

struct moment_set {
  complex g1{}, g2{};
  double n1 = 0.0, n2 = 0.0;
  complex f1{}, f2{};
};

/// G_k, N_k, F_k (k = 1, 2) as sums over the mode amplitudes, truncated at N.
inline moment_set compute_moments(const mode_amplitudes& m) {
  const int n_max = m.truncation();
  const auto A = [&](int n) { return m.A(n); };
  const auto B = [&](int n) { return m.B(n); };
  const complex c0 = m.c0t;
  moment_set r;

  r.g1 = std::conj(c0) * B(1);
  r.g2 = std::sqrt(2.0) * std::conj(c0) * B(2);
  r.n1 = std::norm(c0);
  r.n2 = std::norm(c0);
  r.f1 = std::conj(c0) * A(2);
  r.f2 = 2.0 * std::conj(c0) * A(2);
  for (int n = 1; n <= n_max; ++n) {
    const double nd = n;
    r.g1 += std::sqrt(nd) * std::conj(A(n)) * A(n + 1) + std::sqrt(nd + 1.0) * std::conj(B(n)) * B(n + 1);
    r.g2 += std::sqrt(nd * (nd + 1.0)) * std::conj(A(n)) * A(n + 2) +
            std::sqrt((nd + 1.0) * (nd + 2.0)) * std::conj(B(n)) * B(n + 2);
    r.n1 += nd * std::norm(A(n)) + (nd + 1.0) * std::norm(B(n));
    r.n2 += nd * nd * std::norm(A(n)) + (nd + 1.0) * (nd + 1.0) * std::norm(B(n));
    r.f1 += std::sqrt(nd) * std::conj(A(n)) * B(n) + std::sqrt(nd + 1.0) * std::conj(B(n)) * A(n + 2);
    r.f2 += std::sqrt(nd) * (nd + 1.0) * std::conj(A(n)) * B(n) +
            std::sqrt(nd + 1.0) * (nd + 2.0) * std::conj(B(n)) * A(n + 2);
  }
  return r;
}

struct quadrature_moments {
  double mean = 0.0;
  double second_moment = 0.0;
  double variance = 0.0;
};

/// <X_theta>, <X_theta^2> and V_theta for X_theta = (a e^{-i theta} + h.c.)/2,
/// from the mode-sum moments and varrho of the qubit density at the same t.
inline quadrature_moments quadrature(const moment_set& mom, double varrho, double x, double theta) {
  const complex e1 = std::polar(1.0, -theta);
  const complex e2 = std::polar(1.0, -2.0 * theta);
  const double rx = std::sqrt(x);
  const double c = std::cos(theta);
  quadrature_moments q;
  q.mean = (mom.g1 * e1).real() - rx * varrho * c;
  q.second_moment = 0.5 * (mom.g2 * e2 - rx * mom.f1 * (1.0 + e2)).real() + 0.5 * (mom.n1 - 0.5) +
                    0.25 * x * c * c;
  q.variance = q.second_moment - q.mean * q.mean;
  return q;
}

inline quadrature_moments quadrature(const mode_amplitudes& m, double varrho, double theta) {
  return quadrature(compute_moments(m), varrho, m.params().x(), theta);
}

struct squeezing_minimum {
  double theta = 0.0;  // in [0, pi)
  double variance = 0.0;
};

/// V_theta = c0 + c1 cos 2theta + c2 sin 2theta, so three samples fix the
/// minimum exactly.
inline squeezing_minimum min_quadrature_variance(const moment_set& mom, double varrho, double x) {
  const double v0 = quadrature(mom, varrho, x, 0.0).variance;
  const double v1 = quadrature(mom, varrho, x, 0.25 * std::numbers::pi).variance;
  const double v2 = quadrature(mom, varrho, x, 0.5 * std::numbers::pi).variance;
  const double c0 = 0.5 * (v0 + v2);
  const double c1 = 0.5 * (v0 - v2);
  const double c2 = v1 - c0;
  const double amp = std::hypot(c1, c2);
  double theta = 0.5 * (std::atan2(-c2, -c1));
  if (theta < 0.0) theta += std::numbers::pi;
  return {theta, c0 - amp};
}

// ---------------------------------------------------------------------------
// Photon statistics

struct photon_statistics {
  double mean = 0.0;
  double variance = 0.0;
  double mandel_q = 0.0;
  bool mandel_defined = true;
};

namespace detail {

// <c|(a+e)^dag (a+e)|c> and ||(a+e)^dag (a+e) c||^2 for a real shift e.
inline std::pair<double, double> shifted_number_moments(std::span<const complex> c, double e) {
  const int dim = static_cast<int>(c.size());
  // b = (a + e) c has support 0..dim-1; n c = (a^dag + e) b has support 0..dim.
  std::vector<complex> b(dim);
  for (int k = 0; k < dim; ++k) b[k] = (k + 1 < dim ? std::sqrt(k + 1.0) * c[k + 1] : complex{}) + e * c[k];
  double first = 0.0;
  for (const auto& v : b) first += std::norm(v);
  double second = 0.0;
  for (int k = 0; k <= dim; ++k) {
    complex v = k < dim ? e * b[k] : complex{};
    if (k > 0) v += std::sqrt(static_cast<double>(k)) * b[k - 1];
    second += std::norm(v);
  }
  return {first, second};
}

}  // namespace detail

/// <n> and <(Delta n)^2> evaluated frame by frame: in the u frame the
/// annihilator acts as a - s and in the d frame as a + s.
inline photon_statistics photon_stats(const oscillator_density_rep& rep) {
  const double s = rep.params.shift();
  const auto [nu, n2u] = detail::shifted_number_moments(rep.u, -s);
  const auto [nd, n2d] = detail::shifted_number_moments(rep.d, s);
  photon_statistics p;
  p.mean = nu + nd;
  p.variance = (n2u + n2d) - p.mean * p.mean;
  if (p.mean <= 1e-12) {
    p.mandel_defined = false;
    p.mandel_q = 0.0;
  } else {
    p.mandel_q = p.variance / p.mean - 1.0;
  }
  return p;
}

inline photon_statistics photon_stats(const mode_amplitudes& m) {
  return photon_stats(oscillator_density(m));
}

/// The same two moments from the mode-sum coefficients:
///   <n> = N_1 + x/4 - sqrt(x) Re F_1 - 1
///   <(Delta n)^2> = N_2 + (x/2)(N_1 + Re G_2 - 1/2) + sqrt(x)(Re F_1 - 2 Re F_2)
///                   - (N_1 - sqrt(x) Re F_1)^2
inline photon_statistics photon_stats_from_moments(const moment_set& mom, double x) {
  const double rx = std::sqrt(x);
  photon_statistics p;
  p.mean = mom.n1 + 0.25 * x - rx * mom.f1.real() - 1.0;
  p.variance = mom.n2 + 0.5 * x * (mom.n1 + mom.g2.real() - 0.5) + rx * (mom.f1.real() - 2.0 * mom.f2.real()) -
               std::pow(mom.n1 - rx * mom.f1.real(), 2);
  if (p.mean <= 1e-12) {
    p.mandel_defined = false;
  } else {
    p.mandel_q = p.variance / p.mean - 1.0;
  }
  return p;
}

// ---------------------------------------------------------------------------
// Time series and estimators

struct observable_series {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;
  std::string params_digest;

  std::size_t size() const noexcept { return times.size(); }
  void push_back(double t, double v) {
    times.push_back(t);
    values.push_back(v);
  }
};

inline void validate_series(const observable_series& s) {
  require(s.times.size() == s.values.size(), errc::invalid_argument, "series: size mismatch");
  for (std::size_t i = 0; i < s.size(); ++i) {
    require(std::isfinite(s.values[i]), errc::invalid_argument, "series: non-finite value");
    require(i == 0 || s.times[i] > s.times[i - 1], errc::invalid_argument,
            "series: times must be strictly increasing");
  }
}

/// Trapezoidal mean of the linearly interpolated series over [t0, t1].
inline double time_average(const observable_series& s, double t0, double t1) {
  validate_series(s);
  require(s.size() >= 2 && t1 > t0, errc::invalid_argument, "time_average: empty window");
  require(t0 >= s.times.front() && t1 <= s.times.back(), errc::invalid_argument,
          "time_average: window outside the series");
  auto value_at = [&](double t) {
    const auto it = std::upper_bound(s.times.begin(), s.times.end(), t);
    const std::size_t i = std::min<std::size_t>(std::max<std::ptrdiff_t>(it - s.times.begin(), 1), s.size() - 1);
    const double w = (t - s.times[i - 1]) / (s.times[i] - s.times[i - 1]);
    return (1.0 - w) * s.values[i - 1] + w * s.values[i];
  };
  double area = 0.0;
  double prev_t = t0, prev_v = value_at(t0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.times[i] <= t0) continue;
    if (s.times[i] >= t1) break;
    area += 0.5 * (prev_v + s.values[i]) * (s.times[i] - prev_t);
    prev_t = s.times[i];
    prev_v = s.values[i];
  }
  area += 0.5 * (prev_v + value_at(t1)) * (t1 - prev_t);
  return area / (t1 - t0);
}

inline double time_average(const observable_series& s) {
  return time_average(s, s.times.front(), s.times.back());
}

/// First time the series reaches `level` from below, linearly interpolated.
inline double first_crossing(const observable_series& s, double level) {
  validate_series(s);
  require(s.size() >= 2, errc::invalid_argument, "first_crossing: too few samples");
  require(s.values.front() < level, errc::no_crossing, "first_crossing: series starts above the level");
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s.values[i] >= level) {
      const double w = (level - s.values[i - 1]) / (s.values[i] - s.values[i - 1]);
      return s.times[i - 1] + w * (s.times[i] - s.times[i - 1]);
    }
  }
  throw error(errc::no_crossing, "first_crossing: level never reached");
}

/// First time S_Q rises through its own average over the whole series.
inline double entropy_production_time(const observable_series& s) {
  return first_crossing(s, time_average(s));
}

struct period_estimate_options {
  double min_lag_fraction = 0.05;  // ignore lags shorter than this fraction of the span
  double min_correlation = 0.3;    // normalized autocorrelation needed to accept a peak
  double fundamental_ratio = 0.8;  // earliest peak within this ratio of the highest wins
};

/// Dominant period of a uniformly sampled series from its normalized
/// autocorrelation past the first zero crossing: the earliest local maximum
/// reaching fundamental_ratio of the highest one (so harmonics of the period
/// are not picked), refined by a parabola through the neighbouring lags.
inline double long_period_estimate(const observable_series& s, const period_estimate_options& opt = {}) {
  validate_series(s);
  const std::size_t n = s.size();
  require(n >= 16, errc::invalid_argument, "long_period_estimate: too few samples");
  const double dt = (s.times.back() - s.times.front()) / static_cast<double>(n - 1);
  for (std::size_t i = 1; i < n; ++i)
    require(std::abs(s.times[i] - s.times[i - 1] - dt) <= 1e-6 * dt, errc::invalid_argument,
            "long_period_estimate: series must be uniformly sampled");

  double mean = 0.0;
  for (double v : s.values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> c(s.values.size());
  for (std::size_t i = 0; i < n; ++i) c[i] = s.values[i] - mean;
  double c0 = 0.0;
  for (double v : c) c0 += v * v;
  require(c0 > 0.0, errc::aperiodic, "long_period_estimate: constant series");

  // Unbiased normalization: divide each lag by its number of overlapping pairs.
  const std::size_t max_lag = n - n / 4;
  std::vector<double> r(max_lag + 1);
  for (std::size_t lag = 0; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) acc += c[i] * c[i + lag];
    r[lag] = acc / static_cast<double>(n - lag) / (c0 / static_cast<double>(n));
  }
  std::size_t start = static_cast<std::size_t>(opt.min_lag_fraction * n);
  while (start < max_lag && r[start] > 0.0) ++start;
  std::size_t best = 0;
  for (std::size_t lag = std::max<std::size_t>(start, 1); lag < max_lag; ++lag)
    if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && (best == 0 || r[lag] > r[best])) best = lag;
  require(best != 0 && r[best] >= opt.min_correlation, errc::aperiodic,
          "long_period_estimate: no autocorrelation peak");
  // Only lags well short of the highest peak count as candidate fundamentals;
  // neighbouring maxima in the same lobe are fine structure.
  const std::size_t fundamental_limit = (best * 7) / 10;
  for (std::size_t lag = std::max<std::size_t>(start, 1); lag < fundamental_limit; ++lag) {
    if (r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1] && r[lag] >= opt.fundamental_ratio * r[best] &&
        r[lag] >= opt.min_correlation) {
      best = lag;
      break;
    }
  }
  const double denom = r[best - 1] - 2.0 * r[best] + r[best + 1];
  const double offset = denom != 0.0 ? 0.5 * (r[best - 1] - r[best + 1]) / denom : 0.0;
  return (static_cast<double>(best) + offset) * dt;
}

}  // namespace grwa
