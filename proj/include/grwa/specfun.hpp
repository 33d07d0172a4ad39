#pragma once

// Special functions used throughout the library: associated Laguerre
// polynomials, the terminating 2F0 (Charlier) kernel, Kummer's 1F1 for the
// half-integer parameters that occur in radial phase-space integrals, and
// matrix elements of the displacement operator in the number basis.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "grwa/error.hpp"
#include "grwa/model.hpp"

namespace grwa {

using complex = std::complex<double>;

inline double log_factorial(int n) {
  require(n >= 0, errc::invalid_argument, "log_factorial: negative argument");
  return std::lgamma(static_cast<double>(n) + 1.0);
}

/// L_n^{(j)}(x) by the upward three-term recurrence in n.
inline double laguerre(int n, int j, double x) {
  require(n >= 0 && j >= 0, errc::invalid_argument, "laguerre: negative index");
  require(x >= 0.0 && std::isfinite(x), errc::invalid_argument,
          "laguerre: argument must be finite and nonnegative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + j - x;
  for (int k = 1; k < n; ++k) {
    const double next = ((2.0 * k + j + 1.0 - x) * cur - (k + j) * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// All of L_0^{(j)}(x) .. L_{max_n}^{(j)}(x).
inline std::vector<double> laguerre_column(int max_n, int j, double x) {
  require(max_n >= 0 && j >= 0, errc::invalid_argument, "laguerre_column: negative index");
  std::vector<double> out(static_cast<std::size_t>(max_n) + 1);
  out[0] = 1.0;
  if (max_n >= 1) out[1] = 1.0 + j - x;
  for (int k = 1; k < max_n; ++k) {
    out[k + 1] = ((2.0 * k + j + 1.0 - x) * out[k] - (k + j) * out[k - 1]) / (k + 1.0);
  }
  return out;
}

// Immutable table of L_n^{(j)}(x) for 0 <= n <= max_n, 0 <= j <= max_j.
class laguerre_table {
 public:
  laguerre_table(double x, int max_n, int max_j) : x_(x), max_n_(max_n), max_j_(max_j) {
    require(max_n >= 0 && max_j >= 0, errc::invalid_argument, "laguerre_table: negative bound");
    require(x >= 0.0 && std::isfinite(x), errc::invalid_argument,
            "laguerre_table: argument must be finite and nonnegative");
    values_.reserve(static_cast<std::size_t>(max_n + 1) * (max_j + 1));
    std::vector<std::vector<double>> columns;
    columns.reserve(max_j + 1);
    for (int j = 0; j <= max_j; ++j) columns.push_back(laguerre_column(max_n, j, x));
    for (int n = 0; n <= max_n; ++n)
      for (int j = 0; j <= max_j; ++j) values_.push_back(columns[j][n]);
  }

  double x() const noexcept { return x_; }
  int max_n() const noexcept { return max_n_; }
  int max_j() const noexcept { return max_j_; }

  double operator()(int n, int j) const {
    return values_[static_cast<std::size_t>(n) * (max_j_ + 1) + j];
  }

 private:
  double x_;
  int max_n_;
  int max_j_;
  std::vector<double> values_;
};

/// Leading large-n asymptotic form of L_n^{(j)}(x), x > 0.
inline double laguerre_asymptotic(double n, double j, double x) {
  using std::numbers::pi;
  return std::pow(n, 0.5 * j - 0.25) / std::sqrt(pi) * std::exp(0.5 * x) /
         std::pow(x, 0.5 * j + 0.25) * std::cos(2.0 * std::sqrt(n * x) - 0.5 * pi * (j + 0.5));
}

/// 2F0(-n, -m; ; -1/tau) as its terminating sum of min(n, m) + 1 terms.
/// Symmetric in (n, m). The sum alternates, so callers with large n, m and
/// tau should prefer the Laguerre form (see displacement_element).
inline double charlier_kernel(int n, int m, double tau) {
  require(n >= 0 && m >= 0, errc::invalid_argument, "charlier_kernel: negative index");
  require(tau > 0.0 && std::isfinite(tau), errc::invalid_argument,
          "charlier_kernel: tau must be positive");
  const int kmax = std::min(n, m);
  double term = 1.0;
  double sum = 1.0;
  double comp = 0.0;  // Neumaier compensation
  for (int k = 0; k < kmax; ++k) {
    term *= -static_cast<double>(n - k) * static_cast<double>(m - k) / ((k + 1.0) * tau);
    const double t = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
  }
  return sum + comp;
}

/// Kummer's confluent hypergeometric function 1F1(a; b; z) for the argument
/// classes that occur in radial integrals: z <= 0 and a either a
/// nonpositive integer (terminating polynomial) or otherwise handled through
/// 1F1(a; b; z) = e^z 1F1(b - a; b; -z), whose series has nonnegative terms.
inline double kummer_1f1(double a, double b, double z) {
  require(b > 0.0, errc::invalid_argument, "kummer_1f1: b must be positive");
  require(z <= 0.0 && std::isfinite(z), errc::invalid_argument,
          "kummer_1f1: z must be finite and nonpositive");
  if (z == 0.0) return 1.0;

  const bool terminating = a <= 0.0 && a == std::floor(a);
  if (terminating) {
    const int degree = static_cast<int>(-a);
    double term = 1.0;
    double sum = 1.0;
    for (int k = 0; k < degree; ++k) {
      term *= (a + k) * z / ((b + k) * (k + 1.0));
      sum += term;
    }
    return sum;
  }

  const double ap = b - a;
  const double zp = -z;
  constexpr int max_terms = 10000;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < max_terms; ++k) {
    const double ratio = (ap + k) * zp / ((b + k) * (k + 1.0));
    term *= ratio;
    sum += term;
    // Once |ratio| drops below one the remaining terms are bounded by a
    // geometric tail with |ratio| as its rate.
    const double next_ratio = std::abs((ap + k + 1) * zp / ((b + k + 1) * (k + 2.0)));
    if (next_ratio < 1.0 && std::abs(term) * next_ratio / (1.0 - next_ratio) < 1e-16 * std::abs(sum)) {
      return std::exp(z) * sum;
    }
  }
  throw error(errc::non_convergence, "kummer_1f1: series did not converge in 10^4 terms");
}

/// I_q(X) = int_0^inf r^q exp(-(r + X)^2) dr through the two-Kummer form
///   (1/2) Gamma((q+1)/2) 1F1(-q/2; 1/2; -X^2) - X Gamma(q/2+1) 1F1((1-q)/2; 3/2; -X^2).
/// Both terms are positive for X <= 0. For X > 0 they cancel, badly once
/// X sqrt(q) is of order one; radial_moments() switches method there.
inline double radial_moment(int q, double X) {
  require(q >= 0, errc::invalid_argument, "radial_moment: negative order");
  const double qd = q;
  const double a = 0.5 * std::exp(std::lgamma(0.5 * (qd + 1.0))) * kummer_1f1(-0.5 * qd, 0.5, -X * X);
  if (X == 0.0) return a;
  const double b = X * std::exp(std::lgamma(0.5 * qd + 1.0)) * kummer_1f1(0.5 * (1.0 - qd), 1.5, -X * X);
  return a - b;
}

/// I_0(X) .. I_{max_q}(X). Uses the Kummer form for X <= 0.25; above that the
/// normalized moments y_q = I_q / Gamma((q+1)/2) are the minimal solution of
///   y_{q+1} = y_{q-1} - X Gamma((q+1)/2)/Gamma(q/2+1) y_q
/// and are obtained by backward (Miller) recurrence normalized to
/// y_0 = erfc(X)/2.
inline std::vector<double> radial_moments(int max_q, double X) {
  require(max_q >= 0, errc::invalid_argument, "radial_moments: negative order");
  require(std::isfinite(X), errc::invalid_argument, "radial_moments: X must be finite");
  std::vector<double> out(static_cast<std::size_t>(max_q) + 1);
  if (X <= 0.25) {
    for (int q = 0; q <= max_q; ++q) out[q] = radial_moment(q, X);
    return out;
  }
  // Start far enough up that the dominant solution has decayed by ~1e-17
  // relative to y_{max_q}: growth per step is about exp(X sqrt(2/q)).
  const double root = std::sqrt(static_cast<double>(max_q)) + 40.0 / (X * std::numbers::sqrt2);
  const int top = static_cast<int>(root * root) + 20;
  std::vector<double> y(static_cast<std::size_t>(top) + 2, 0.0);
  y[top] = 1e-200;
  for (int q = top; q >= 1; --q) {
    const double ratio = std::exp(std::lgamma(0.5 * (q + 1.0)) - std::lgamma(0.5 * q + 1.0));
    y[q - 1] = y[q + 1] + X * ratio * y[q];
    if (y[q - 1] > 1e200) {
      for (int k = q - 1; k <= top; ++k) y[k] *= 1e-200;
    }
  }
  const double scale = 0.5 * std::erfc(X) / y[0];
  for (int q = 0; q <= max_q; ++q) out[q] = y[q] * scale * std::exp(std::lgamma(0.5 * (q + 1.0)));
  return out;
}

/// <m_-|n_+> with |n_pm> = D^dag(pm sqrt(x)/2)|n>, i.e. <m|D(-sqrt(x))|n>.
/// Factorial ratios are formed in log space so that indices of several
/// hundred do not overflow.
inline double displaced_overlap(int m, int n, double x) {
  require(m >= 0 && n >= 0, errc::invalid_argument, "displaced_overlap: negative index");
  require(x >= 0.0 && std::isfinite(x), errc::invalid_argument,
          "displaced_overlap: x must be finite and nonnegative");
  const int lo = std::min(m, n);
  const int j = std::abs(m - n);
  if (x == 0.0) return j == 0 ? 1.0 : 0.0;
  const double log_pref =
      0.5 * j * std::log(x) - 0.5 * x + 0.5 * (log_factorial(lo) - log_factorial(lo + j));
  const double sign = (m >= n && (j % 2 == 1)) ? -1.0 : 1.0;
  return sign * std::exp(log_pref) * laguerre(lo, j, x);
}

/// <m|D(z)|n> for the displacement operator D(z) = exp(z a^dag - z* a).
inline complex displacement_element(int m, int n, complex z) {
  require(m >= 0 && n >= 0, errc::invalid_argument, "displacement_element: negative index");
  const double r2 = std::norm(z);
  const int lo = std::min(m, n);
  const int j = std::abs(m - n);
  if (r2 == 0.0) return j == 0 ? complex{1.0, 0.0} : complex{0.0, 0.0};
  const double r = std::sqrt(r2);
  const double log_pref =
      j * std::log(r) - 0.5 * r2 + 0.5 * (log_factorial(lo) - log_factorial(lo + j));
  const double magnitude = std::exp(log_pref) * laguerre(lo, j, r2);
  // z^j above the diagonal, (-z*)^j below it.
  const double phi = std::arg(z);
  if (m >= n) return std::polar(magnitude, j * phi);
  return std::polar((j % 2 == 1) ? -magnitude : magnitude, -j * phi);
}

/// <n_pm | alpha, k> with |alpha, k> = D(alpha)|n>. Equals
/// exp(-+ i phi_alpha) <n|D(alpha_pm)|k>, alpha_pm = alpha pm sqrt(x)/2,
/// phi_alpha = (lambda/omega) Im(alpha). The Laguerre form has no pole at
/// alpha_pm = 0.
inline complex coherent_displaced_overlap(int n, branch sign, complex alpha, int k,
                                          const model_params& params) {
  const double s = params.shift();
  const double sgn = sign_of(sign);
  const complex shifted = alpha + sgn * s;
  const double phi = s * alpha.imag();
  return std::polar(1.0, -sgn * phi) * displacement_element(n, k, shifted);
}

// Real cores R[n][j] of the displacement matrix elements at fixed z, such that
//   <n+j|D(z)|n> = R[n][j] e^{i j arg z},  <n|D(z)|n+j> = (-1)^j R[n][j] e^{-i j arg z}.
// Filled for n + j < dim by one Laguerre recurrence per diagonal. Used by the
// grid kernels, which need every element at each sample point.
class displacement_cores {
 public:
  explicit displacement_cores(int dim) : dim_(dim), cores_(static_cast<std::size_t>(dim) * dim) {}

  int dim() const noexcept { return dim_; }

  void evaluate(double r) {
    const double r2 = r * r;
    // q holds sqrt(n!/(n+j)!) r^j e^{-r^2/2} for the current diagonal.
    double q0 = std::exp(-0.5 * r2);
    for (int j = 0; j < dim_; ++j) {
      if (j > 0) q0 *= r / std::sqrt(static_cast<double>(j));
      const int len = dim_ - j;
      double q = q0;
      double lprev = 1.0;
      double lcur = 1.0 + j - r2;
      at(0, j) = q;
      for (int n = 1; n < len; ++n) {
        q *= std::sqrt(static_cast<double>(n) / static_cast<double>(n + j));
        if (n >= 2) {
          const double lnext =
              ((2.0 * (n - 1) + j + 1.0 - r2) * lcur - (n - 1 + j) * lprev) / static_cast<double>(n);
          lprev = lcur;
          lcur = lnext;
        }
        at(n, j) = q * lcur;
      }
    }
  }

  double operator()(int n, int j) const { return cores_[static_cast<std::size_t>(j) * dim_ + n]; }

 private:
  double& at(int n, int j) { return cores_[static_cast<std::size_t>(j) * dim_ + n]; }

  int dim_;
  std::vector<double> cores_;
};

}  // namespace grwa
