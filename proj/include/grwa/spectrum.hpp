#pragma once

// Generalized rotating-wave eigensystem: adiabatic (displaced-oscillator)
// doublets, the 2x2 block mixing between |E^+_{n-1}> and |E^-_n>, the
// resulting energies, and the large-n asymptotic diagnostics.
//
// All energies are stored in units of omega; times elsewhere are the scaled
// time omega*t.

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "grwa/error.hpp"
#include "grwa/model.hpp"
#include "grwa/specfun.hpp"

namespace grwa {

/// (E_n^+, E_n^-) = (n - x/4) +- (delta_tilde/2) L_n(x), in units of omega.
inline std::pair<double, double> adiabatic_energies(const model_params& params, int n) {
  require(n >= 0, errc::invalid_argument, "adiabatic_energies: negative n");
  const double x = params.x();
  const double half_split = 0.5 * params.delta_tilde() / params.omega() * laguerre(n, 0, x);
  const double center = n - 0.25 * x;
  return {center + half_split, center - half_split};
}

/// Leading-order large-n energy of the doublet member selected by `b`, in
/// units of omega. Diagnostic only; intended for n >= 50.
inline double asymptotic_energy(const model_params& params, int n, branch b) {
  require(n >= 1, errc::invalid_argument, "asymptotic_energy: n must be positive");
  const double x = params.x();
  const double sgn = sign_of(b);
  const double base = n + sgn - 0.5 - 0.25 * x;
  if (params.delta() == 0.0) return base;
  require(x > 0.0, errc::invalid_argument, "asymptotic_energy: requires x > 0");
  const double nx = n * x;
  return base - sgn * params.delta() / params.omega() / std::sqrt(std::numbers::pi) *
                    std::pow(nx, -0.25) * std::cos(2.0 * std::sqrt(nx) - 0.25 * std::numbers::pi);
}

class spectrum_table {
 public:
  const model_params& params() const noexcept { return params_; }
  int truncation() const noexcept { return truncation_; }
  double ground_energy() const noexcept { return ground_energy_; }

  // Doublet data are indexed by n = 1..truncation().
  double energy(int n, branch b) const { return b == branch::plus ? e_plus_[n - 1] : e_minus_[n - 1]; }
  double zeta(int n) const { return zeta_[n - 1]; }
  double chi(int n) const { return chi_[n - 1]; }
  double eps(int n) const { return eps_[n - 1]; }
  double mu(int n, branch b) const { return b == branch::plus ? mu_plus_[n - 1] : mu_minus_[n - 1]; }
  // zeta_n / |zeta_n|, with +1 at zeta_n = 0.
  double zeta_sign(int n) const { return zeta_sign_[n - 1]; }

  friend spectrum_table build_spectrum(const model_params& params, int truncation_n);

 private:
  explicit spectrum_table(const model_params& params) : params_(params) {}

  model_params params_;
  int truncation_ = 0;
  double ground_energy_ = 0.0;
  std::vector<double> e_plus_, e_minus_, zeta_, chi_, eps_, mu_plus_, mu_minus_, zeta_sign_;
};

/// Builds the doublet tower n = 1..truncation_n.
inline spectrum_table build_spectrum(const model_params& params, int truncation_n) {
  require(truncation_n >= 1, errc::invalid_argument, "build_spectrum: truncation must be >= 1");
  spectrum_table t(params);
  t.truncation_ = truncation_n;

  const double x = params.x();
  const double dt = params.delta_tilde() / params.omega();
  const auto l0 = laguerre_column(truncation_n, 0, x);
  const auto l1 = laguerre_column(truncation_n, 1, x);

  t.ground_energy_ = -0.25 * x - 0.5 * dt;

  const auto size = static_cast<std::size_t>(truncation_n);
  for (auto* v : {&t.e_plus_, &t.e_minus_, &t.zeta_, &t.chi_, &t.eps_, &t.mu_plus_, &t.mu_minus_,
                  &t.zeta_sign_})
    v->resize(size);

  for (int n = 1; n <= truncation_n; ++n) {
    const auto i = static_cast<std::size_t>(n - 1);
    const double upper = (n - 1) - 0.25 * x + 0.5 * dt * l0[n - 1];  // E^+_{n-1}
    const double lower = n - 0.25 * x - 0.5 * dt * l0[n];            // E^-_n
    const double zeta = 0.5 * dt * std::sqrt(x / n) * l1[n - 1];
    const double eps = 0.5 * (upper - lower);
    const double chi = std::hypot(zeta, eps);
    const double center = 0.5 * (upper + lower);

    t.zeta_[i] = zeta;
    t.eps_[i] = eps;
    t.chi_[i] = chi;
    t.zeta_sign_[i] = zeta < 0.0 ? -1.0 : 1.0;
    t.e_plus_[i] = center + chi;
    t.e_minus_[i] = center - chi;
    if (chi > 0.0) {
      // The larger mixing weight comes from the square root; the smaller one
      // from mu^+ mu^- = |zeta| / (2 chi), which avoids cancellation in chi - |eps|.
      if (eps >= 0.0) {
        t.mu_plus_[i] = std::sqrt((chi + eps) / (2.0 * chi));
        t.mu_minus_[i] = std::abs(zeta) / (2.0 * chi * t.mu_plus_[i]);
      } else {
        t.mu_minus_[i] = std::sqrt((chi - eps) / (2.0 * chi));
        t.mu_plus_[i] = std::abs(zeta) / (2.0 * chi * t.mu_minus_[i]);
      }
    } else {
      t.mu_plus_[i] = 1.0;
      t.mu_minus_[i] = 0.0;
    }
  }
  return t;
}

}  // namespace grwa
