#pragma once

// Reduced density matrices of the two subsystems.
//
// Writing the evolved state as
//   |Psi(t)> = C_0 |E^-_0> + sum_n A_n |E^+_{n-1}> + sum_n B_n |E^-_n>
// and expanding the adiabatic states gives |Psi> = |+1>|u> + |-1>|d> with
//   |u> = sum_k u_k |k_+>,  |d> = sum_k d_k |k_->,
//   u_k = (a_k + b_k)/sqrt(2),  d_k = (a_k - b_k)/sqrt(2),
// where a_k = A_{k+1} and b_0 = C_0, b_k = B_k. The oscillator density is
// then |u><u| + |d><d|, which is the displaced-projector expansion with the
// P^{(pm)}_{n,m} terms collected per frame.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "grwa/dynamics.hpp"
#include "grwa/specfun.hpp"

namespace grwa {

// Immutable table of M_{m,n} = <m_-|n_+> for 0 <= m, n <= max_index.
class overlap_table {
 public:
  overlap_table(double x, int max_index) : x_(x), dim_(max_index + 1) {
    require(max_index >= 0, errc::invalid_argument, "overlap_table: negative bound");
    require(x >= 0.0 && std::isfinite(x), errc::invalid_argument, "overlap_table: invalid x");
    values_.resize(static_cast<std::size_t>(dim_) * dim_);
    displacement_cores cores(dim_);
    cores.evaluate(std::sqrt(x));
    // D(-sqrt(x)): arg = pi, so <n+j|D|n> = (-1)^j R and <n|D|n+j> = R.
    for (int j = 0; j < dim_; ++j) {
      for (int n = 0; n + j < dim_; ++n) {
        const double r = cores(n, j);
        at(n + j, n) = (j % 2 == 1) ? -r : r;
        at(n, n + j) = r;
      }
    }
  }

  double x() const noexcept { return x_; }
  int max_index() const noexcept { return dim_ - 1; }
  double operator()(int m, int n) const { return values_[static_cast<std::size_t>(m) * dim_ + n]; }

 private:
  double& at(int m, int n) { return values_[static_cast<std::size_t>(m) * dim_ + n]; }

  double x_;
  int dim_;
  std::vector<double> values_;
};

/// The oscillator state as two displaced-frame amplitude vectors, both of
/// length truncation + 1. Consumed by the phase-space and oracle modules.
struct oscillator_density_rep {
  std::vector<complex> u;  // coefficients on |k_+>, qubit +1 branch
  std::vector<complex> d;  // coefficients on |k_->, qubit -1 branch
  model_params params{1.0, 0.0, 0.0};
  double t = 0.0;

  int size() const noexcept { return static_cast<int>(u.size()); }
};

inline oscillator_density_rep oscillator_density(const mode_amplitudes& modes) {
  const int n_max = modes.truncation();
  oscillator_density_rep rep;
  rep.params = modes.params();
  rep.t = modes.t;
  rep.u.resize(static_cast<std::size_t>(n_max) + 1);
  rep.d.resize(static_cast<std::size_t>(n_max) + 1);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  for (int k = 0; k <= n_max; ++k) {
    const complex ak = modes.A(k + 1);
    const complex bk = k == 0 ? modes.c0t : modes.B(k);
    rep.u[k] = inv_sqrt2 * (ak + bk);
    rep.d[k] = inv_sqrt2 * (ak - bk);
  }
  return rep;
}

struct qubit_density {
  double varrho = 0.0;  // (rho_11 - rho_22)/2
  complex xi{};         // rho_12
  double t = 0.0;

  // rho = [[1/2 + varrho, xi], [conj(xi), 1/2 - varrho]] in the sigma_z basis (+1, -1)
  std::array<std::array<complex, 2>, 2> matrix() const {
    return {{{complex{0.5 + varrho, 0.0}, xi}, {std::conj(xi), complex{0.5 - varrho, 0.0}}}};
  }
  double varpi() const { return std::sqrt(varrho * varrho + std::norm(xi)); }
  // Eigenvalues 1/2 +- varpi, larger first.
  std::array<double, 2> eigenvalues() const { return {0.5 + varpi(), 0.5 - varpi()}; }
};

/// varrho = Re(C_0 A_1^* + sum A_{n+1}^* B_n) and xi = <d|u> with the
/// frame overlaps M_{m,n} = <m_-|n_+>.
inline qubit_density compute_qubit_density(const mode_amplitudes& modes,
                                           const overlap_table& overlaps) {
  const int n_max = modes.truncation();
  require(overlaps.max_index() >= n_max, errc::invalid_argument,
          "qubit_density: overlap table does not cover the truncation");
  qubit_density q;
  q.t = modes.t;

  complex rho_sum = modes.c0t * std::conj(modes.A(1));
  for (int n = 1; n <= n_max; ++n) rho_sum += std::conj(modes.A(n + 1)) * modes.B(n);
  q.varrho = rho_sum.real();

  const auto rep = oscillator_density(modes);
  complex xi{};
  for (int l = 0; l <= n_max; ++l) {
    complex row{};
    for (int k = 0; k <= n_max; ++k) row += overlaps(l, k) * rep.u[k];
    xi += std::conj(rep.d[l]) * row;
  }
  q.xi = xi;
  return q;
}

inline qubit_density compute_qubit_density(const mode_amplitudes& modes) {
  return compute_qubit_density(modes, overlap_table(modes.params().x(), modes.truncation()));
}

/// Natural-log entropy of the 2x2 reduced density, with 0 log 0 = 0.
inline double von_neumann_entropy(const qubit_density& q) {
  double s = 0.0;
  for (double p : q.eigenvalues()) {
    p = std::clamp(p, 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

/// <sigma_z> = 2 varrho
inline double population_inversion(const qubit_density& q) { return 2.0 * q.varrho; }

}  // namespace grwa
