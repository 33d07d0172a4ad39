#pragma once

// Truncated number-basis reference computations. Nothing here uses the
// Laguerre machinery: displacements are matrix exponentials of the ladder
// operators, and the bipartite dynamics is a dense diagonalization of the
// full Hamiltonian. Intended for validation at modest truncations.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "grwa/density.hpp"
#include "grwa/dynamics.hpp"
#include "grwa/error.hpp"
#include "grwa/model.hpp"

namespace grwa::oracle {

using cmatrix = Eigen::MatrixXcd;
using cvector = Eigen::VectorXcd;
using rmatrix = Eigen::MatrixXd;

/// Annihilation operator on span{|0>, ..., |dim-1>}.
inline rmatrix annihilation(int dim) {
  rmatrix a = rmatrix::Zero(dim, dim);
  for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

/// D(z) = exp(z a^dag - z^* a), exponentiated in a space padded by `pad`
/// levels and cut back to dim x dim, so the retained block is accurate as
/// long as the padding covers the displaced tails.
inline cmatrix displacement(int dim, complex z, int pad = 0) {
  if (pad <= 0) pad = 40 + static_cast<int>(std::ceil(4.0 * std::abs(z) * std::abs(z) + 12.0 * std::abs(z)));
  const int big = dim + pad;
  const cmatrix a = annihilation(big).cast<complex>();
  const cmatrix gen = z * a.adjoint() - std::conj(z) * a;
  const cmatrix d = gen.exp();
  return d.topLeftCorner(dim, dim);
}

/// Coherent-state amplitudes <k|beta> for k < dim.
inline cvector coherent(int dim, complex beta) {
  cvector v(dim);
  complex term = std::exp(-0.5 * std::norm(beta));
  for (int k = 0; k < dim; ++k) {
    if (k > 0) term *= beta / std::sqrt(static_cast<double>(k));
    v(k) = term;
  }
  return v;
}

/// N + 12 sqrt(x) + 40, the margin used when no dimension is requested.
inline int default_dimension(const oscillator_density_rep& rep) {
  return rep.size() + static_cast<int>(std::ceil(12.0 * std::sqrt(rep.params.x()))) + 40;
}

/// rho_O in the number basis from the displaced-frame representation.
/// Throws under_truncation when the trace deficit exceeds 1e-6.
inline cmatrix displaced_to_fock(const oscillator_density_rep& rep, int dim = 0) {
  if (dim <= 0) dim = default_dimension(rep);
  require(dim >= rep.size(), errc::invalid_argument, "displaced_to_fock: dim below the state size");
  const double s = rep.params.shift();
  cvector u = cvector::Zero(dim), d = cvector::Zero(dim);
  for (int k = 0; k < rep.size(); ++k) {
    u(k) = rep.u[k];
    d(k) = rep.d[k];
  }
  // |k_+> = D(-s)|k>, |k_-> = D(s)|k>
  const cvector uf = displacement(dim, complex{-s, 0.0}) * u;
  const cvector df = displacement(dim, complex{s, 0.0}) * d;
  cmatrix rho = uf * uf.adjoint() + df * df.adjoint();
  const double deficit = std::abs(1.0 - rho.trace().real());
  require(deficit <= 1e-6, errc::under_truncation,
          "displaced_to_fock: trace deficit " + std::to_string(deficit) + " at dim " + std::to_string(dim));
  return rho;
}

inline cmatrix displaced_to_fock(const mode_amplitudes& modes, int dim = 0) {
  return displaced_to_fock(oscillator_density(modes), dim);
}

/// -sum p ln p over the eigenvalues of a density matrix, clamped to [0, 1].
inline double oracle_entropy(const cmatrix& rho) {
  Eigen::SelfAdjointEigenSolver<cmatrix> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = std::clamp(es.eigenvalues()(i), 0.0, 1.0);
    if (p > 0.0) s -= p * std::log(p);
  }
  return s;
}

/// (1/pi) <beta|rho|beta>
inline double husimi(const cmatrix& rho, complex beta) {
  const cvector b = coherent(static_cast<int>(rho.rows()), beta);
  return (b.adjoint() * rho * b)(0, 0).real() / std::numbers::pi;
}

/// (2/pi) Tr[D(-beta) rho D(-beta)^dag Pi]. The displaced state keeps every
/// row of the padded space, so parity sees the tails pushed past dim.
inline double wigner(const cmatrix& rho, complex beta) {
  const int dim = static_cast<int>(rho.rows());
  const int pad = 40 + static_cast<int>(std::ceil(4.0 * std::norm(beta) + 12.0 * std::abs(beta)));
  const int big = dim + pad;
  const cmatrix a = annihilation(big).cast<complex>();
  const cmatrix gen = -beta * a.adjoint() + std::conj(beta) * a;
  const cmatrix d = gen.exp().leftCols(dim);
  const cmatrix shifted = d * rho * d.adjoint();
  double w = 0.0;
  for (int k = 0; k < big; ++k) w += (k % 2 == 0 ? 1.0 : -1.0) * shifted(k, k).real();
  return 2.0 / std::numbers::pi * w;
}

struct number_moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline number_moments photon_moments(const cmatrix& rho) {
  number_moments m;
  double second = 0.0;
  for (int k = 0; k < rho.rows(); ++k) {
    const double p = rho(k, k).real();
    m.mean += k * p;
    second += static_cast<double>(k) * k * p;
  }
  m.variance = second - m.mean * m.mean;
  return m;
}

/// <X_theta> and <X_theta^2> for X_theta = (a e^{-i theta} + a^dag e^{i theta})/2.
inline std::pair<double, double> quadrature_moments(const cmatrix& rho, double theta) {
  const int dim = static_cast<int>(rho.rows());
  const cmatrix a = annihilation(dim).cast<complex>();
  const cmatrix x = 0.5 * (a * std::polar(1.0, -theta) + a.adjoint() * std::polar(1.0, theta));
  // The truncated a^dag a misses the top level's contribution to X^2; the
  // caller keeps the state well inside the basis.
  return {(rho * x).trace().real(), (rho * x * x).trace().real()};
}

// ---------------------------------------------------------------------------
// Exact bipartite dynamics

/// Full Hamiltonian in the basis |+1, n> (rows 0..dim-1), |-1, n> (rows
/// dim..2dim-1), sigma_z diagonal, in units of omega.
inline rmatrix rabi_hamiltonian(const model_params& p, int dim) {
  const double w = p.omega();
  const double half_delta = 0.5 * p.delta() / w;
  const double g = p.lambda() / w;
  const rmatrix a = annihilation(dim);
  const rmatrix x = a + a.transpose();
  rmatrix h = rmatrix::Zero(2 * dim, 2 * dim);
  for (int n = 0; n < dim; ++n) {
    h(n, n) = n;
    h(dim + n, dim + n) = n;
    h(n, dim + n) = half_delta;
    h(dim + n, n) = half_delta;
  }
  h.topLeftCorner(dim, dim) += g * x;
  h.bottomRightCorner(dim, dim) -= g * x;
  return h;
}

class exact_system {
 public:
  exact_system(const model_params& p, int dim) : params_(p), dim_(dim) {
    require(dim >= 2, errc::invalid_argument, "exact_system: dim must be at least 2");
    Eigen::SelfAdjointEigenSolver<rmatrix> es(rabi_hamiltonian(p, dim));
    require(es.info() == Eigen::Success, errc::oracle_convergence, "exact_system: eigensolver failed");
    energies_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
  }

  int dim() const noexcept { return dim_; }
  const Eigen::VectorXd& energies() const noexcept { return energies_; }

  cvector evolve(const cvector& psi0, double t) const {
    const cvector coeff = vectors_.transpose().cast<complex>() * psi0;
    cvector phased(coeff.size());
    for (int i = 0; i < coeff.size(); ++i) phased(i) = coeff(i) * unit_phase(energies_(i), t);
    return vectors_.cast<complex>() * phased;
  }

 private:
  model_params params_;
  int dim_;
  Eigen::VectorXd energies_;
  rmatrix vectors_;
};

/// The initial state of `spec` as a 2*dim vector in the sigma_z x number basis.
inline cvector initial_vector(const initial_state_spec& spec, int dim) {
  const cvector plus = coherent(dim, spec.alpha);
  const cvector minus = coherent(dim, -spec.alpha);
  cvector psi(2 * dim);
  if (spec.kind == initial_kind::coherent) {
    psi.head(dim) = plus;
    psi.tail(dim).setZero();
    return psi;
  }
  const double sg = spec.sign == bell_sign::plus ? 1.0 : -1.0;
  psi.head(dim) = 0.5 * (plus + minus);
  psi.tail(dim) = sg * 0.5 * (plus - minus);
  return psi;
}

struct exact_state {
  cmatrix rho_oscillator;
  double sigma_z = 0.0;
  double t = 0.0;
};

inline exact_state reduce(const cvector& psi, int dim, double t) {
  const cvector up = psi.head(dim), down = psi.tail(dim);
  return {up * up.adjoint() + down * down.adjoint(), up.squaredNorm() - down.squaredNorm(), t};
}

/// Numerically exact reduced oscillator state at time t.
inline exact_state exact_evolve(const exact_system& sys, const initial_state_spec& spec, double t) {
  return reduce(sys.evolve(initial_vector(spec, sys.dim()), t), sys.dim(), t);
}

/// Checks that the lowest `levels` eigenvalues agree between dim and 2 dim
/// to `tolerance` relative; throws oracle_convergence otherwise.
inline void check_doubling(const model_params& p, int dim, int levels = 10, double tolerance = 1e-8) {
  const exact_system small(p, dim), large(p, 2 * dim);
  const int n = std::min<int>(levels, static_cast<int>(small.energies().size()));
  for (int i = 0; i < n; ++i) {
    const double a = small.energies()(i), b = large.energies()(i);
    require(std::abs(a - b) <= tolerance * std::max(1.0, std::abs(b)), errc::oracle_convergence,
            "check_doubling: level " + std::to_string(i) + " moved by " + std::to_string(std::abs(a - b)));
  }
}

}  // namespace grwa::oracle
