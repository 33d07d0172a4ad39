#pragma once

// Expansion of the initial hybrid Bell state in the GRWA eigenbasis, time
// phasing of the coefficients, and the mode amplitudes A_n(t), B_n(t) that
// every reduced quantity is built from.

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <vector>

#include "grwa/error.hpp"
#include "grwa/model.hpp"
#include "grwa/specfun.hpp"
#include "grwa/spectrum.hpp"

namespace grwa {

enum class bell_sign : int { plus = +1, minus = -1 };

// The product state |+1>|alpha> is kept for unit tests; production runs use
// the two hybrid Bell states.
enum class initial_kind { bell, coherent };

struct initial_state_spec {
  complex alpha{0.0, 0.0};
  bell_sign sign = bell_sign::minus;
  model_params params{1.0, 0.0, 0.0};
  initial_kind kind = initial_kind::bell;
};

struct truncation_options {
  int initial_n = 0;  // 0 selects default_truncation()
  double norm_tail = 1e-10;
  int hard_cap = 4096;
};

/// ceil(|alpha|^2 + x/4 + 10 sqrt(|alpha|^2 + x/4 + 1)) + 20
inline int default_truncation(const initial_state_spec& spec) {
  const double mean = std::norm(spec.alpha) + 0.25 * spec.params.x();
  return static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0))) + 20;
}

// e^{-i angle} for angle = energy * t, with the product formed exactly as a
// double-double and reduced modulo 2 pi before the trig call. At omega t of
// order 10^7 the plain double product loses ~8 digits of the phase.
inline complex unit_phase(double energy, double t) {
  constexpr double two_pi_hi = 6.283185307179586;
  constexpr double two_pi_lo = 2.4492935982947064e-16;
  const double hi = energy * t;
  const double lo = std::fma(energy, t, -hi);
  const double k = std::nearbyint(hi / two_pi_hi);
  double r = std::fma(-k, two_pi_hi, hi);
  r = std::fma(-k, two_pi_lo, r) + lo;
  return {std::cos(r), -std::sin(r)};
}

class state_coefficients {
 public:
  const spectrum_table& spectrum() const noexcept { return *spectrum_; }
  std::shared_ptr<const spectrum_table> spectrum_ptr() const noexcept { return spectrum_; }
  const initial_state_spec& spec() const noexcept { return spec_; }
  int truncation() const noexcept { return spectrum_->truncation(); }

  complex c0() const noexcept { return c0_; }
  // n = 1..truncation()
  complex c(int n, branch b) const { return b == branch::plus ? c_plus_[n - 1] : c_minus_[n - 1]; }
  // 1 - (|C_0|^2 + sum |C_n^pm|^2)
  double norm_tail() const noexcept { return norm_tail_; }

  friend state_coefficients initial_coefficients(const initial_state_spec&,
                                                 std::shared_ptr<const spectrum_table>,
                                                 const truncation_options&);

 private:
  state_coefficients(initial_state_spec spec, std::shared_ptr<const spectrum_table> sp)
      : spectrum_(std::move(sp)), spec_(spec) {}

  std::shared_ptr<const spectrum_table> spectrum_;
  initial_state_spec spec_;
  complex c0_{};
  std::vector<complex> c_plus_, c_minus_;
  double norm_tail_ = 0.0;
};

namespace detail {

// Projections <E^+_k|Psi(0)> and <E^-_k|Psi(0)> onto the adiabatic doublet
// states (|1,k_+> +- |-1,k_->)/sqrt(2) for k = 0..kmax.
struct adiabatic_projections {
  std::vector<complex> upper;  // <E^+_k|Psi>
  std::vector<complex> lower;  // <E^-_k|Psi>
};

inline adiabatic_projections project_initial_state(const initial_state_spec& spec, int kmax) {
  const double s = spec.params.shift();
  const complex alpha = spec.alpha;
  const complex a_plus = alpha + s;
  const complex a_minus = alpha - s;
  const double phi = s * alpha.imag();
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;

  // p_k = <k_+|alpha> = e^{-i phi} e^{-|a+|^2/2} a+^k / sqrt(k!)
  // q_k = <k_-|alpha> = e^{+i phi} e^{-|a-|^2/2} a-^k / sqrt(k!)
  // and <k_+|-alpha> = (-1)^k q_k, <k_-|-alpha> = (-1)^k p_k.
  complex p = std::polar(std::exp(-0.5 * std::norm(a_plus)), -phi);
  complex q = std::polar(std::exp(-0.5 * std::norm(a_minus)), phi);

  adiabatic_projections out;
  out.upper.resize(static_cast<std::size_t>(kmax) + 1);
  out.lower.resize(static_cast<std::size_t>(kmax) + 1);
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      const double root = std::sqrt(static_cast<double>(k));
      p *= a_plus / root;
      q *= a_minus / root;
    }
    const bool even = (k % 2 == 0);
    complex up, lo;
    switch (spec.kind) {
      case initial_kind::coherent:
        up = inv_sqrt2 * p;
        lo = inv_sqrt2 * p;
        break;
      case initial_kind::bell:
        if (spec.sign == bell_sign::minus) {
          up = even ? inv_sqrt2 * p : -inv_sqrt2 * q;
          lo = even ? inv_sqrt2 * q : inv_sqrt2 * p;
        } else {
          up = even ? inv_sqrt2 * q : inv_sqrt2 * p;
          lo = even ? inv_sqrt2 * p : -inv_sqrt2 * q;
        }
        break;
    }
    out.upper[k] = up;
    out.lower[k] = lo;
  }
  return out;
}

}  // namespace detail

/// Expansion coefficients C_0, C_n^pm of the initial state. If the norm tail
/// exceeds options.norm_tail the doublet tower is rebuilt with a larger
/// truncation, up to options.hard_cap.
inline state_coefficients initial_coefficients(const initial_state_spec& spec,
                                               std::shared_ptr<const spectrum_table> spectrum,
                                               const truncation_options& options = {}) {
  require(spectrum != nullptr, errc::invalid_argument, "initial_coefficients: null spectrum");
  require(spectrum->params() == spec.params, errc::invalid_argument,
          "initial_coefficients: spectrum built from different parameters");
  require(std::isfinite(spec.alpha.real()) && std::isfinite(spec.alpha.imag()),
          errc::invalid_argument, "initial_coefficients: alpha must be finite");

  for (;;) {
    const int n_max = spectrum->truncation();
    const auto proj = detail::project_initial_state(spec, n_max);
    state_coefficients out(spec, spectrum);
    out.c0_ = proj.lower[0];
    out.c_plus_.resize(static_cast<std::size_t>(n_max));
    out.c_minus_.resize(static_cast<std::size_t>(n_max));
    double weight = std::norm(out.c0_);
    for (int n = 1; n <= n_max; ++n) {
      const double mp = spectrum->mu(n, branch::plus);
      const double mm = spectrum->mu(n, branch::minus);
      const double sg = spectrum->zeta_sign(n);
      const complex up = proj.upper[n - 1];
      const complex lo = proj.lower[n];
      out.c_plus_[n - 1] = mp * up + sg * mm * lo;
      out.c_minus_[n - 1] = mm * up - sg * mp * lo;
      weight += std::norm(out.c_plus_[n - 1]) + std::norm(out.c_minus_[n - 1]);
    }
    out.norm_tail_ = std::max(0.0, 1.0 - weight);
    if (out.norm_tail_ <= options.norm_tail) return out;

    const int next = std::max(n_max + 16, n_max + n_max / 4);
    require(next <= options.hard_cap, errc::truncation_cap,
            "initial_coefficients: truncation would exceed the hard cap of " +
                std::to_string(options.hard_cap));
    spectrum = std::make_shared<const spectrum_table>(build_spectrum(spec.params, next));
  }
}

/// Builds the spectrum at the default truncation and expands the state.
inline state_coefficients prepare_state(const initial_state_spec& spec,
                                        const truncation_options& options = {}) {
  const int n0 = options.initial_n > 0 ? options.initial_n : default_truncation(spec);
  require(n0 <= options.hard_cap, errc::truncation_cap,
          "prepare_state: initial truncation exceeds the hard cap");
  auto spectrum = std::make_shared<const spectrum_table>(build_spectrum(spec.params, n0));
  return initial_coefficients(spec, std::move(spectrum), options);
}

// A_n(t) = mu^+ C^+_n(t) + mu^- C^-_n(t)
// B_n(t) = sgn(zeta_n) (mu^- C^+_n(t) - mu^+ C^-_n(t))
struct mode_amplitudes {
  double t = 0.0;
  complex c0t{};
  std::vector<complex> a;  // a[n-1] = A_n(t)
  std::vector<complex> b;  // b[n-1] = B_n(t)
  double norm_tail = 0.0;
  std::shared_ptr<const spectrum_table> spectrum;

  int truncation() const noexcept { return static_cast<int>(a.size()); }
  const model_params& params() const { return spectrum->params(); }
  complex A(int n) const { return (n >= 1 && n <= truncation()) ? a[n - 1] : complex{}; }
  complex B(int n) const { return (n >= 1 && n <= truncation()) ? b[n - 1] : complex{}; }
};

inline mode_amplitudes amplitudes_at(const state_coefficients& coeffs, double t) {
  const auto& sp = coeffs.spectrum();
  const int n_max = sp.truncation();
  mode_amplitudes m;
  m.t = t;
  m.norm_tail = coeffs.norm_tail();
  m.spectrum = coeffs.spectrum_ptr();
  m.c0t = coeffs.c0() * unit_phase(sp.ground_energy(), t);
  m.a.resize(static_cast<std::size_t>(n_max));
  m.b.resize(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const complex cp = coeffs.c(n, branch::plus) * unit_phase(sp.energy(n, branch::plus), t);
    const complex cm = coeffs.c(n, branch::minus) * unit_phase(sp.energy(n, branch::minus), t);
    const double mp = sp.mu(n, branch::plus);
    const double mm = sp.mu(n, branch::minus);
    m.a[n - 1] = mp * cp + mm * cm;
    m.b[n - 1] = sp.zeta_sign(n) * (mm * cp - mp * cm);
  }
  return m;
}

}  // namespace grwa
