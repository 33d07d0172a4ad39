#pragma once

#include <cmath>
#include <string>

#include "grwa/error.hpp"

namespace grwa {

// Which of the two oppositely displaced oscillator frames (or which doublet
// member) a quantity refers to.
enum class branch : int { plus = +1, minus = -1 };

constexpr int sign_of(branch b) noexcept { return static_cast<int>(b); }

// Physical constants of the qubit-oscillator Hamiltonian
//   H = omega a^dag a + (delta/2) sigma_x + lambda sigma_z (a^dag + a)
// in units hbar = 1. The derived quantities are recomputed on every
// construction and cannot be set independently.
class model_params {
 public:
  model_params(double omega, double delta, double lambda)
      : omega_(omega), delta_(delta), lambda_(lambda) {
    require(std::isfinite(omega) && omega > 0.0, errc::invalid_argument,
            "omega must be positive and finite");
    require(std::isfinite(delta) && delta >= 0.0, errc::invalid_argument,
            "delta must be nonnegative and finite");
    require(std::isfinite(lambda) && lambda >= 0.0, errc::invalid_argument,
            "lambda must be nonnegative and finite");
    x_ = 4.0 * lambda_ * lambda_ / (omega_ * omega_);
    delta_tilde_ = delta_ * std::exp(-0.5 * x_);
  }

  double omega() const noexcept { return omega_; }
  double delta() const noexcept { return delta_; }
  double lambda() const noexcept { return lambda_; }

  // x = 4 lambda^2 / omega^2
  double x() const noexcept { return x_; }
  // delta * exp(-x/2)
  double delta_tilde() const noexcept { return delta_tilde_; }
  // Half separation of the two displaced frames, lambda/omega = sqrt(x)/2.
  double shift() const noexcept { return lambda_ / omega_; }

  friend bool operator==(const model_params&, const model_params&) = default;

 private:
  double omega_;
  double delta_;
  double lambda_;
  double x_ = 0.0;
  double delta_tilde_ = 0.0;
};

}  // namespace grwa
