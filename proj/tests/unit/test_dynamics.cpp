#include <gtest/gtest.h>

#include <cmath>

#include "grwa/dynamics.hpp"
#include "oracles.hpp"

using namespace grwa;
namespace ref = grwa::testing;

namespace {

initial_state_spec bell(double delta, double lambda, complex alpha, bell_sign sign = bell_sign::minus) {
  initial_state_spec s;
  s.alpha = alpha;
  s.sign = sign;
  s.params = model_params(1.0, delta, lambda);
  return s;
}

}  // namespace

TEST(InitialState, MatchesLiteralCoefficients) {
  for (const auto& spec : {bell(1.0, 0.1, 0.5), bell(0.5, 0.9, 2.5), bell(0.8, 0.3, {1.2, -0.7})}) {
    const auto c = prepare_state(spec);
    const auto lit = ref::literal_minus_coefficients(c.spectrum(), spec.alpha);
    EXPECT_NEAR(std::abs(c.c0() - lit.c0), 0.0, 1e-14);
    for (int n = 1; n <= c.truncation(); ++n) {
      EXPECT_NEAR(std::abs(c.c(n, branch::plus) - lit.plus[n - 1]), 0.0, 1e-13) << n;
      EXPECT_NEAR(std::abs(c.c(n, branch::minus) - lit.minus[n - 1]), 0.0, 1e-13) << n;
    }
  }
}

TEST(InitialState, NormTailBelowThreshold) {
  for (auto sign : {bell_sign::minus, bell_sign::plus}) {
    const auto c = prepare_state(bell(0.5, 1.3, 2.5, sign));
    double w = std::norm(c.c0());
    for (int n = 1; n <= c.truncation(); ++n) w += std::norm(c.c(n, branch::plus)) + std::norm(c.c(n, branch::minus));
    EXPECT_NEAR(w, 1.0, 1e-10);
    EXPECT_LE(c.norm_tail(), 1e-10);
  }
}

TEST(InitialState, TruncationRaisedAutomatically) {
  truncation_options opt;
  opt.initial_n = 4;
  const auto c = prepare_state(bell(0.5, 0.2, 3.0), opt);
  EXPECT_GT(c.truncation(), 4);
  EXPECT_LE(c.norm_tail(), opt.norm_tail);
}

TEST(InitialState, HardCapEnforced) {
  truncation_options opt;
  opt.initial_n = 4;
  opt.hard_cap = 30;
  try {
    prepare_state(bell(0.5, 0.2, 6.0), opt);
    FAIL() << "expected truncation_cap";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::truncation_cap);
  }
}

TEST(InitialState, RejectsMismatchedSpectrum) {
  const auto spec = bell(0.5, 0.2, 1.0);
  auto sp = std::make_shared<const spectrum_table>(build_spectrum(model_params(1.0, 0.5, 0.3), 20));
  EXPECT_THROW(initial_coefficients(spec, sp), error);
  EXPECT_THROW(initial_coefficients(spec, nullptr), error);
}

TEST(InitialState, DefaultTruncationFormula) {
  const auto spec = bell(0.5, 0.2, 2.0);
  const double mean = 4.0 + 0.25 * spec.params.x();
  EXPECT_EQ(default_truncation(spec), static_cast<int>(std::ceil(mean + 10.0 * std::sqrt(mean + 1.0))) + 20);
}

TEST(Phase, ExtendedPrecisionReduction) {
  for (double e : {0.37, 12.345678901, 97.5})
    for (double t : {0.0, 1.0, 2.9590e6, 1.0e7}) {
      const long double angle = static_cast<long double>(e) * static_cast<long double>(t);
      const long double two_pi = 6.283185307179586476925286766559L;
      const long double r = angle - two_pi * std::floor(angle / two_pi);
      const complex want{static_cast<double>(std::cos(r)), -static_cast<double>(std::sin(r))};
      EXPECT_NEAR(std::abs(unit_phase(e, t) - want), 0.0, 1e-9) << e << ' ' << t;
      EXPECT_NEAR(std::abs(unit_phase(e, t)), 1.0, 1e-15);
    }
}

TEST(Amplitudes, InitialAmplitudesAreAdiabaticProjections) {
  // At t = 0, A_n = <E^+_{n-1}|Psi> and B_n = <E^-_n|Psi>.
  const auto spec = bell(0.7, 0.25, {1.1, 0.4});
  const auto c = prepare_state(spec);
  const auto m = amplitudes_at(c, 0.0);
  const auto lit = ref::literal_minus_coefficients(c.spectrum(), spec.alpha);
  const double h = spec.params.shift();
  const complex ap = spec.alpha + h, am = spec.alpha - h;
  const double phi = h * spec.alpha.imag();
  const auto p = [&](int k) { return std::polar(1.0, -phi) * ref::displacement_sum(k, 0, ap); };
  const auto q = [&](int k) { return std::polar(1.0, phi) * ref::displacement_sum(k, 0, am); };
  for (int n = 1; n < 20; ++n) {
    const int k = n - 1;
    const complex upper = (k % 2 == 0 ? p(k) : -q(k)) / std::sqrt(2.0);
    const complex lower = (n % 2 == 0 ? q(n) : p(n)) / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(m.A(n) - upper), 0.0, 1e-13) << n;
    EXPECT_NEAR(std::abs(m.B(n) - lower), 0.0, 1e-13) << n;
  }
  EXPECT_NEAR(std::abs(m.c0t - q(0) / std::sqrt(2.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(m.c0t - lit.c0), 0.0, 1e-14);
}

TEST(Amplitudes, NormConservedAndOutOfRangeZero) {
  const auto c = prepare_state(bell(0.8, 0.05, 2.5));
  auto weight = [&](double t) {
    const auto m = amplitudes_at(c, t);
    double w = std::norm(m.c0t);
    for (int n = 1; n <= m.truncation(); ++n) w += std::norm(m.A(n)) + std::norm(m.B(n));
    return w;
  };
  const double w0 = weight(0.0);
  for (double t : {1.0, 77.0, 1e4, 3e6, 1e7}) EXPECT_NEAR(weight(t), w0, 1e-13);
  const auto m = amplitudes_at(c, 5.0);
  EXPECT_EQ(m.A(0), complex{});
  EXPECT_EQ(m.B(m.truncation() + 1), complex{});
}

TEST(Amplitudes, PhasesFollowEnergies) {
  const auto c = prepare_state(bell(0.5, 0.2, 1.5));
  const auto& sp = c.spectrum();
  const double t = 123.456;
  const auto m = amplitudes_at(c, t);
  for (int n = 1; n <= 10; ++n) {
    const complex cp = c.c(n, branch::plus) * std::polar(1.0, -sp.energy(n, branch::plus) * t);
    const complex cm = c.c(n, branch::minus) * std::polar(1.0, -sp.energy(n, branch::minus) * t);
    const double mp = sp.mu(n, branch::plus), mm = sp.mu(n, branch::minus);
    EXPECT_NEAR(std::abs(m.A(n) - (mp * cp + mm * cm)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(m.B(n) - sp.zeta_sign(n) * (mm * cp - mp * cm)), 0.0, 1e-12);
  }
}
