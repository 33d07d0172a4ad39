#include <gtest/gtest.h>

#include <cmath>

#include "grwa/spectrum.hpp"
#include "oracles.hpp"

using namespace grwa;
namespace ref = grwa::testing;

TEST(ModelParams, DerivedQuantities) {
  const model_params p(2.0, 0.8, 0.3);
  EXPECT_DOUBLE_EQ(p.x(), 4.0 * 0.09 / 4.0);
  EXPECT_DOUBLE_EQ(p.delta_tilde(), 0.8 * std::exp(-0.5 * p.x()));
  EXPECT_DOUBLE_EQ(p.shift(), 0.15);
  EXPECT_THROW(model_params(0.0, 1.0, 0.1), error);
  EXPECT_THROW(model_params(1.0, -1.0, 0.1), error);
  EXPECT_THROW(model_params(1.0, 1.0, std::nan("")), error);
}

TEST(Adiabatic, EnergiesFromLaguerreSum) {
  const model_params p(1.0, 0.7, 0.45);
  for (int n = 0; n <= 20; ++n) {
    const auto [up, lo] = adiabatic_energies(p, n);
    const double split = 0.5 * p.delta_tilde() * ref::laguerre_sum(n, 0, p.x());
    EXPECT_NEAR(up, n - 0.25 * p.x() + split, 1e-12);
    EXPECT_NEAR(lo, n - 0.25 * p.x() - split, 1e-12);
  }
}

TEST(Spectrum, BlocksDiagonalized) {
  for (const auto& p : {model_params(1.0, 0.5, 0.2), model_params(1.0, 1.0, 0.9), model_params(1.0, 0.8, 0.01)}) {
    const auto sp = build_spectrum(p, 40);
    for (int n = 1; n <= 40; ++n) {
      const double upper = adiabatic_energies(p, n - 1).first;
      const double lower = adiabatic_energies(p, n).second;
      // zeta_n = (delta/2) <n-1|D(-sqrt x)|n>
      const double zeta = 0.5 * p.delta() * ref::displacement_sum(n - 1, n, complex{-std::sqrt(p.x()), 0.0}).real();
      EXPECT_NEAR(sp.zeta(n), zeta, 1e-12);
      EXPECT_NEAR(sp.eps(n), 0.5 * (upper - lower), 1e-12);

      // Eigenvalues of [[upper, zeta], [zeta, lower]].
      const double mid = 0.5 * (upper + lower);
      const double rad = std::sqrt(0.25 * (upper - lower) * (upper - lower) + zeta * zeta);
      EXPECT_NEAR(sp.energy(n, branch::plus), mid + rad, 1e-12);
      EXPECT_NEAR(sp.energy(n, branch::minus), mid - rad, 1e-12);

      // Eigenvectors (mu^+, sgn mu^-) and (mu^-, -sgn mu^+).
      const double mp = sp.mu(n, branch::plus), mm = sp.mu(n, branch::minus), sg = sp.zeta_sign(n);
      EXPECT_NEAR(mp * mp + mm * mm, 1.0, 1e-13);
      const double ep = sp.energy(n, branch::plus), em = sp.energy(n, branch::minus);
      EXPECT_NEAR(upper * mp + zeta * sg * mm, ep * mp, 1e-12);
      EXPECT_NEAR(zeta * mp + lower * sg * mm, ep * sg * mm, 1e-12);
      EXPECT_NEAR(upper * mm - zeta * sg * mp, em * mm, 1e-12);
      EXPECT_NEAR(zeta * mm - lower * sg * mp, -em * sg * mp, 1e-12);
    }
    EXPECT_NEAR(sp.ground_energy(), adiabatic_energies(p, 0).second, 1e-14);
  }
}

TEST(Spectrum, MatchesClosedFormEnergies) {
  const model_params p(1.0, 0.6, 0.35);
  const auto sp = build_spectrum(p, 30);
  const double x = p.x(), dt = p.delta_tilde();
  for (int n = 1; n <= 30; ++n) {
    const double l0m = ref::laguerre_sum(n - 1, 0, x), l0 = ref::laguerre_sum(n, 0, x);
    const double l1 = ref::laguerre_sum(n - 1, 1, x);
    const double center = n - 0.5 - 0.25 * x + 0.25 * dt * (l0m - l0);
    const double root = 0.5 * std::sqrt(std::pow(1.0 - 0.5 * dt * (l0m + l0), 2) + x * dt * dt / n * l1 * l1);
    EXPECT_NEAR(sp.energy(n, branch::plus), center + root, 1e-11);
    EXPECT_NEAR(sp.energy(n, branch::minus), center - root, 1e-11);
  }
}

TEST(Spectrum, UnitsOfOmega) {
  // Energies are reported in units of omega, so scaling all constants is a no-op.
  const auto a = build_spectrum(model_params(1.0, 0.5, 0.1), 12);
  const auto b = build_spectrum(model_params(2.0, 1.0, 0.2), 12);
  for (int n = 1; n <= 12; ++n) {
    EXPECT_NEAR(a.energy(n, branch::plus), b.energy(n, branch::plus), 1e-13);
    EXPECT_NEAR(a.energy(n, branch::minus), b.energy(n, branch::minus), 1e-13);
  }
}

TEST(Spectrum, ZeroTunnelingIsUncoupled) {
  const model_params p(1.0, 0.0, 0.4);
  const auto sp = build_spectrum(p, 10);
  for (int n = 1; n <= 10; ++n) {
    EXPECT_EQ(sp.zeta(n), 0.0);
    EXPECT_EQ(sp.zeta_sign(n), 1.0);
    EXPECT_NEAR(sp.energy(n, branch::plus), n - 0.25 * p.x(), 1e-14);
    EXPECT_NEAR(sp.energy(n, branch::minus), n - 1 - 0.25 * p.x(), 1e-14);
    EXPECT_NEAR(sp.mu(n, branch::plus) * sp.mu(n, branch::minus), 0.0, 1e-15);
  }
}

TEST(Spectrum, JaynesCummingsLimit) {
  const model_params p(1.0, 0.8, 0.005);
  const auto sp = build_spectrum(p, 20);
  for (int n = 1; n <= 20; ++n) {
    const auto [up, lo] = ref::jc_doublet(n, 0.8, 0.005);
    EXPECT_NEAR(sp.energy(n, branch::plus), up, 2e-4);
    EXPECT_NEAR(sp.energy(n, branch::minus), lo, 2e-4);
  }
}

TEST(Spectrum, AsymptoticDiagnostic) {
  const model_params p(1.0, 0.5, 0.5);  // x = 1
  const auto sp = build_spectrum(p, 200);
  for (auto b : {branch::plus, branch::minus}) {
    const double exact = sp.energy(200, b);
    EXPECT_LE(std::abs(asymptotic_energy(p, 200, b) - exact) / exact, 0.05);
  }
  EXPECT_THROW(asymptotic_energy(p, 0, branch::plus), error);
}

TEST(Spectrum, RejectsEmptyTower) { EXPECT_THROW(build_spectrum(model_params(1.0, 0.5, 0.1), 0), error); }
