#include <gtest/gtest.h>

#include <cmath>

#include "grwa/specfun.hpp"
#include "oracles.hpp"

using namespace grwa;
namespace ref = grwa::testing;

TEST(Laguerre, MatchesFiniteSum) {
  for (double x : {0.0, 0.04, 0.81, 2.5, 6.76})
    for (int j = 0; j <= 12; ++j)
      for (int n = 0; n <= 30; ++n) {
        const double want = ref::laguerre_sum(n, j, x);
        EXPECT_NEAR(laguerre(n, j, x), want, 1e-10 * std::max(1.0, std::abs(want))) << n << ' ' << j << ' ' << x;
      }
}

TEST(Laguerre, ColumnAndTableAgreeWithScalar) {
  const laguerre_table table(1.7, 25, 9);
  for (int j = 0; j <= 9; ++j) {
    const auto col = laguerre_column(25, j, 1.7);
    for (int n = 0; n <= 25; ++n) {
      EXPECT_DOUBLE_EQ(col[n], laguerre(n, j, 1.7));
      EXPECT_DOUBLE_EQ(table(n, j), col[n]);
    }
  }
}

TEST(Laguerre, RejectsInvalidArguments) {
  EXPECT_THROW(laguerre(-1, 0, 1.0), error);
  EXPECT_THROW(laguerre(2, -1, 1.0), error);
  EXPECT_THROW(laguerre(2, 0, -0.5), error);
  EXPECT_THROW(laguerre(2, 0, std::nan("")), error);
}

TEST(Laguerre, AsymptoticFormTracksLargeDegree) {
  // Leading term against the recurrence at n = 10^4, x = 1; the neglected
  // term is O(n^{j/2 - 3/4}), i.e. relative O(n^{-1/2}).
  for (int j : {0, 1}) {
    const int n = 10000;
    const double exact = laguerre(n, j, 1.0);
    const double envelope = std::pow(n, 0.5 * j - 0.25) / std::sqrt(std::numbers::pi) * std::exp(0.5);
    EXPECT_NEAR(laguerre_asymptotic(n, j, 1.0), exact, 3e-2 * envelope) << j;
  }
}

TEST(Charlier, MatchesDefinition) {
  for (double tau : {0.3, 1.0, 4.2})
    for (int n = 0; n <= 8; ++n)
      for (int m = 0; m <= 8; ++m) {
        long double s = 0.0L, term = 1.0L;
        for (int k = 0; k <= std::min(n, m); ++k) {
          if (k > 0) term *= -static_cast<long double>(n - k + 1) * (m - k + 1) / (k * tau);
          s += term;
        }
        EXPECT_NEAR(charlier_kernel(n, m, tau), static_cast<double>(s), 1e-11 * std::max(1.0L, std::abs(s)));
        EXPECT_DOUBLE_EQ(charlier_kernel(n, m, tau), charlier_kernel(m, n, tau));
      }
  EXPECT_THROW(charlier_kernel(1, 1, 0.0), error);
}

TEST(Charlier, BilinearIdentity) {
  for (double tau : {0.5, 1.7})
    for (int n = 0; n <= 5; ++n)
      for (int m = 0; m <= 5; ++m) {
        long double lhs = 0.0L, w = 1.0L;
        for (int k = 0; k < 150; ++k) {
          if (k > 0) w *= -tau / k;
          lhs += w * charlier_kernel(n, k, tau) * charlier_kernel(k, m, tau);
        }
        const double rhs = std::ldexp(1.0, n + m) * std::exp(-tau) * charlier_kernel(n, m, 4.0 * tau);
        EXPECT_NEAR(static_cast<double>(lhs), rhs, 1e-10 * std::max(1.0, std::abs(rhs)));
      }
}

TEST(Kummer, MatchesDirectSeries) {
  for (double z : {-0.01, -0.5, -3.0, -9.0})
    for (double a : {-3.0, -0.5, 0.5, 2.5, 7.0})
      for (double b : {0.5, 1.5}) {
        const double want = ref::kummer_direct(a, b, z);
        EXPECT_NEAR(kummer_1f1(a, b, z), want, 1e-11 * std::max(1.0, std::abs(want))) << a << ' ' << b << ' ' << z;
      }
  EXPECT_DOUBLE_EQ(kummer_1f1(2.0, 1.5, 0.0), 1.0);
  EXPECT_THROW(kummer_1f1(1.0, 1.5, 0.5), error);
  EXPECT_THROW(kummer_1f1(1.0, -1.0, -0.5), error);
}

TEST(RadialMoments, MatchQuadrature) {
  for (double X : {-1.5, -0.3, 0.0, 0.2, 0.25, 0.3, 0.8, 2.0, 4.5})
    for (int q : {0, 1, 2, 5, 11, 24, 40}) {
      const double want = ref::radial_quadrature(q, X);
      const auto all = radial_moments(40, X);
      EXPECT_NEAR(all[q], want, 1e-9 * want) << "q=" << q << " X=" << X;
    }
}

TEST(RadialMoments, KummerFormAgreesWhereStable) {
  for (double X : {-2.0, -0.4, 0.0, 0.1})
    for (int q = 0; q <= 30; ++q) {
      const double want = ref::radial_quadrature(q, X);
      EXPECT_NEAR(radial_moment(q, X), want, 1e-9 * want) << q << ' ' << X;
    }
}

TEST(RadialMoments, HighOrderStaysPositiveAndFinite) {
  for (double X : {0.5, 3.0, 8.0}) {
    const auto v = radial_moments(300, X);
    for (double y : v) {
      EXPECT_TRUE(std::isfinite(y));
      EXPECT_GT(y, 0.0);
    }
    EXPECT_NEAR(v[0], 0.5 * std::sqrt(std::numbers::pi) * std::erfc(X), 1e-15);
  }
}

TEST(Displacement, ElementMatchesNormalOrderedSum) {
  for (complex z : {complex{0.3, 0.0}, complex{-1.2, 0.7}, complex{0.0, -2.1}, complex{2.5, 1.5}})
    for (int m = 0; m <= 20; ++m)
      for (int n = 0; n <= 20; ++n) {
        const complex want = ref::displacement_sum(m, n, z);
        EXPECT_NEAR(std::abs(displacement_element(m, n, z) - want), 0.0, 1e-12) << m << ' ' << n << ' ' << z;
      }
  EXPECT_EQ(displacement_element(3, 3, 0.0), complex(1.0, 0.0));
  EXPECT_EQ(displacement_element(3, 2, 0.0), complex(0.0, 0.0));
}

TEST(Displacement, OverlapIsDisplacementBySqrtX) {
  for (double x : {0.0, 0.04, 1.0, 5.29})
    for (int m = 0; m <= 15; ++m)
      for (int n = 0; n <= 15; ++n) {
        const complex want = ref::displacement_sum(m, n, complex{-std::sqrt(x), 0.0});
        EXPECT_NEAR(displaced_overlap(m, n, x), want.real(), 1e-12);
      }
}

TEST(Displacement, OverlapHandlesLargeIndices) {
  // Unitarity row check at indices where factorials overflow a double.
  const double x = 2.0;
  double s = 0.0;
  for (int m = 0; m <= 700; ++m) s += std::pow(displaced_overlap(m, 300, x), 2);
  EXPECT_NEAR(s, 1.0, 1e-10);
}

TEST(Displacement, CoresReproduceElements) {
  const int dim = 24;
  displacement_cores cores(dim);
  const complex z = std::polar(1.9, 0.8);
  cores.evaluate(std::abs(z));
  for (int j = 0; j < dim; ++j)
    for (int n = 0; n + j < dim; ++n) {
      const complex phase = std::polar(1.0, j * std::arg(z));
      EXPECT_NEAR(std::abs(displacement_element(n + j, n, z) - cores(n, j) * phase), 0.0, 1e-13);
      const double sign = (j % 2 == 1) ? -1.0 : 1.0;
      EXPECT_NEAR(std::abs(displacement_element(n, n + j, z) - sign * cores(n, j) * std::conj(phase)), 0.0, 1e-13);
    }
}

TEST(Displacement, CoherentOverlapFramePhase) {
  const model_params p(1.0, 0.5, 0.3);
  const complex alpha{1.1, -0.6};
  const double s = p.shift();
  for (int n = 0; n < 6; ++n)
    for (int k = 0; k < 6; ++k) {
      const complex plus = std::polar(1.0, -s * alpha.imag()) * ref::displacement_sum(n, k, alpha + s);
      const complex minus = std::polar(1.0, s * alpha.imag()) * ref::displacement_sum(n, k, alpha - s);
      EXPECT_NEAR(std::abs(coherent_displaced_overlap(n, branch::plus, alpha, k, p) - plus), 0.0, 1e-13);
      EXPECT_NEAR(std::abs(coherent_displaced_overlap(n, branch::minus, alpha, k, p) - minus), 0.0, 1e-13);
    }
}

TEST(LogFactorial, SmallValues) {
  EXPECT_DOUBLE_EQ(log_factorial(0), 0.0);
  EXPECT_NEAR(log_factorial(10), std::log(3628800.0), 1e-12);
  EXPECT_THROW(log_factorial(-2), error);
}
