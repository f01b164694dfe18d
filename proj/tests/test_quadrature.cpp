#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "maxnorm/quadrature.hpp"

using namespace maxnorm;

TEST(Quadrature, ExpSineOnHalfLine) {
  for (double t : {0.3, 1.0, 2.0, 7.5}) {
    auto r = integrate_oscillatory([](double u) { return std::exp(-u); }, 0.0, INFINITY, t, Oscillation::sine);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.value, t / (1 + t * t), 1e-9) << "t=" << t;
  }
}

TEST(Quadrature, ExpCosineOnHalfLine) {
  auto r = integrate_oscillatory([](double u) { return std::exp(-2 * u); }, 0.0, INFINITY, 3.0, Oscillation::cosine);
  EXPECT_NEAR(r.value, 2.0 / 13.0, 1e-9);
}

TEST(Quadrature, LinearTimesSineOnUnit) {
  auto r = integrate_oscillatory([](double u) { return 1 - u; }, 0.0, 1.0, pi, Oscillation::sine);
  EXPECT_NEAR(r.value, 1 / pi, 1e-10);
  for (double t : {0.5, 40.0, 333.0}) {
    auto q = integrate_oscillatory([](double u) { return 1 - u; }, 0.0, 1.0, t, Oscillation::sine);
    EXPECT_NEAR(q.value, (t - std::sin(t)) / (t * t), 1e-10);
  }
}

TEST(Quadrature, ConstantNoOscillation) {
  auto r = integrate_oscillatory([](double) { return 1.0; }, 0.0, 1.0, 0.0, Oscillation::none);
  EXPECT_NEAR(r.value, 1.0, 1e-14);
}

TEST(Quadrature, SlowAlgebraicTail) {
  // Dirichlet integral: conditionally convergent, needs the accelerated sum.
  auto s = integrate_oscillatory([](double u) { return 1.0 / u; }, 1e-12, INFINITY, 1.0, Oscillation::sine);
  EXPECT_NEAR(s.value, pi / 2, 1e-8);
}

TEST(Quadrature, LowFrequencyUsesPlainPath) {
  auto r = integrate_oscillatory([](double u) { return std::exp(-u); }, 0.0, INFINITY, 1e-10, Oscillation::cosine);
  EXPECT_NEAR(r.value, 1.0, 1e-9);
}

TEST(Quadrature, EndpointSingularity) {
  auto r = integrate([](double u) { return 1 / std::sqrt(u); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 2.0, 1e-8);
}

TEST(Quadrature, RejectsBadSpec) {
  QuadratureSpec s;
  s.abs_tol = 0;
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, 1.0, s), domain_error);
  s = {};
  s.max_subdivisions = 0;
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, 1.0, s), domain_error);
}

TEST(Quadrature, ReportsNonConvergence) {
  QuadratureSpec s{1e-14, 1e-14, 3, true};
  auto r = integrate([](double u) { return std::pow(u, -0.95); }, 0.0, 1.0, s);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.value, 0);
  EXPECT_THROW(integrate_value([](double u) { return std::pow(u, -0.95); }, 0.0, 1.0, 0.0, Oscillation::none, s),
               convergence_error);
}

TEST(QuadratureProperty, Linearity) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    double a = U(rng), b = U(rng), c1 = std::abs(U(rng)) + 0.2, c2 = std::abs(U(rng)) + 0.2, t = 1 + 4 * std::abs(U(rng));
    auto h1 = [&](double u) { return std::exp(-c1 * u); };
    auto h2 = [&](double u) { return u * std::exp(-c2 * u); };
    auto hc = [&](double u) { return a * h1(u) + b * h2(u); };
    double l = integrate_oscillatory(hc, 0.0, INFINITY, t, Oscillation::sine).value;
    double r = a * integrate_oscillatory(h1, 0.0, INFINITY, t, Oscillation::sine).value +
               b * integrate_oscillatory(h2, 0.0, INFINITY, t, Oscillation::sine).value;
    EXPECT_NEAR(l, r, 2e-10);
  }
}

TEST(QuadratureProperty, BreakpointsDoNotShiftResult) {
  auto h = [](double u) { return std::abs(u - 0.3) * std::exp(-u); };
  double bp[] = {0.3};
  auto with = integrate_oscillatory(h, 0.0, 2.0, 5.0, Oscillation::cosine, {}, bp);
  auto without = integrate_oscillatory(h, 0.0, 2.0, 5.0, Oscillation::cosine);
  EXPECT_NEAR(with.value, without.value, std::max(with.error, 1e-10) + without.error);
}
