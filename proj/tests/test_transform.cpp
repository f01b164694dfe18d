#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "maxnorm/transform.hpp"

using namespace maxnorm;

namespace {

Profile a13() { return Profile::spline(SplinePoly{Rational(4), {Rational(1), Rational(4)}}); }

}  // namespace

TEST(Transform, SineTransformExamples) {
  EXPECT_NEAR(sine_transform(Profile::exponential(1), 2.0), 0.4, 1e-14);
  EXPECT_NEAR(sine_transform(Profile::power_plus(1), pi), 1 / pi, 1e-14);
  EXPECT_EQ(sine_transform(Profile::power_plus(1), 0.0), 0.0);
  EXPECT_NEAR(sine_transform_quadrature(Profile::exponential(1), 2.0), 0.4, 1e-11);
  EXPECT_NEAR(sine_transform_quadrature(Profile::power_plus(1), pi), 1 / pi, 1e-12);
}

TEST(Transform, MonomialMomentsAgainstQuadrature) {
  for (double x : {0.0, 1e-4, 0.7, 3.0, 11.5, 40.0, 300.0}) {
    auto M = detail::monomial_fourier(14, x);
    for (int j : {0, 1, 2, 5, 9, 14}) {
      auto h = [j](double u) { return std::pow(u, j); };
      double re = integrate_oscillatory(h, 0.0, 1.0, x, Oscillation::cosine, {1e-15, 1e-14, 4000, true}).value;
      double im = integrate_oscillatory(h, 0.0, 1.0, x, Oscillation::sine, {1e-15, 1e-14, 4000, true}).value;
      EXPECT_NEAR(M[j].real(), re, 1e-13) << "x=" << x << " j=" << j;
      EXPECT_NEAR(M[j].imag(), im, 1e-13) << "x=" << x << " j=" << j;
    }
  }
}

TEST(Transform, ClosedFormMatchesQuadrature) {
  std::vector<Profile> ps{Profile::exponential(1.5), Profile::exp_poly(1, {1, 2, -0.5}), Profile::power_plus(3),
                          a13(), build_f1(a13()), build_f1(Profile::exponential(0.7))};
  for (const auto& p : ps)
    for (double x : {0.3, 1.0, 4.0, 17.0, 120.0}) {
      EXPECT_NEAR(sine_transform(p, x), sine_transform_quadrature(p, x), 1e-10) << p.describe() << " x=" << x;
      EXPECT_NEAR(cos_transform(p, x), cos_transform_quadrature(p, x), 1e-10) << p.describe() << " x=" << x;
    }
}

TEST(Transform, OriginValues) {
  EXPECT_NEAR(fhat_2d(Profile::exponential(1), 0, 0), 8.0, 1e-9);
  EXPECT_NEAR(fhat_2d(Profile::power_plus(1), 0, 0), 4.0 / 3.0, 1e-12);
  EXPECT_EQ(fhat_2d(Profile::zero(), 1, 2), 0.0);
}

TEST(Transform, Symmetry) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-8, 8);
  FhatEvaluator ev(Profile::power_plus(2));
  for (int i = 0; i < 20; ++i) {
    double a = U(rng), b = U(rng);
    double v = ev(a, b);
    EXPECT_NEAR(ev(b, a), v, 1e-12);
    EXPECT_NEAR(ev(-a, b), v, 1e-12);
    EXPECT_NEAR(ev(a, -b), v, 1e-12);
  }
}

TEST(Transform, ExponentialThreeWay) {
  auto p = Profile::exponential(1);
  FhatEvaluator ev(p);
  double a = ev(1, 2, TransformMethod::via_f0hat);
  double b = ev(1, 2, TransformMethod::via_derivative);
  auto o = oracle_2d(p, 1, 2);
  EXPECT_NEAR(a, b, 1e-7);
  EXPECT_NEAR(a, o.value, 1e-5 + o.tail_bound);
  EXPECT_LT(o.tail_bound, 1e-14);
}

TEST(Transform, AxisExtensionMatchesOracle) {
  // The exact axis value for Exponential(1) is 8 / (1 + y^2)^2.
  auto p = Profile::exponential(1);
  FhatEvaluator ev(p);
  for (double y : {0.5, 2.0, 5.0}) {
    double expect = 8.0 / std::pow(1 + y * y, 2);
    EXPECT_NEAR(ev(0, y), expect, 1e-10);
    EXPECT_NEAR(ev(0, y, TransformMethod::via_derivative), expect, 1e-9);
    EXPECT_NEAR(oracle_2d(p, 0, y).value, expect, 1e-7);
    // Continuity across the switch threshold.
    EXPECT_NEAR(ev(2 * kAxisThreshold, y), expect, 1e-6);
  }
}

TEST(Transform, OracleExamples) {
  EXPECT_NEAR(oracle_2d(Profile::power_plus(1), 0, 0, 1.0).value, 4.0 / 3.0, 1e-9);
  EXPECT_EQ(oracle_2d(Profile::zero(), 1, 1).value, 0.0);
}

TEST(Transform, PowerPlusTwoOracleAgreement) {
  auto p = Profile::power_plus(2);
  FhatEvaluator ev(p);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.1, 10);
  for (int i = 0; i < 25; ++i) {
    double y1 = U(rng), y2 = U(rng);
    double o = oracle_2d(p, y1, y2).value;
    EXPECT_NEAR(ev(y1, y2), o, 1e-6) << y1 << "," << y2;
    EXPECT_NEAR(ev(y1, y2, TransformMethod::via_derivative), o, 1e-6) << y1 << "," << y2;
  }
}

TEST(Transform, TabulatedThreeWay) {
  std::vector<double> g = linspace(0, 1, 21), v;
  for (double t : g) v.push_back(std::cos(1.3 * t) * (1 - t));
  auto p = Profile::tabulated(SampledCurve(g, v));
  FhatEvaluator ev(p);
  for (auto [y1, y2] : std::vector<std::pair<double, double>>{{0.4, 1.1}, {3.0, 3.5}, {0.0, 2.0}}) {
    double o = oracle_2d(p, y1, y2).value;
    EXPECT_NEAR(ev(y1, y2), o, 1e-6);
    EXPECT_NEAR(ev(y1, y2, TransformMethod::via_derivative), o, 1e-6);
  }
}

TEST(Transform, NormIdentity) {
  for (const auto& p : {Profile::exponential(1), Profile::power_plus(2), Profile::power_plus(0.5)})
    for (double power : {1.0, 2.0}) {
      auto o = oracle_norm(p, power);
      auto pw = [&](double t) { return t * std::pow(std::abs(p(t)), power); };
      double rhs = 8 * integrate(pw, 0.0, p.support_radius(), {1e-14, 1e-12, 4000, true}).value;
      EXPECT_NEAR((o.value + o.tail_bound) / rhs, 1.0, 1e-6) << p.describe() << " p=" << power;
    }
}

TEST(Transform, GDerivativeExamples) {
  auto e = g_derivative(Profile::exponential(1), 1.0);
  EXPECT_NEAR(e.path_a, 0.5, 1e-9);
  EXPECT_NEAR(e.path_b, 0.5, 1e-12);
  FhatEvaluator ev(Profile::power_plus(3));
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    auto r = ev.g_derivative(t);
    EXPECT_LT(r.discrepancy, 1e-7) << t;
    EXPECT_FALSE(r.hypothesis_flag);
  }
  double prev = INFINITY;
  for (double t : {1e-1, 1e-2, 1e-3}) {
    double v = std::abs(ev.g_prime(t));
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LT(prev, 1e-3);
  EXPECT_EQ(ev.g_prime(0.0), 0.0);
}

TEST(Transform, GDerivativeCosineIdentity) {
  // x * cos_transform(f1)(x) == g'(x) with g' from differentiating g numerically.
  FhatEvaluator ev(Profile::exp_poly(1, {1, 0.5}));
  for (double x : {0.7, 2.0, 6.0}) {
    double h = 1e-4;
    double fd = (ev.g(x + h) - ev.g(x - h)) / (2 * h);
    EXPECT_NEAR(ev.g_prime(x), fd, 1e-7);
  }
}

TEST(Transform, PowerPlusVariationGrows) {
  auto r = variation_bound(Profile::power_plus(1), 256.0, 100);
  EXPECT_GT(r.growth.slope, 0.1);
  for (std::size_t i = 1; i < r.variation_ladder.size(); ++i)
    EXPECT_GT(r.variation_ladder[i].second, r.variation_ladder[i - 1].second);
}

TEST(Transform, VariationExponential) {
  auto r = variation_bound(Profile::exponential(1), 60.0, 600);
  EXPECT_NEAR(r.variation, 3600.0 / 3601.0, 1e-6);
  // fhat >= 0, so its L1 mass over the plane is (2 pi)^2 f(0) = 4 pi^2.
  EXPECT_NEAR(r.lhs_estimate, 4 * pi * pi, 0.5);
  EXPECT_LT(r.lhs_estimate, 4 * pi * pi);
  auto z = variation_bound(Profile::zero(), 10.0);
  EXPECT_EQ(z.variation, 0.0);
  EXPECT_EQ(z.lhs_estimate, 0.0);
}

TEST(Transform, EndpointAsymptotics) {
  for (double x : {10.0, 50.0, 100.0}) {
    auto v = endpoint_asymptotic(0.0, x);
    cplx exact = (std::polar(1.0, x) - 1.0) / cplx(0, x);
    EXPECT_LT(std::abs(v.value - exact), 1e-14);
    EXPECT_EQ(v.depth, 0);
  }
  auto h = endpoint_asymptotic(-0.5, 100.0);
  EXPECT_LE(std::abs(h.value - endpoint_quadrature(-0.5, 100.0)), 5 * 0.5 / 1e6);
  auto d = endpoint_asymptotic(2.5, 50.0);
  EXPECT_EQ(d.depth, 3);
  cplx ref = endpoint_quadrature(2.5, 50.0);
  EXPECT_LE(std::abs(d.value - ref) / std::abs(ref), 1e-4);
  EXPECT_THROW(endpoint_asymptotic(-1.0, 10.0), domain_error);
}

TEST(Transform, EndpointSecondOrderSign) {
  // Dropping the alpha/x^2 term must make the approximation worse.
  for (double a : {-0.5, -0.3}) {
    double x = 80;
    cplx ref = endpoint_quadrature(a, x);
    double with = std::abs(endpoint_asymptotic(a, x, 3).value - ref);
    double without = std::abs(endpoint_asymptotic(a, x, 2).value - ref);
    EXPECT_LT(with, without);
  }
}
