#include <gtest/gtest.h>

#include <cmath>

#include "maxnorm/profile.hpp"

using namespace maxnorm;

namespace {

// Independent f1 oracle: direct quadrature of t f0(t) + int_t^inf f0.
double f1_oracle(const Profile& p, double t) {
  auto tail = integrate([&](double u) { return p(u); }, t, p.support_radius(), {1e-13, 1e-12, 4000, true});
  return t * p(t) + tail.value;
}

Profile a13() { return Profile::spline(SplinePoly{Rational(4), {Rational(1), Rational(4)}}); }

}  // namespace

TEST(Profile, EvaluateExamples) {
  EXPECT_EQ(evaluate(Profile::exponential(1), 0.0), 1.0);
  EXPECT_EQ(evaluate(Profile::power_plus(2), 1.5), 0.0);
  EXPECT_NEAR(evaluate(Profile::power_plus(3), 0.5), 0.125, 1e-15);
  EXPECT_THROW(evaluate(Profile::power_plus(1), -0.1), domain_error);
  EXPECT_EQ(evaluate(Profile::zero(), 0.3), 0.0);
}

TEST(Profile, ConstructionGates) {
  EXPECT_THROW(Profile::power_plus(0), domain_error);
  EXPECT_THROW(Profile::exponential(-1), domain_error);
  EXPECT_THROW(Profile::tabulated(SampledCurve({0.0, 1.0, 0.5}, {1, 2, 3})), domain_error);
  EXPECT_THROW(Profile::tabulated(SampledCurve({0.1, 1.0}, {1, 2})), domain_error);
  EXPECT_THROW(Profile::tabulated(SampledCurve({0.0, 1.0}, {1, 2}), 2), domain_error);
}

TEST(Profile, SupportInvariant) {
  for (const auto& p : {Profile::power_plus(0.5), a13(), Profile::tabulated(SampledCurve({0, 0.5, 2}, {1, 1, 1}))}) {
    double R = p.support_radius();
    EXPECT_EQ(p(R), 0.0);
    EXPECT_EQ(p(R * 1.7), 0.0);
  }
}

TEST(Profile, Derivatives) {
  auto e = Profile::exponential(1);
  EXPECT_NEAR(derivative(e, 2.0, 1).value, -std::exp(-2.0), 1e-15);
  EXPECT_NEAR(derivative(e, 2.0, 2).value, std::exp(-2.0), 1e-15);
  for (double a : {0.5, 1.0, 2.5})
    for (double t : {0.1, 0.5, 0.9})
      EXPECT_NEAR(derivative(Profile::power_plus(a), t, 1).value, -a * std::pow(1 - t, a - 1), 1e-13);
  auto at_edge = derivative(a13(), 1.0, 1);
  EXPECT_TRUE(at_edge.at_breakpoint);
  EXPECT_EQ(at_edge.value, 0.0);
  EXPECT_NEAR(derivative(a13(), 1.0 - 1e-9, 1).value, 0.0, 1e-12);
}

TEST(Profile, TabulatedDerivativeIsSegmentSlope) {
  auto p = Profile::tabulated(SampledCurve({0, 1, 2}, {2, 1, 3}));
  EXPECT_NEAR(derivative(p, 0.5, 1).value, -1.0, 1e-9);
  auto k = derivative(p, 1.0, 1);
  EXPECT_TRUE(k.at_breakpoint);
  EXPECT_NEAR(k.value, 2.0, 1e-6);
  EXPECT_THROW(derivative(p, 0.5, 2), domain_error);
}

TEST(Profile, BuildF1Examples) {
  auto e = build_f1(Profile::exponential(1));
  for (double t : {0.0, 0.5, 3.0}) EXPECT_NEAR(e(t), (1 + t) * std::exp(-t), 1e-15);
  for (double a : {0.5, 1.0, 3.0, 3.5}) {
    auto f = build_f1(Profile::power_plus(a));
    for (double t : {0.0, 0.2, 0.7, 0.99})
      EXPECT_NEAR(f(t), std::pow(1 - t, a) * (1 + a * t) / (a + 1), 1e-14) << "alpha=" << a;
  }
  auto one = build_f1(Profile::power_plus(1));
  for (double t : {0.0, 0.3, 0.8}) EXPECT_NEAR(one(t), (1 - t * t) / 2, 1e-15);
}

TEST(Profile, BuildF1AgainstQuadratureOracle) {
  std::vector<Profile> ps{Profile::exponential(1.3), Profile::power_plus(2.2), a13(),
                          Profile::exp_poly(0.8, {1, -0.5, 0.25})};
  for (const auto& p : ps) {
    auto f1 = build_f1(p);
    for (double t : {0.0, 0.1, 0.3, 0.6, 0.95, 2.0})
      EXPECT_NEAR(f1(t), f1_oracle(p, t), 1e-10) << p.describe() << " t=" << t;
  }
}

TEST(Profile, TabulatedF1ExactAtNodes) {
  std::vector<Profile> ps{Profile::tabulated(SampledCurve({0, 0.3, 0.6, 1.0}, {1, 0.5, 0.4, 0.1})),
                          Profile::tabulated(SampledCurve({0, 0.2, 0.5, 0.8, 1.0}, {1, 0.7, 0.4, 0.1, 0.0}), 3)};
  for (const auto& p : ps) {
    auto f1 = build_f1(p);
    const auto& grid = std::get<Tabulated>(p.family()).curve.grid;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i)
      EXPECT_NEAR(f1(grid[i]), f1_oracle(p, grid[i]), 1e-12) << p.describe() << " node " << i;
  }
}

TEST(Profile, SplineF1IsExact) {
  auto f1 = build_f1(a13());
  const auto& sp = std::get<SplinePoly>(f1.family());
  EXPECT_EQ(sp.m, Rational(4));
  for (double t : {0.1, 0.5, 0.9}) EXPECT_NEAR(f1(t), f1_oracle(a13(), t), 1e-13);
}

TEST(Profile, F0FromF1Examples) {
  auto f0 = build_f0_from_f1(build_f1(Profile::exponential(1)));
  EXPECT_NEAR(f0(1.0), std::exp(-1.0), 1e-14);
  // The inversion uses f1'(u)/u; the oracle integrates it directly.
  auto f1 = build_f1(Profile::exponential(1));
  auto direct = integrate([&](double u) { return -f1.derivative(u, 1).value / u; }, 1.0, INFINITY);
  EXPECT_NEAR(f0(1.0), direct.value, 1e-10);

  auto round = build_f0_from_f1(Profile::truncated_power(1.0, {0.5, 0.5}));
  for (int i = 0; i < 100; ++i) {
    double t = 1.2 * i / 99.0;
    EXPECT_NEAR(round(t), t < 1 ? 1 - t : 0.0, 1e-8);
  }
  EXPECT_TRUE(build_f0_from_f1(Profile::zero()).is_zero());
  EXPECT_THROW(build_f0_from_f1(Profile::exponential(1)), domain_error);
}

TEST(Profile, RoundTripAllFamilies) {
  std::vector<Profile> ps{Profile::exponential(2), Profile::power_plus(3.5), a13(),
                          Profile::exp_poly(1, {1, 0, -0.3})};
  for (const auto& p : ps) {
    auto back = build_f1(build_f0_from_f1(build_f1(p)));
    auto f1 = build_f1(p);
    for (int i = 0; i < 100; ++i) {
      double t = 1.5 * i / 99.0;
      EXPECT_NEAR(back(t), f1(t), 1e-10) << p.describe();
    }
  }
  auto rt = build_f0_from_f1(build_f1(a13()));
  EXPECT_EQ(std::get<SplinePoly>(rt.family()), std::get<SplinePoly>(a13().family()));
}

TEST(Profile, TabulatedInverseRecoversF0) {
  std::vector<double> g, v;
  for (int i = 0; i <= 400; ++i) {
    double t = i / 400.0;
    g.push_back(t);
    v.push_back((1 - t * t) / 2);
  }
  auto f0 = build_f0_from_f1(Profile::tabulated(SampledCurve(g, v), 3));
  for (double t : {0.05, 0.3, 0.5, 0.9}) EXPECT_NEAR(f0(t), 1 - t, 1e-6);
}

TEST(Profile, Moments) {
  EXPECT_NEAR(moment(Profile::exponential(1), 1), 1.0, 1e-10);
  EXPECT_NEAR(moment(Profile::power_plus(1), 1), 1.0 / 6, 1e-12);
  EXPECT_EQ(moment(Profile::zero(), 0), 0.0);
  EXPECT_NEAR(moment(Profile::exp_poly(1, {1, -1}), 0, true), 2 / std::exp(1.0), 1e-9);
}

TEST(ProfileProperty, F1PrimeIsTTimesF0Prime) {
  std::vector<Profile> ps{Profile::exponential(1), Profile::power_plus(2.5), a13(), Profile::exp_poly(2, {1, 1})};
  for (const auto& p : ps) {
    auto f1 = build_f1(p);
    for (double t : linspace(0.01, 0.99, 40))
      EXPECT_NEAR(f1.derivative(t, 1).value, t * p.derivative(t, 1).value, 1e-8) << p.describe();
  }
}

TEST(ProfileProperty, F1SlopeAtZeroVanishes) {
  for (const auto& p : {Profile::exponential(1), Profile::power_plus(0.5), a13()}) {
    auto f1 = build_f1(p);
    double prev = INFINITY;
    for (double h : {1e-1, 1e-2, 1e-3, 1e-4}) {
      double slope = std::abs((f1(h) - f1(0)) / h);
      EXPECT_LT(slope, prev);
      prev = slope;
    }
    EXPECT_LT(prev, 1e-3);
  }
}

TEST(ProfileProperty, F1AsDerivativeIntegral) {
  for (const auto& p : {Profile::exponential(1), Profile::power_plus(2), a13()}) {
    auto f1 = build_f1(p);
    for (double t : {0.0, 0.25, 0.75}) {
      auto r = integrate([&](double u) { return -u * p.derivative(u, 1).value; }, t, p.support_radius(),
                         {1e-12, 1e-12, 4000, true}, p.breakpoints());
      EXPECT_NEAR(f1(t), r.value, 1e-10);
    }
  }
}

TEST(Profile, ModulusExamples) {
  auto p = Profile::power_plus(1);
  auto m = modulus_l1(p, Derivand::f0_prime, 0.25);
  EXPECT_NEAR(m.value, 0.25, 1e-7);
  EXPECT_NEAR(m.argmax_delta, 0.25, 1e-15);
  EXPECT_EQ(modulus_l1(p, Derivand::f0_prime, 0.0).value, 0.0);
  for (const auto& q : {Profile::exponential(1), Profile::power_plus(1.5), a13()})
    for (double t : {0.1, 1.0, 10.0}) {
      auto r = modulus_l1(q, Derivand::f1_prime, t, 16, 1);
      EXPECT_LE(r.value, 2 * r.g_l1_norm + 1e-9);
    }
}
