#include <gtest/gtest.h>

#include <boost/math/tools/roots.hpp>

#include <cmath>

#include "maxnorm/dimwalk.hpp"
#include "maxnorm/transform.hpp"

using namespace maxnorm;

namespace {

Profile half_one_minus_t2() { return Profile::spline(SplinePoly{Rational(0), {Rational(1, 2), Rational(0), Rational(-1, 2)}}); }
Profile f3_closed() { return Profile::spline(SplinePoly{Rational(0), {Rational(1, 2), Rational(0), Rational(-1, 6)}}); }

}  // namespace

TEST(Dimwalk, DescendExamples) {
  auto f1 = half_one_minus_t2();
  for (double t : linspace(0, 1, 11)) EXPECT_NEAR(descend(f1, 3, t), 0.5 - t * t / 6, 1e-13);
  // Beyond the support: (1/t) int_0^1 f1 = 1 / (3t).
  EXPECT_NEAR(descend(f1, 3, 2.0), 1.0 / 6.0, 1e-13);
  EXPECT_EQ(descend(Profile::zero(), 5, 0.7), 0.0);
  EXPECT_THROW(descend(f1, 1, 0.5), domain_error);
  for (int d : {2, 3, 4, 5, 7}) {
    double w = integrate([d](double u) { return std::pow(1 - u * u, 0.5 * (d - 3)); }, 0.0, 1.0).value;
    if (d == 2) w = pi / 2;
    EXPECT_NEAR(descend(Profile::exponential(1), d, 0.0), w, 1e-10) << d;
  }
}

TEST(Dimwalk, DescendTwoDimensionsOracle) {
  // d = 2 with f1 = 1 - t^2 on [0, 1], t <= 1: int_0^{pi/2} (1 - t^2 sin^2) = pi/2 (1 - t^2/2).
  auto f1 = Profile::spline(SplinePoly{Rational(0), {Rational(1), Rational(0), Rational(-1)}});
  for (double t : {0.0, 0.3, 0.9}) EXPECT_NEAR(descend(f1, 2, t), pi / 2 * (1 - t * t / 2), 1e-12);
}

TEST(Dimwalk, AscendRoundTrip) {
  auto f3 = f3_closed();
  for (double u : linspace(0.05, 0.95, 19)) {
    auto v = ascend_odd(f3, 3, u);
    EXPECT_NEAR(v.value, (1 - u * u) / 2, 1e-6) << u;
    EXPECT_FALSE(v.unstable);
  }
  // Ascent of the numerically descended profile.
  auto f1 = Profile::exponential(1);
  auto fd = [&](double s) { return descend(f1, 5, s); };
  for (double u : {0.2, 0.5, 0.9}) EXPECT_NEAR(ascend_odd(fd, 5, u).value, std::exp(-u), 1e-5) << u;
}

TEST(Dimwalk, AscendExactMatchesNumeric) {
  auto lp = ascend_exact(std::get<SplinePoly>(f3_closed().family()), 3);
  EXPECT_EQ(lp.size(), 2u);
  EXPECT_EQ(lp.at(0), Rational(1, 2));
  EXPECT_EQ(lp.at(2), Rational(-1, 2));
  SplinePoly a{Rational(5), {Rational(1), Rational(5)}};  // (1 - t)^5 (1 + 5t)
  for (int d : {3, 5}) {
    auto ex = ascend_exact_profile(a, d);
    for (double u : {0.1, 0.4, 0.8})
      EXPECT_NEAR(ascend_odd(Profile::spline(a), d, u).value, ex(u), d == 3 ? 1e-8 : 1e-6) << d << " " << u;
  }
}

TEST(Dimwalk, AscendLocalVanishing) {
  auto fd = [](double s) { return s < 0.5 ? 0.0 : (s - 0.5) * (s - 0.5); };
  for (double u : {0.1, 0.3, 0.45}) EXPECT_EQ(ascend_odd(fd, 3, u).value, 0.0);
}

TEST(Dimwalk, DescendThenAscendExact) {
  // Descent of an exact f1, then exact ascent, gives f1 back.
  auto f1 = build_f1(Profile::spline(SplinePoly{Rational(4), {Rational(1), Rational(4)}}));
  for (double u : {0.2, 0.5, 0.8}) {
    auto fd = [&](double s) { return descend(f1, 3, s); };
    EXPECT_NEAR(ascend_odd(fd, 3, u).value, f1(u), 1e-6);
  }
}

TEST(Dimwalk, BesselKernel) {
  for (double t : {0.0, 0.5, 3.0, 20.0}) {
    EXPECT_NEAR(bessel_j(0.5, t), t == 0 ? 1.0 : std::sin(t) / t, 1e-13);
    EXPECT_EQ(bessel_j(-0.5, t), std::cos(t));
  }
  for (double lam : {-0.3, 0.0, 0.25, 1.5, 3.0}) {
    double j0 = 0.5 * std::beta(0.5, lam + 0.5);
    EXPECT_NEAR(bessel_j(lam, 0.0), j0, 1e-10) << lam;
    EXPECT_NEAR(bessel_j_normalized(lam, 0.0), 1.0, 1e-12);
  }
  // j_0(t) = (pi/2) J_0(t).
  for (double t : {1.0, 7.5, 40.0}) EXPECT_NEAR(bessel_j(0.0, t), pi / 2 * std::cyl_bessel_j(0.0, t), 1e-10) << t;
  EXPECT_THROW(bessel_j(-0.7, 1.0), domain_error);
}

TEST(Dimwalk, BesselZeros) {
  for (int k = 1; k <= 5; ++k) {
    auto f = [](double t) { return bessel_j(0.5, t); };
    boost::uintmax_t it = 100;
    auto [a, b] = boost::math::tools::toms748_solve(f, k * pi - 0.5, k * pi + 0.5,
                                                   boost::math::tools::eps_tolerance<double>(50), it);
    EXPECT_NEAR(0.5 * (a + b), k * pi, 1e-10);
  }
}

TEST(Dimwalk, MomentConditions) {
  // f1 = t^2 - 1/3 on [0, 1] has zero mean, so the d = 3 descent vanishes past 1.
  auto f1 = Profile::spline(SplinePoly{Rational(0), {Rational(-1, 3), Rational(0), Rational(1)}});
  auto r = support_moment_conditions(f1, 3);
  ASSERT_EQ(r.moments.size(), 1u);
  EXPECT_TRUE(r.moments_vanish);
  for (auto [t, v] : r.descent_tail) EXPECT_LE(std::abs(v), 1e-8) << t;

  auto pos = support_moment_conditions(half_one_minus_t2(), 5);
  ASSERT_EQ(pos.moments.size(), 2u);
  EXPECT_GT(pos.moments[0], 0);
  EXPECT_GT(pos.moments[1], 0);
  EXPECT_FALSE(pos.moments_vanish);
  // Descent beyond the support shrinks like 1/t.
  EXPECT_NEAR(pos.descent_tail[2].second * 5.0, pos.descent_tail[1].second * 2.0, 0.1 * pos.descent_tail[1].second * 2);

  auto z = support_moment_conditions(Profile::zero(), 5);
  for (double m : z.moments) EXPECT_EQ(m, 0.0);
}

TEST(DimwalkProperty, PositiveDefinitenessTransport) {
  // f1 = (1 + t) e^{-t}; the three-dimensional radial transform of f3 is
  // proportional to int f3(t) t sin(st) dt = 2 / (s (1 + s^2)^2).
  auto f1 = Profile::exp_poly(1, {1, 1});
  for (double s : {0.5, 1.0, 2.0, 4.0}) {
    auto h = [&](double t) { return descend(f1, 3, t) * t; };
    double v = integrate_oscillatory(h, 0.0, INFINITY, s, Oscillation::sine, {1e-10, 1e-8, 8000, true}).value;
    EXPECT_GE(v, 0) << s;
    EXPECT_NEAR(v, 2 / (s * std::pow(1 + s * s, 2)), 1e-5) << s;
  }
}
