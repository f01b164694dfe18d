#include <gtest/gtest.h>

#include <cmath>

#include "maxnorm/positivity.hpp"

using namespace maxnorm;

namespace {

// First positive root of tan x = x, by bisection on sin x - x cos x.
double first_tan_root() {
  double lo = pi, hi = 1.5 * pi;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (std::sin(mid) - mid * std::cos(mid) < 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Positivity, CosTransformExamples) {
  auto f1 = build_f1(Profile::exponential(1));
  EXPECT_NEAR(cos_transform_f1(f1, 1.0), 0.5, 1e-14);
  for (double x : linspace(0, 20, 41)) EXPECT_NEAR(cos_transform_f1(f1, x), 2 / std::pow(1 + x * x, 2), 1e-13);
  auto q = build_f1(Profile::power_plus(1));
  for (double x : {0.5, 3.0, 4.4, 4.6, 9.0})
    EXPECT_NEAR(cos_transform_f1(q, x), (std::sin(x) - x * std::cos(x)) / std::pow(x, 3), 1e-12);
  EXPECT_NEAR(cos_transform_f1(q, 0.0), 1.0 / 3.0, 1e-14);
}

TEST(Positivity, ExponentialStrictlyPositive) {
  auto v = check_pd_via_f1(Profile::exponential(1));
  EXPECT_EQ(v.verdict, Verdict::strictly_positive);
  EXPECT_GT(v.min_margin, 0);
  EXPECT_FALSE(v.witness.has_value());
  EXPECT_TRUE(v.parts_check);
  EXPECT_NEAR(v.moment_t_f1p, -2.0, 1e-9);
  EXPECT_TRUE(v.pv_settled);
  auto d = check_pd_direct(Profile::exponential(1), {20.0, 200});
  EXPECT_EQ(d.verdict, Verdict::strictly_positive);
  EXPECT_GT(d.min_margin, 0);
}

TEST(Positivity, PowerPlusOneIndefinite) {
  auto v = check_pd_via_f1(Profile::power_plus(1));
  ASSERT_EQ(v.verdict, Verdict::indefinite);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_NEAR(v.witness->x, first_tan_root(), 0.01);
  EXPECT_LT(v.witness->value, -v.tolerance);
  EXPECT_LE(v.min_margin, v.witness->value);

  auto d = check_pd_direct(Profile::power_plus(1), {40.0, 120});
  ASSERT_EQ(d.verdict, Verdict::indefinite);
  // A negative fhat(a, b) means g(a + b) < g(b - a): g decreases inside [b - a, b + a].
  FhatEvaluator ev(Profile::power_plus(1));
  double a = d.witness->x, b = d.witness->y;
  EXPECT_LT(ev.g(a + b), ev.g(b - a) + 1e-12);
  bool found = false;
  for (double t : linspace(std::max(b - a, 1e-3), b + a, 400)) found = found || ev.g_prime(t) < 0;
  EXPECT_TRUE(found);
}

TEST(Positivity, PowerPlusThreeAndAHalf) {
  auto v = check_pd_via_f1(Profile::power_plus(3.5));
  EXPECT_EQ(v.verdict, Verdict::strictly_positive) << v.min_margin << " tol " << v.tolerance;
}

TEST(Positivity, ZeroProfile) {
  auto v = check_pd_via_f1(Profile::zero(), {10.0, 64});
  EXPECT_EQ(v.verdict, Verdict::nonnegative);
  EXPECT_EQ(v.min_margin, 0.0);
  auto d = check_pd_direct(Profile::zero(), {10.0, 20});
  EXPECT_EQ(d.verdict, Verdict::nonnegative);
  EXPECT_EQ(d.min_margin, 0.0);
  auto m = monotonicity_of_g(Profile::zero(), 10.0, 50);
  EXPECT_EQ(m.min_g_prime, 0.0);
}

TEST(Positivity, MonotonicityOfG) {
  auto e = monotonicity_of_g(Profile::exponential(1), 50.0);
  EXPECT_GT(e.min_g_prime, 0);
  EXPECT_TRUE(e.nondecreasing);
  auto p = monotonicity_of_g(Profile::power_plus(1), 50.0);
  EXPECT_LT(p.min_g_prime, 0);
  EXPECT_GT(p.sign_changes, 0u);
  EXPECT_FALSE(p.nondecreasing);
}

TEST(PositivityProperty, RoutesAgree) {
  std::vector<Profile> ps{Profile::exponential(1), Profile::power_plus(1), Profile::power_plus(3),
                          Profile::exp_poly(1, {1, -0.8}),
                          Profile::spline(SplinePoly{Rational(4), {Rational(1), Rational(4)}})};
  for (const auto& p : ps) {
    double X = std::min(default_scan_extent(p), 60.0);
    auto a = check_pd_via_f1(p, {X, 1024});
    auto b = check_pd_direct(p, {X, 80});
    auto m = monotonicity_of_g(p, X, 1024);
    bool a_neg = a.verdict == Verdict::indefinite, b_neg = b.verdict == Verdict::indefinite;
    EXPECT_EQ(a_neg, b_neg) << p.describe();
    EXPECT_TRUE(m.consistent_with(b)) << p.describe();
  }
}

TEST(PositivityProperty, XTimesCosTransformIsGPrime) {
  for (const auto& p : {Profile::exponential(1), Profile::power_plus(2.5)}) {
    FhatEvaluator ev(p);
    for (double x : {0.3, 1.0, 4.0, 12.0})
      EXPECT_NEAR(x * cos_transform_f1(ev.f1(), x), ev.g_prime_by_derivative(x), 1e-6);
  }
}
