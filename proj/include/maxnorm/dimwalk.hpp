#pragma once

// Radial profiles across dimensions: the descent f1 -> f_d, its inverse for
// odd d, the kernel j_lambda and the moment conditions for compact support.

#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/polynomial.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/quadrature.hpp"

namespace maxnorm {

namespace detail {

inline QuadratureSpec dimwalk_spec() { return {1e-14, 1e-12, 8000, true}; }

}  // namespace detail

/// f_d(t) = int_0^1 (1 - u^2)^{(d-3)/2} f1(ut) du.
inline double descend(const Profile& f1, int d, double t, const QuadratureSpec& spec = detail::dimwalk_spec()) {
  if (d < 2) throw domain_error("descent needs d >= 2");
  if (!(t >= 0)) throw domain_error("descent argument must be >= 0");
  if (f1.is_zero()) return 0.0;
  double R = f1.support_radius();
  if (d == 2) {
    // u = sin(theta) removes the (1 - u^2)^{-1/2} endpoint weight.
    std::vector<double> cuts;
    if (t > 0)
      for (double b : f1.breakpoints())
        if (b < t) cuts.push_back(std::asin(b / t));
    auto h = [&](double th) { return f1.eval_unchecked(t * std::sin(th)); };
    return integrate(h, 0.0, pi / 2, spec, cuts).value;
  }
  std::vector<double> cuts;
  if (t > 0)
    for (double b : f1.breakpoints())
      if (b < t) cuts.push_back(b / t);
  int e = d - 3;
  auto h = [&](double u) {
    double ut = u * t;
    if (ut >= R) return 0.0;
    double w = e % 2 == 0 ? std::pow(1 - u * u, e / 2) : std::pow(1 - u * u, 0.5 * e);
    return w * f1.eval_unchecked(ut);
  };
  return integrate(h, 0.0, 1.0, spec, cuts).value;
}

/// Laurent polynomial in u with exact coefficients.
using Laurent = std::map<int, Rational>;

inline double eval_laurent(const Laurent& p, double u) {
  double s = 0;
  for (const auto& [k, c] : p)
    if (c != 0) s += to_double(c) * std::pow(u, k);
  return s;
}

namespace detail {

// D = (1 / (2u)) d/du on u^k gives (k / 2) u^{k-2}.
inline Laurent half_inverse_derivative(const Laurent& p) {
  Laurent out;
  for (const auto& [k, c] : p)
    if (k != 0 && c != 0) out[k - 2] += c * Rational(k, 2);
  return out;
}

inline long factorial(int n) {
  long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline void require_odd(int d) {
  if (d < 3 || d % 2 == 0) throw domain_error("ascent needs odd d >= 3");
}

}  // namespace detail

/// Exact ascent f1(u) = 2u / (d1 - 1)! * D^{d1}[u^{d-2} f_d(u)] on [0, 1) for
/// a spline f_d with integer exponent. The result is a Laurent polynomial;
/// negative powers mean f_d was not the descent of a bounded f1.
inline Laurent ascend_exact(const SplinePoly& fd, int d) {
  detail::require_odd(d);
  if (denominator(fd.m) != 1) throw domain_error("exact ascent needs an integer spline exponent");
  auto coeffs = poly::mul(poly::one_minus_t_pow<Rational>(static_cast<int>(numerator(fd.m))), fd.coeffs);
  Laurent p;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (coeffs[k] != 0) p[static_cast<int>(k) + d - 2] = coeffs[k];
  int d1 = (d - 1) / 2;
  for (int i = 0; i < d1; ++i) p = detail::half_inverse_derivative(p);
  Laurent out;
  Rational s(2, detail::factorial(d1 - 1));
  for (const auto& [k, c] : p)
    if (c != 0) out[k + 1] = c * s;
  return out;
}

/// The exact ascent as a profile supported on [0, 1]; throws if the result
/// has negative powers.
inline Profile ascend_exact_profile(const SplinePoly& fd, int d) {
  auto lp = ascend_exact(fd, d);
  std::vector<Rational> c;
  for (const auto& [k, v] : lp) {
    if (k < 0) throw domain_error("ascent has a pole at the origin");
    if (c.size() <= static_cast<std::size_t>(k)) c.resize(static_cast<std::size_t>(k) + 1, Rational(0));
    c[static_cast<std::size_t>(k)] = v;
  }
  if (c.empty()) c.push_back(Rational(0));
  return Profile::spline(SplinePoly{Rational(0), c});
}

struct AscentValue {
  double value = 0;
  double spread = 0;   // |estimate(h) - estimate(2h)|
  bool unstable = false;
};

/// Numeric ascent at u > 0 by nested central differences in T = u^2 of
/// Phi(T) = T^{d1 - 1/2} f_d(sqrt T), so f1(u) = 2u Phi^{(d1)}(u^2) / (d1 - 1)!.
inline AscentValue ascend_odd(const std::function<double(double)>& fd, int d, double u) {
  detail::require_odd(d);
  if (!(u > 0)) throw domain_error("ascent needs u > 0");
  int d1 = (d - 1) / 2;
  double T = u * u;
  auto phi = [&](double s) { return std::pow(s, d1 - 0.5) * fd(std::sqrt(s)); };
  auto estimate = [&](double h) {
    double acc = 0;
    for (int j = 0; j <= d1; ++j) {
      double c = poly::binomial<double>(d1, j) * ((j % 2) ? -1.0 : 1.0);
      acc += c * phi(T + (0.5 * d1 - j) * h);
    }
    return acc / std::pow(h, d1);
  };
  double h = std::pow(std::numeric_limits<double>::epsilon(), 1.0 / (d1 + 2)) * std::max(T, 0.1);
  h = std::min(h, 0.5 * T / (0.5 * d1 + 1));
  double a = estimate(h), b = estimate(2 * h);
  double scale = 2 * u / static_cast<double>(detail::factorial(d1 - 1));
  AscentValue out;
  out.value = scale * a;
  out.spread = scale * std::abs(a - b);
  out.unstable = out.spread > 1e-4 * std::max(1.0, std::abs(out.value));
  return out;
}

inline AscentValue ascend_odd(const Profile& fd, int d, double u) {
  return ascend_odd([&](double s) { return fd.eval_unchecked(s); }, d, u);
}

/// j_lambda(t) = int_0^1 (1 - u^2)^{lambda - 1/2} cos(ut) du; j_{-1/2} = cos.
inline double bessel_j(double lambda, double t, const QuadratureSpec& spec = detail::dimwalk_spec()) {
  if (lambda == -0.5) return std::cos(t);
  if (!(lambda > -0.5)) throw domain_error("j_lambda needs lambda > -1/2");
  t = std::abs(t);
  if (lambda >= 0.5) {
    auto h = [&](double u) { return std::pow(1 - u * u, lambda - 0.5); };
    return integrate_oscillatory(h, 0.0, 1.0, t, Oscillation::cosine, spec).value;
  }
  // v = (1 - u)^{lambda + 1/2} absorbs the endpoint singularity.
  double a = lambda + 0.5;
  auto u_of = [&](double v) { return 1.0 - std::pow(v, 1.0 / a); };
  auto h = [&](double v) {
    double u = u_of(v);
    return std::pow(1 + u, lambda - 0.5) * std::cos(u * t) / a;
  };
  std::vector<double> cuts;
  if (t > 0)
    for (int k = 1; k * pi / t < 1.0 && k < 20000; ++k) cuts.push_back(std::pow(1.0 - k * pi / t, a));
  return integrate(h, 0.0, 1.0, spec, cuts).value;
}

inline double bessel_j_normalized(double lambda, double t) {
  if (lambda == -0.5) return std::cos(t);
  return bessel_j(lambda, t) / bessel_j(lambda, 0.0);
}

struct MomentReport {
  std::vector<double> moments;                            // int_0^1 t^{2k} f1, k = 0..(d-3)/2
  std::vector<std::pair<double, double>> descent_tail;    // (t, f_d(t)) for t in {1.1, 2, 5}
  bool moments_vanish = false;                            // all below the tolerance
};

/// Even moments that must vanish for descend(f1, d) to be supported in [0, 1].
inline MomentReport support_moment_conditions(const Profile& f1, int d, double tol = 1e-10) {
  detail::require_odd(d);
  if (f1.support_radius() > 1.0 + 1e-12) throw domain_error("moment conditions need support in [0, 1]");
  MomentReport r;
  r.moments_vanish = true;
  for (int k = 0; k <= (d - 3) / 2; ++k) {
    double m = f1.is_zero() ? 0.0
                            : integrate([&](double t) { return std::pow(t, 2 * k) * f1.eval_unchecked(t); }, 0.0,
                                        f1.support_radius(), detail::dimwalk_spec(), f1.breakpoints())
                                  .value;
    r.moments.push_back(m);
    r.moments_vanish = r.moments_vanish && std::abs(m) <= tol;
  }
  for (double t : {1.1, 2.0, 5.0}) r.descent_tail.emplace_back(t, descend(f1, d, t));
  return r;
}

}  // namespace maxnorm
