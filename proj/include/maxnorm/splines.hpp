#pragma once

// Compactly supported positive definite radial splines
// A_{r,d}(t) = (1 - t)_+^m (1 + a_1 t + ... + a_r t^r), m = 2r + (d + 1)/2,
// with the odd Taylor coefficients t, t^3, ..., t^{2r-1} forced to zero,
// and the two-parameter family h_{mu,nu}.

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/dimwalk.hpp"
#include "maxnorm/polynomial.hpp"
#include "maxnorm/positivity.hpp"
#include "maxnorm/profile.hpp"

namespace maxnorm {

struct SplineSpec {
  int r = 1;
  int d = 1;

  void validate() const {
    if (r < 0) throw domain_error("spline smoothness r must be >= 0");
    if (d < 1 || d % 2 == 0) throw domain_error("spline dimension d must be odd and >= 1");
  }
  Rational exponent() const { return Rational(2 * r + (d + 1) / 2); }
  /// Degree quoted for the minimal construction, 3r + (d + 1)/2.
  Rational claimed_degree() const { return Rational(3 * r + (d + 1) / 2); }
};

namespace detail {

// Solves A x = b over the rationals by Gaussian elimination.
inline std::vector<Rational> solve_rational(std::vector<std::vector<Rational>> A, std::vector<Rational> b) {
  std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) throw std::logic_error("singular spline system");
    std::swap(A[piv], A[c]);
    std::swap(b[piv], b[c]);
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || A[i][c] == 0) continue;
      Rational f = A[i][c] / A[c][c];
      for (std::size_t j = c; j < n; ++j) A[i][j] -= f * A[c][j];
      b[i] -= f * b[c];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= A[i][i];
  return b;
}

// Expanded coefficients of (1 - t)^m p(t) for integer m.
inline std::vector<Rational> expand(const SplinePoly& s) {
  if (denominator(s.m) != 1) throw domain_error("expansion needs an integer exponent");
  return poly::mul(poly::one_minus_t_pow<Rational>(static_cast<int>(numerator(s.m))), s.coeffs);
}

}  // namespace detail

/// The unique A_{r,d} with a_0 = 1.
inline SplinePoly construct_A(const SplineSpec& spec) {
  spec.validate();
  int m = static_cast<int>(numerator(spec.exponent()));
  int r = spec.r;
  // Coefficient of t^j is sum_k a_k (-1)^{j-k} C(m, j-k); a_0 = 1 moves to the right side.
  auto c = [m](int j) {
    if (j < 0 || j > m) return Rational(0);
    Rational b = poly::binomial<Rational>(m, j);
    return j % 2 ? Rational(-b) : b;
  };
  std::vector<std::vector<Rational>> A(r, std::vector<Rational>(r));
  std::vector<Rational> b(r);
  for (int e = 0; e < r; ++e) {
    int j = 2 * e + 1;
    for (int k = 1; k <= r; ++k) A[e][k - 1] = c(j - k);
    b[e] = -c(j);
  }
  std::vector<Rational> coeffs{Rational(1)};
  for (const auto& a : detail::solve_rational(A, b)) coeffs.push_back(a);
  return SplinePoly{spec.exponent(), coeffs};
}

/// The A_{2,d} displayed next to A_{1,d} in the source table:
/// (1 - t)^{(d+7)/2} (1 + (d+7)/2 t + (d+5)(d+9)/12 t^2).
inline SplinePoly printed_A2(int d) {
  SplineSpec{2, d}.validate();
  Rational e(d + 7, 2);
  return SplinePoly{e, {Rational(1), e, Rational((d + 5) * (d + 9), 12)}};
}

struct SplineReport {
  std::vector<std::string> coefficients;  // "p/q", or "p" for integers
  std::string exponent;
  bool odd_coefficients_vanish = false;   // t^1 .. t^{2r-1}
  int edge_vanishing_order = -1;          // derivatives at 1- vanish through this order
  bool edge_derivatives_vanish = false;   // through ceil(m) - 1
  bool smooth_c2r = false;                // both of the above cover order 2r
  std::string degree;
  std::string claimed_degree;
  bool degree_matches = false;
  Verdict pd_line = Verdict::inconclusive;       // cosine transform of the even extension
  Verdict pd_dimension = Verdict::inconclusive;  // via the ascent to one dimension
  double pd_line_min = 0, pd_dimension_min = 0;
  bool positive_definite() const {
    auto ok = [](Verdict v) { return v == Verdict::strictly_positive || v == Verdict::nonnegative; };
    return ok(pd_line) && ok(pd_dimension);
  }
};

inline std::string rational_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

/// Exact parity and edge checks plus numeric positive definiteness in R and R^d.
inline SplineReport verify_A_properties(const SplinePoly& A, const SplineSpec& spec, const ScanSpec& scan = {}) {
  spec.validate();
  SplineReport rep;
  for (const auto& c : A.coeffs) rep.coefficients.push_back(rational_string(c));
  rep.exponent = rational_string(A.m);
  auto full = detail::expand(A);
  rep.odd_coefficients_vanish = true;
  for (int j = 1; j <= 2 * spec.r - 1; j += 2)
    if (static_cast<std::size_t>(j) < full.size() && full[static_cast<std::size_t>(j)] != 0)
      rep.odd_coefficients_vanish = false;

  // In s = 1 - t the leading zero coefficients give the vanishing order at 1-.
  auto at_edge = poly::reflect(full);
  int order = -1;
  while (static_cast<std::size_t>(order + 1) < at_edge.size() && at_edge[static_cast<std::size_t>(order + 1)] == 0)
    ++order;
  rep.edge_vanishing_order = order;
  int ceil_m = static_cast<int>(numerator(A.m));
  rep.edge_derivatives_vanish = order >= ceil_m - 1;
  rep.smooth_c2r = rep.odd_coefficients_vanish && order >= 2 * spec.r;

  poly::trim(full);
  Rational deg(static_cast<long>(full.empty() ? 0 : full.size() - 1));
  rep.degree = rational_string(deg);
  rep.claimed_degree = rational_string(spec.claimed_degree());
  rep.degree_matches = deg == spec.claimed_degree();

  auto line = check_pd_1d(Profile::spline(A), scan);
  rep.pd_line = line.verdict;
  rep.pd_line_min = line.min_margin;
  if (spec.d == 1) {
    rep.pd_dimension = line.verdict;
    rep.pd_dimension_min = line.min_margin;
  } else {
    auto f1 = ascend_exact_profile(A, spec.d);
    auto v = check_pd_radial(f1, spec.d, scan);
    rep.pd_dimension = v.verdict;
    rep.pd_dimension_min = v.min_margin;
  }
  return rep;
}

struct HmuNuSpec {
  double mu = 1;
  double nu = 1;
  void validate() const {
    if (!(mu > 0) || !(nu > 0)) throw domain_error("h_{mu,nu} needs mu > 0 and nu > 0");
  }
};

/// h_{mu,nu}(x) = (1 - x)_+^{mu+nu-1} int_0^1 t^{mu-1} (1-t)^{nu-1} (1 - t + (1+t)x)^{nu-1} dt.
/// The endpoint powers are removed by t = v^{1/mu} on [0, 1/2] and
/// 1 - t = w^{1/kappa} on [1/2, 1], kappa = nu (x > 0) or 2nu - 1 (x = 0).
inline double eval_h_mu_nu(const HmuNuSpec& s, double x, const QuadratureSpec& spec = {1e-14, 1e-12, 4000, true}) {
  s.validate();
  if (!(x >= 0)) throw domain_error("h_{mu,nu} argument must be >= 0");
  if (x >= 1) return 0.0;
  const double mu = s.mu, nu = s.nu;
  double kappa = x > 0 ? nu : 2 * nu - 1;
  if (!(kappa > 0)) throw domain_error("h_{mu,nu}(0) diverges for nu <= 1/2");

  auto rest = [&](double t) { return std::pow(1 - t + (1 + t) * x, nu - 1); };
  auto left = [&](double v) {
    double t = std::pow(v, 1 / mu);
    return std::pow(1 - t, nu - 1) * rest(t) / mu;
  };
  double v_mid = std::pow(0.5, mu);
  double a = integrate(left, 0.0, v_mid, spec).value;

  auto right = [&](double w) {
    double u = std::pow(w, 1 / kappa);  // u = 1 - t
    double t = 1 - u;
    double body = x > 0 ? rest(t) : 1.0;
    return std::pow(t, mu - 1) * body / kappa;
  };
  double w_mid = std::pow(0.5, kappa);
  std::vector<double> cuts;
  if (x > 0 && x < 0.5) cuts.push_back(std::pow(std::min(0.5, 2 * x), kappa));
  double b = integrate(right, 0.0, w_mid, spec, cuts).value;
  return std::pow(1 - x, mu + nu - 1) * (a + b);
}

struct BridgeReport {
  double alpha = 0;
  int d = 0;
  double ratio = 0;   // build_f1(PowerPlus(alpha)) / A_{1,d}
  double spread = 0;  // max - min of the ratio on the sample grid
};

/// build_f1((1 - t)_+^alpha) against A_{1,d} with d = 2 alpha - 5.
inline BridgeReport power_bridge(int alpha, std::size_t samples = 20) {
  if (alpha < 3) throw domain_error("bridge needs alpha >= 3 so that d >= 1");
  BridgeReport r;
  r.alpha = alpha;
  r.d = 2 * alpha - 5;
  auto f1 = build_f1(Profile::power_plus(alpha));
  auto A = Profile::spline(construct_A({1, r.d}));
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 1; i <= samples; ++i) {
    double t = 0.95 * static_cast<double>(i) / static_cast<double>(samples);
    double q = f1(t) / A(t);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  r.ratio = 0.5 * (lo + hi);
  r.spread = hi - lo;
  return r;
}

}  // namespace maxnorm
