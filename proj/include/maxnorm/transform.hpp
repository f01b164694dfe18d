#pragma once

// Fourier transforms of max-norm functions f(x1, x2) = f0(max(|x1|, |x2|))
// through one-dimensional transforms of f0 and f1.
//
// With f0hat(t) = int_0^inf f0(u) sin(ut) du and g(t) = t f0hat(t),
//   fhat(y1, y2) = 2 / (y1 y2) * (g(y1 + y2) - g(y2 - y1)),      y1 y2 != 0,
//   fhat(0, y)   = 4 g'(y) / y,
//   fhat(0, 0)   = 8 int_0^inf t f0(t) dt,
// where fhat(y) = int_{R^2} f(x) e^{-i(x, y)} dx.

#include <boost/math/interpolators/makima.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/quadrature.hpp"

namespace maxnorm {

using cplx = std::complex<double>;

/// Below this, |y1| is treated as being on the axis.
inline constexpr double kAxisThreshold = 1e-6;

namespace detail {

// M_j(x) = int_0^1 u^j e^{iux} du for j = 0..J. Upward recursion is stable
// for j <= x, downward (started far above J) for j > x.
inline std::vector<cplx> monomial_fourier(std::size_t J, double x) {
  std::vector<cplx> M(J + 1);
  if (x == 0.0) {
    for (std::size_t j = 0; j <= J; ++j) M[j] = 1.0 / static_cast<double>(j + 1);
    return M;
  }
  const cplx e = std::polar(1.0, x);
  const cplx ix(0.0, x);
  double s = std::sin(0.5 * x);
  M[0] = cplx(std::sin(x) / x, 2.0 * s * s / x);
  double ax = std::abs(x);
  std::size_t up = std::min<std::size_t>(J, static_cast<std::size_t>(std::floor(ax)));
  for (std::size_t j = 1; j <= up; ++j) M[j] = (e - static_cast<double>(j) * M[j - 1]) / ix;
  if (up < J) {
    std::size_t N = J + static_cast<std::size_t>(2 * ax) + 60;
    cplx m = e / cplx(static_cast<double>(N), x);
    for (std::size_t j = N; j > up + 1; --j) {
      m = (e - ix * m) / static_cast<double>(j);
      if (j - 1 <= J) M[j - 1] = m;
    }
  }
  return M;
}

// int_0^1 c(u) e^{iux} du for a polynomial c.
inline cplx poly_fourier_unit(const std::vector<double>& c, double x) {
  if (c.empty()) return 0.0;
  auto M = monomial_fourier(c.size() - 1, x);
  cplx s = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) s += c[j] * M[j];
  return s;
}

// int_0^inf e^{-lambda u} p(u) e^{iux} du = sum_k p_k k! / (lambda - ix)^{k+1}.
inline cplx exp_poly_fourier(double lambda, const std::vector<double>& p, double x) {
  const cplx z = 1.0 / cplx(lambda, -x);
  cplx zk = z;
  double fact = 1.0;
  cplx s = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k > 0) {
      fact *= static_cast<double>(k);
      zk *= z;
    }
    s += p[k] * fact * zk;
  }
  return s;
}

}  // namespace detail

/// int_0^inf f0(u) e^{iux} du in closed form, when the family allows it
/// (exponential-polynomial, integer-exponent truncated powers and splines).
inline std::optional<cplx> fourier_closed_form(const Profile& p, double x) {
  if (p.is_zero()) return cplx(0.0);
  if (std::holds_alternative<ExpPoly>(p.family())) {
    const auto& e = p.exp_shape();
    return detail::exp_poly_fourier(e.lambda, e.p, x);
  }
  if (p.has_expanded_poly()) return detail::poly_fourier_unit(p.expanded_poly(), x);
  return std::nullopt;
}

inline QuadratureSpec transform_spec() { return {1e-12, 1e-10, 20000, true}; }

inline double sine_transform_quadrature(const Profile& p, double t, const QuadratureSpec& spec = transform_spec()) {
  if (p.is_zero() || t == 0.0) return 0.0;
  auto h = [&](double u) { return p.eval_unchecked(u); };
  double v = integrate_value(h, 0.0, p.support_radius(), std::abs(t), Oscillation::sine, spec, p.breakpoints(),
                             "sine transform");
  return t < 0 ? -v : v;
}

inline double cos_transform_quadrature(const Profile& p, double x, const QuadratureSpec& spec = transform_spec()) {
  if (p.is_zero()) return 0.0;
  auto h = [&](double u) { return p.eval_unchecked(u); };
  return integrate_value(h, 0.0, p.support_radius(), std::abs(x), Oscillation::cosine, spec, p.breakpoints(),
                         "cosine transform");
}

/// f0hat(t) = int_0^inf f0(u) sin(ut) du.
inline double sine_transform(const Profile& p, double t, const QuadratureSpec& spec = transform_spec()) {
  if (t == 0.0) return 0.0;
  if (auto c = fourier_closed_form(p, t)) return c->imag();
  return sine_transform_quadrature(p, t, spec);
}

/// int_0^inf q(u) cos(ux) du.
inline double cos_transform(const Profile& q, double x, const QuadratureSpec& spec = transform_spec()) {
  if (auto c = fourier_closed_form(q, x)) return c->real();
  return cos_transform_quadrature(q, x, spec);
}

/// Both routes to g'(t) = (t f0hat(t))'.
struct GDerivative {
  double path_a = 0;  // -int u f0'(u) sin(ut) du
  double path_b = 0;  // t int f1(u) cos(ut) du
  double discrepancy = 0;
  bool hypothesis_flag = false;  // discrepancy above 1e-5
};

enum class TransformMethod { via_f0hat, via_derivative };

/// Caches f1 and the origin value for repeated transform evaluation.
class FhatEvaluator {
 public:
  explicit FhatEvaluator(Profile f0, QuadratureSpec spec = transform_spec())
      : f0_(std::move(f0)), f1_(build_f1(f0_)), spec_(spec) {
    origin_ = f0_.is_zero() ? 0.0 : 8.0 * moment(f0_, 1.0, false, {1e-13, 1e-12, 4000, true});
  }

  const Profile& f0() const { return f0_; }
  const Profile& f1() const { return f1_; }
  const QuadratureSpec& spec() const { return spec_; }
  double origin() const { return origin_; }

  double g(double t) const { return t * sine_transform(f0_, t, spec_); }

  /// g' through the cosine transform of f1. Tabulated f1 carries
  /// interpolation error, so tabulated profiles use g' = f0hat + t int u f0 cos.
  double g_prime(double t) const {
    if (t == 0.0) return 0.0;
    if (std::holds_alternative<Tabulated>(f0_.family())) {
      auto h = [&](double u) { return u * f0_.eval_unchecked(u); };
      double c = integrate_value(h, 0.0, f0_.support_radius(), std::abs(t), Oscillation::cosine, spec_,
                                 f0_.breakpoints(), "g' (product rule)");
      return sine_transform(f0_, t, spec_) + t * c;
    }
    return t * cos_transform(f1_, t, spec_);
  }

  /// Path (b) of the two-route check: t times the cosine transform of f1.
  double g_prime_by_f1(double t) const {
    if (t == 0.0) return 0.0;
    return t * cos_transform(f1_, t, spec_);
  }

  /// g' through the sine transform of u f0'(u).
  double g_prime_by_derivative(double t) const {
    if (t == 0.0 || f0_.is_zero()) return 0.0;
    auto h = [&](double u) { return -u * detail::derivand(f0_, Derivand::f0_prime, u); };
    double v = integrate_value(h, 0.0, f0_.support_radius(), std::abs(t), Oscillation::sine, spec_, f0_.breakpoints(),
                               "g' (derivative route)");
    return t < 0 ? -v : v;
  }

  /// C(w) = int_0^inf f0'(t) cos(wt) dt.
  double derivative_cosine(double w) const {
    if (f0_.is_zero()) return 0.0;
    auto h = [&](double u) { return detail::derivand(f0_, Derivand::f0_prime, u); };
    return integrate_value(h, 0.0, f0_.support_radius(), std::abs(w), Oscillation::cosine, spec_, f0_.breakpoints(),
                           "derivative cosine transform");
  }

  double operator()(double y1, double y2, TransformMethod method = TransformMethod::via_f0hat) const {
    if (f0_.is_zero()) return 0.0;
    double a = std::abs(y1), b = std::abs(y2);
    if (a > b) std::swap(a, b);
    if (b < kAxisThreshold) return origin_;
    if (a < kAxisThreshold) {
      double gp = method == TransformMethod::via_f0hat ? g_prime(b) : g_prime_by_derivative(b);
      return 4.0 * gp / b;
    }
    if (method == TransformMethod::via_f0hat) return 2.0 / (a * b) * (g(a + b) - g(b - a));
    return -2.0 / (a * b) * (derivative_cosine(b - a) - derivative_cosine(a + b));
  }

  GDerivative g_derivative(double t) const {
    GDerivative out;
    if (t == 0.0) return out;
    out.path_a = g_prime_by_derivative(t);
    out.path_b = g_prime_by_f1(t);
    out.discrepancy = std::abs(out.path_a - out.path_b);
    out.hypothesis_flag = out.discrepancy > 1e-5;
    return out;
  }

 private:
  Profile f0_;
  Profile f1_;
  QuadratureSpec spec_;
  double origin_ = 0;
};

inline double fhat_2d(const Profile& p, double y1, double y2, TransformMethod method = TransformMethod::via_f0hat) {
  return FhatEvaluator(p)(y1, y2, method);
}

inline GDerivative g_derivative(const Profile& p, double t) { return FhatEvaluator(p).g_derivative(t); }

/// Brute-force box integration result.
struct OracleResult {
  double value = 0;
  double quad_error = 0;
  double tail_bound = 0;  // bound on the contribution from outside the box
  double box_half_width = 0;
};

/// Default half-width of the oracle box: the support radius, or 40/lambda for
/// exponential profiles.
inline double default_box(const Profile& p) {
  if (p.compact()) return p.support_radius();
  return 40.0 / p.exp_shape().lambda;
}

/// 8 int_W^inf t |f0(t)| dt: the mass of |f| outside [-W, W]^2.
inline double tail_mass(const Profile& p, double W) {
  if (p.is_zero() || W >= p.support_radius()) return 0.0;
  auto h = [&](double t) { return t * std::abs(p.eval_unchecked(t)); };
  return 8.0 * integrate(h, W, p.support_radius(), {1e-14, 1e-10, 4000, true}, p.breakpoints()).value;
}

namespace detail {

// 4 int_0^W int_0^W F(f0(max(x1, x2))) cos(x1 y1) cos(x2 y2) dx2 dx1 by nested
// adaptive quadrature; the inner integral is split at x2 = x1.
template <class Map>
OracleResult box_integral(const Profile& p, double y1, double y2, double W, Map F) {
  OracleResult out;
  out.box_half_width = W;
  if (p.is_zero()) return out;
  QuadratureSpec inner{1e-12, 1e-11, 20000, true};
  QuadratureSpec outer{1e-10, 1e-10, 20000, true};
  std::vector<double> brk;
  for (double b : p.breakpoints())
    if (b < W) brk.push_back(b);
  auto inner_fn = [&](double x1) {
    std::vector<double> cuts = brk;
    cuts.push_back(x1);
    auto h = [&](double x2) { return F(p.eval_unchecked(std::max(x1, x2))); };
    return integrate_oscillatory(h, 0.0, W, std::abs(y2), Oscillation::cosine, inner, cuts).value;
  };
  auto r = integrate_oscillatory(inner_fn, 0.0, W, std::abs(y1), Oscillation::cosine, outer, brk);
  out.value = 4.0 * r.value;
  out.quad_error = 4.0 * r.error;
  return out;
}

}  // namespace detail

/// Direct evaluation of fhat(y) = 4 int int f0(max(x1, x2)) cos(x1 y1) cos(x2 y2)
/// over [0, W]^2; a bound on the truncated tail is reported separately.
inline OracleResult oracle_2d(const Profile& p, double y1, double y2, double box_half_width = 0) {
  double W = box_half_width > 0 ? box_half_width : default_box(p);
  auto out = detail::box_integral(p, y1, y2, W, [](double v) { return v; });
  out.tail_bound = tail_mass(p, W);
  return out;
}

/// int int_{[-W, W]^2} |f|^power dx by the same nested quadrature.
inline OracleResult oracle_norm(const Profile& p, double power, double box_half_width = 0) {
  double W = box_half_width > 0 ? box_half_width : default_box(p);
  auto out = detail::box_integral(p, 0.0, 0.0, W, [power](double v) { return std::pow(std::abs(v), power); });
  if (W < p.support_radius()) {
    auto h = [&](double t) { return t * std::pow(std::abs(p.eval_unchecked(t)), power); };
    out.tail_bound = 8.0 * integrate(h, W, p.support_radius(), {1e-14, 1e-10, 4000, true}).value;
  }
  return out;
}

/// g and g' tabulated on [0, t_max] for fast repeated evaluation.
class GFunction {
 public:
  GFunction(const FhatEvaluator& ev, double t_max, std::size_t n = 4001) : t_max_(t_max) {
    if (!(t_max > 0) || n < 4) throw domain_error("GFunction needs t_max > 0 and four or more samples");
    auto grid = linspace(0.0, t_max, n);
    std::vector<double> g(n), gp(n);
    parallel_for(n, [&](std::size_t i) {
      g[i] = ev.g(grid[i]);
      gp[i] = ev.g_prime(grid[i]);
    });
    g_curve_ = SampledCurve(grid, g);
    gp_curve_ = SampledCurve(grid, gp);
    g_ = std::make_shared<Interp>(std::vector<double>(grid), std::move(g));
    gp_ = std::make_shared<Interp>(std::move(grid), std::move(gp));
  }

  double t_max() const { return t_max_; }
  double g(double t) const { return (*g_)(std::min(t, t_max_)); }
  double g_prime(double t) const { return (*gp_)(std::min(t, t_max_)); }
  const SampledCurve& g_curve() const { return g_curve_; }
  const SampledCurve& g_prime_curve() const { return gp_curve_; }

  /// fhat from the cached curves; needs y1 + y2 <= t_max.
  double fhat(double y1, double y2, double origin) const {
    double a = std::abs(y1), b = std::abs(y2);
    if (a > b) std::swap(a, b);
    if (b < kAxisThreshold) return origin;
    if (a < 1e-3 * b) return 4.0 * g_prime(b) / b;
    return 2.0 / (a * b) * (g(a + b) - g(b - a));
  }

 private:
  using Interp = boost::math::interpolators::makima<std::vector<double>>;
  double t_max_;
  SampledCurve g_curve_, gp_curve_;
  std::shared_ptr<Interp> g_, gp_;
};

struct VariationReport {
  double variation = 0;     // int_0^{t_max} |g'(t)| dt
  double lhs_estimate = 0;  // int int_{[-T, T]^2} |fhat|
  double ratio = 0;         // lhs / variation
  std::vector<std::pair<double, double>> variation_ladder;  // (T, int_0^T |g'|)
  LinearFit growth;  // variation against ln T over the ladder
};

/// Variation of g on [0, t_max] and the matched-box L1 mass of fhat.
inline VariationReport variation_bound(const Profile& p, double t_max, std::size_t box_samples = 400) {
  VariationReport out;
  if (p.is_zero()) return out;
  if (!(t_max > 0)) throw domain_error("t_max must be positive");
  FhatEvaluator ev(p);
  constexpr int kLadder = 6;
  std::vector<double> T(kLadder);
  for (int k = 0; k < kLadder; ++k) T[k] = t_max * std::ldexp(1.0, k - (kLadder - 1));
  QuadratureSpec vs{1e-9, 1e-8, 20000, true};
  double acc = 0, lo = 0;
  std::vector<double> lnT, var;
  for (double hi : T) {
    // Cut at multiples of pi so kinks of |g'| are not straddled by large panels.
    std::vector<double> cuts;
    for (double c = std::ceil(lo / pi) * pi; c < hi; c += pi) cuts.push_back(c);
    acc += integrate([&](double t) { return std::abs(ev.g_prime(t)); }, lo, hi, vs, cuts).value;
    out.variation_ladder.emplace_back(hi, acc);
    lnT.push_back(std::log(hi));
    var.push_back(acc);
    lo = hi;
  }
  out.variation = acc;
  out.growth = fit_line(lnT, var);

  GFunction gf(ev, 2.0 * t_max, 8001);
  std::size_t n = box_samples;
  double h = t_max / static_cast<double>(n);
  std::vector<double> rows(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    double a = (static_cast<double>(i) + 0.5) * h;
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += std::abs(gf.fhat(a, (static_cast<double>(j) + 0.5) * h, ev.origin()));
    rows[i] = s;
  });
  double total = 0;
  for (double r : rows) total += r;
  out.lhs_estimate = 4.0 * total * h * h;
  out.ratio = out.variation > 0 ? out.lhs_estimate / out.variation : INFINITY;
  return out;
}

/// Asymptotic evaluation of int_0^1 (1 - t)^alpha e^{itx} dt for large x.
struct EndpointValue {
  cplx value;
  int depth = 0;  // reduction steps alpha -> alpha - 1
};

inline EndpointValue endpoint_asymptotic(double alpha, double x, int n_terms = 3) {
  if (!(alpha > -1.0)) throw domain_error("alpha must exceed -1");
  if (!(x > 0)) throw domain_error("x must be positive");
  if (n_terms < 1 || n_terms > 3) throw domain_error("n_terms must be 1, 2 or 3");
  // I_a = i/x - (a i / x) I_{a-1} until the exponent lies in (-1, 0].
  std::vector<double> chain;
  double beta = alpha;
  while (beta > 0.0) {
    chain.push_back(beta);
    beta -= 1.0;
  }
  const cplx i(0.0, 1.0);
  cplx base = boost::math::tgamma(beta + 1.0) * std::pow(x, -1.0 - beta) *
              std::exp(i * (x - pi * (beta + 1.0) / 2.0));
  if (n_terms >= 2) base += i / x;
  if (n_terms >= 3) base += beta / (x * x);
  cplx v = base;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) v = i / x - (*it * i / x) * v;
  return {v, static_cast<int>(chain.size())};
}

/// Reference value of int_0^1 (1 - t)^alpha e^{itx} dt by quadrature. For
/// alpha < 0 the endpoint singularity is removed by 1 - t = w^{1/(1+alpha)}.
inline cplx endpoint_quadrature(double alpha, double x, const QuadratureSpec& spec = {1e-14, 1e-13, 200000, true}) {
  if (!(alpha > -1.0)) throw domain_error("alpha must exceed -1");
  if (alpha >= 0.0) {
    auto h = [&](double t) { return std::pow(1.0 - t, alpha); };
    double re = integrate_value(h, 0.0, 1.0, x, Oscillation::cosine, spec);
    double im = integrate_value(h, 0.0, 1.0, x, Oscillation::sine, spec);
    return {re, im};
  }
  double q = 1.0 / (1.0 + alpha);
  // int_0^1 s^alpha e^{i(1-s)x} ds = q int_0^1 e^{i(1 - w^q) x} dw
  std::vector<double> cuts;
  // Phase (1 - w^q) x crosses multiples of pi at w = (1 - k pi / x)^{1/q}.
  for (double k = 1; k * pi < x; ++k) cuts.push_back(std::pow(1.0 - k * pi / x, 1.0 / q));
  auto re = integrate([&](double w) { return std::cos((1.0 - std::pow(w, q)) * x); }, 0.0, 1.0, spec, cuts);
  auto im = integrate([&](double w) { return std::sin((1.0 - std::pow(w, q)) * x); }, 0.0, 1.0, spec, cuts);
  if (!re.converged || !im.converged) throw convergence_error("endpoint reference quadrature", re.value, re.error);
  return {q * re.value, q * im.value};
}

}  // namespace maxnorm
