#pragma once

// Generating profiles f0 : [0, inf) -> R of the max-norm functions
// f(x1, x2) = f0(max(|x1|, |x2|)) and the companion profile
//   f1(t) = t f0(t) + int_t^inf f0(u) du.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/polynomial.hpp"
#include "maxnorm/quadrature.hpp"
#include "maxnorm/sampled_curve.hpp"

namespace maxnorm {

/// (1 - t)_+^alpha * p(t) on [0, 1]. PowerPlus(alpha) is p = 1.
struct TruncatedPower {
  double alpha = 1;
  std::vector<double> poly{1.0};
};

/// e^{-lambda t} * p(t). Exponential(lambda) is p = 1.
struct ExpPoly {
  double lambda = 1;
  std::vector<double> poly{1.0};
};

/// (1 - t)_+^m * sum a_k t^k with exact rational data.
struct SplinePoly {
  Rational m = 0;
  std::vector<Rational> coeffs{Rational(1)};

  double operator()(double t) const {
    if (t >= 1.0) return 0.0;
    double p = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) p = p * t + to_double(coeffs[i]);
    return std::pow(1.0 - t, to_double(m)) * p;
  }

  /// Degree of the expanded polynomial; meaningful when m is an integer.
  Rational degree() const {
    std::size_t r = coeffs.empty() ? 0 : coeffs.size() - 1;
    return m + Rational(static_cast<long>(r));
  }

  bool operator==(const SplinePoly&) const = default;
};

/// Samples of f0 on [0, R] with linear (order 1) or modified Akima (order 3)
/// interpolation; f0 = 0 for t >= R.
struct Tabulated {
  SampledCurve curve;
  int order = 1;
};

namespace detail {

// (1 - t)^m q(t), restricted to t < 1.
template <class T>
struct TruncShape {
  T m = 0;
  std::vector<T> q;

  TruncShape derivative() const {
    auto dq = poly::derivative(q);
    if (m == T(0)) return {T(0), dq};
    std::vector<T> one_minus{T(1), T(-1)};
    return {m - T(1), poly::add(poly::scale(q, T(-m)), poly::mul(dq, one_minus))};
  }

  // t q(t) (1-t)^m + int_t^1 (1-u)^m q(u) du, factored as (1-t)^m * poly.
  TruncShape f1() const {
    auto b = poly::reflect(q);
    std::vector<T> s(b.size() + 1, T(0));
    for (std::size_t j = 0; j < b.size(); ++j) s[j + 1] = b[j] / (m + T(static_cast<long>(j)) + T(1));
    return {m, poly::add(poly::shift_up(q), poly::reflect(s))};
  }

  // Inverse of f1(): f0(t) = -int_t^1 f1'(u)/u du.
  TruncShape f0_from_f1(double zero_tol) const {
    if (!(m > T(0))) throw domain_error("f1 must vanish continuously at the support edge");
    auto d = derivative();
    if (!d.q.empty()) {
      double scale_ = 0;
      for (const auto& c : d.q) scale_ = std::max(scale_, std::abs(to_double(c)));
      if (std::abs(to_double(d.q[0])) > zero_tol * std::max(scale_, 1e-300))
        throw domain_error("f1'(u)/u is not integrable at 0 (f1'(0) != 0)");
    }
    std::vector<T> s;
    if (d.q.size() > 1) s.assign(d.q.begin() + 1, d.q.end());
    auto b = poly::reflect(s);
    std::vector<T> c(b.size(), T(0));
    for (std::size_t j = 0; j < b.size(); ++j) c[j] = -b[j] / (m + T(static_cast<long>(j)));
    return {m, poly::reflect(c)};
  }

  double eval(double t, double md) const {
    if (t >= 1.0) return 0.0;
    double p = 0;
    for (std::size_t i = q.size(); i-- > 0;) p = p * t + to_double(q[i]);
    if (p == 0.0) return 0.0;
    return md == 0.0 ? p : std::pow(1.0 - t, md) * p;
  }
};

// e^{-lambda t} p(t).
struct ExpShape {
  double lambda = 1;
  std::vector<double> p;

  ExpShape derivative() const { return {lambda, poly::add(poly::derivative(p), poly::scale(p, -lambda))}; }

  // int_t^inf e^{-lambda u} s(u) du = e^{-lambda t} * tail(s)(t).
  static std::vector<double> tail(double lambda, const std::vector<double>& s) {
    std::vector<double> out(s.size(), 0.0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      // k!/j! / lambda^{k-j+1}, accumulated from j = k downward.
      double factor = 1.0 / lambda;
      for (std::size_t j = k + 1; j-- > 0;) {
        out[j] += s[k] * factor;
        if (j > 0) factor *= static_cast<double>(j) / lambda;
      }
    }
    return out;
  }

  ExpShape f1() const { return {lambda, poly::add(poly::shift_up(p), tail(lambda, p))}; }

  ExpShape f0_from_f1(double zero_tol) const {
    auto d = derivative();
    double scale_ = 0;
    for (double c : d.p) scale_ = std::max(scale_, std::abs(c));
    if (!d.p.empty() && std::abs(d.p[0]) > zero_tol * std::max(scale_, 1e-300))
      throw domain_error("f1'(u)/u is not integrable at 0 (f1'(0) != 0)");
    std::vector<double> s;
    if (d.p.size() > 1) s.assign(d.p.begin() + 1, d.p.end());
    return {lambda, poly::scale(tail(lambda, s), -1.0)};
  }

  double eval(double t) const {
    if (p.empty()) return 0.0;
    return std::exp(-lambda * t) * poly::horner(p, t);
  }
};

}  // namespace detail

struct DerivativeValue {
  double value = 0;
  bool at_breakpoint = false;  // one-sided right derivative was returned
};

class Profile {
 public:
  using Family = std::variant<TruncatedPower, ExpPoly, SplinePoly, Tabulated>;

  explicit Profile(Family family) : family_(std::move(family)) { init(); }

  static Profile power_plus(double alpha) { return Profile(TruncatedPower{alpha, {1.0}}); }
  static Profile truncated_power(double alpha, std::vector<double> poly) {
    return Profile(TruncatedPower{alpha, std::move(poly)});
  }
  static Profile exponential(double lambda) { return Profile(ExpPoly{lambda, {1.0}}); }
  static Profile exp_poly(double lambda, std::vector<double> poly) { return Profile(ExpPoly{lambda, std::move(poly)}); }
  static Profile spline(SplinePoly s) { return Profile(std::move(s)); }
  static Profile tabulated(SampledCurve curve, int order = 1) { return Profile(Tabulated{std::move(curve), order}); }
  static Profile zero() { return Profile(TruncatedPower{1.0, {}}); }

  const Family& family() const { return family_; }
  double support_radius() const { return support_; }
  bool compact() const { return std::isfinite(support_); }
  int derivative_order_available() const { return deriv_order_; }
  bool is_zero() const { return zero_; }

  /// Points in (0, support] where the profile or its derivatives may jump.
  const std::vector<double>& breakpoints() const { return breaks_; }

  double operator()(double t) const {
    if (!(t >= 0.0)) throw domain_error("profile argument must be >= 0");
    if (t >= support_ || zero_) return 0.0;
    return eval_unchecked(t);
  }

  DerivativeValue derivative(double t, int order) const {
    if (order != 1 && order != 2) throw domain_error("derivative order must be 1 or 2");
    if (order > deriv_order_) throw domain_error("derivative order not available for this profile");
    if (!(t >= 0.0)) throw domain_error("derivative argument must be >= 0");
    if (zero_) return {0.0, false};
    DerivativeValue out;
    out.at_breakpoint = std::find(breaks_.begin(), breaks_.end(), t) != breaks_.end();
    if (t >= support_) return {0.0, out.at_breakpoint};
    if (const auto* tab = std::get_if<Tabulated>(&family_)) {
      out.value = tabulated_derivative(*tab, t, order, out.at_breakpoint);
      return out;
    }
    if (std::holds_alternative<ExpPoly>(family_)) {
      out.value = (order == 1 ? exp_d1_ : exp_d2_).eval(t);
    } else {
      const auto& s = order == 1 ? trunc_d1_ : trunc_d2_;
      out.value = s.eval(t, s.m);
    }
    return out;
  }

  /// Short human-readable label.
  std::string describe() const {
    std::ostringstream os;
    if (zero_) return "zero";
    if (const auto* tp = std::get_if<TruncatedPower>(&family_)) {
      os << "power(alpha=" << tp->alpha << (tp->poly.size() == 1 && tp->poly[0] == 1.0 ? ")" : ", poly)");
    } else if (const auto* ep = std::get_if<ExpPoly>(&family_)) {
      os << "exp(lambda=" << ep->lambda << (ep->poly.size() == 1 && ep->poly[0] == 1.0 ? ")" : ", poly)");
    } else if (const auto* sp = std::get_if<SplinePoly>(&family_)) {
      os << "spline(m=" << sp->m << ", r=" << (sp->coeffs.empty() ? 0 : sp->coeffs.size() - 1) << ")";
    } else {
      const auto& tb = std::get<Tabulated>(family_);
      os << "table(n=" << tb.curve.size() << ", order=" << tb.order << ")";
    }
    return os.str();
  }

  // Shapes used by closed-form code paths.
  const detail::TruncShape<double>& trunc_shape() const { return trunc_; }
  const detail::ExpShape& exp_shape() const { return exp_; }
  const CurveInterpolant& interpolant() const { return interp_; }
  /// Monomial coefficients of f0 on [0, 1] when the exponent is a
  /// nonnegative integer; empty otherwise.
  const std::vector<double>& expanded_poly() const { return expanded_; }
  bool has_expanded_poly() const { return has_expanded_; }

  double eval_unchecked(double t) const {
    switch (family_.index()) {
      case 0:
      case 2:
        return trunc_.eval(t, trunc_.m);
      case 1:
        return exp_.eval(t);
      default:
        return interp_(t);
    }
  }

 private:
  void init() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (auto* tp = std::get_if<TruncatedPower>(&family_)) {
      if (!(tp->alpha > 0) || !std::isfinite(tp->alpha)) throw domain_error("power exponent must be > 0");
      for (double c : tp->poly)
        if (!std::isfinite(c)) throw domain_error("power polynomial coefficients must be finite");
      trunc_ = {tp->alpha, tp->poly};
      support_ = 1.0;
      deriv_order_ = 2;
      breaks_ = {1.0};
      zero_ = std::all_of(tp->poly.begin(), tp->poly.end(), [](double c) { return c == 0.0; });
    } else if (auto* ep = std::get_if<ExpPoly>(&family_)) {
      if (!(ep->lambda > 0) || !std::isfinite(ep->lambda)) throw domain_error("exponential rate must be > 0");
      for (double c : ep->poly)
        if (!std::isfinite(c)) throw domain_error("exponential polynomial coefficients must be finite");
      exp_ = {ep->lambda, ep->poly};
      exp_d1_ = exp_.derivative();
      exp_d2_ = exp_d1_.derivative();
      support_ = inf;
      deriv_order_ = 2;
      zero_ = std::all_of(ep->poly.begin(), ep->poly.end(), [](double c) { return c == 0.0; });
    } else if (auto* sp = std::get_if<SplinePoly>(&family_)) {
      if (sp->m < 0) throw domain_error("spline exponent must be >= 0");
      trunc_ = {to_double(sp->m), poly::to_double(sp->coeffs)};
      support_ = 1.0;
      deriv_order_ = 2;
      breaks_ = {1.0};
      zero_ = std::all_of(sp->coeffs.begin(), sp->coeffs.end(), [](const Rational& c) { return c == 0; });
    } else {
      auto& tb = std::get<Tabulated>(family_);
      tb.curve.validate();
      if (tb.curve.size() < 2 || tb.curve.grid.front() != 0.0)
        throw domain_error("tabulated profile grid must start at 0 and have two or more points");
      interp_ = CurveInterpolant(tb.curve, tb.order);
      support_ = tb.curve.grid.back();
      deriv_order_ = tb.order == 1 ? 1 : 2;
      if (tb.order == 1) {
        breaks_.assign(tb.curve.grid.begin() + 1, tb.curve.grid.end());
      } else {
        breaks_ = {support_};
      }
      zero_ = std::all_of(tb.curve.values.begin(), tb.curve.values.end(), [](double v) { return v == 0.0; });
    }
    if (family_.index() == 0 || family_.index() == 2) {
      trunc_d1_ = trunc_.derivative();
      trunc_d2_ = trunc_d1_.derivative();
    }
    if (const auto* tp = std::get_if<TruncatedPower>(&family_)) {
      double n = std::round(tp->alpha);
      if (n == tp->alpha && n <= 64) {
        expanded_ = poly::mul(poly::one_minus_t_pow<double>(static_cast<int>(n)), tp->poly);
        has_expanded_ = true;
      }
    } else if (const auto* sp = std::get_if<SplinePoly>(&family_)) {
      if (denominator(sp->m) == 1 && sp->m <= 64) {
        auto exact = poly::mul(poly::one_minus_t_pow<Rational>(static_cast<int>(numerator(sp->m))), sp->coeffs);
        expanded_ = poly::to_double(exact);
        has_expanded_ = true;
      }
    }
  }

  double tabulated_derivative(const Tabulated& tb, double t, int order, bool& flagged) const {
    const auto& g = tb.curve.grid;
    auto it = std::lower_bound(g.begin(), g.end(), t);
    std::size_t hi = static_cast<std::size_t>(it - g.begin());
    bool on_knot = hi < g.size() && g[hi] == t;
    double lo_edge, hi_edge;
    if (on_knot) {
      flagged = flagged || (t > 0.0);
      lo_edge = t;
      hi_edge = hi + 1 < g.size() ? g[hi + 1] : t;
    } else {
      lo_edge = g[hi - 1];
      hi_edge = g[hi];
    }
    double width = hi_edge - lo_edge;
    if (!(width > 0)) return 0.0;
    if (on_knot) {
      // One-sided right difference inside the right-hand segment.
      double h = width * (order == 1 ? 1e-6 : 1e-3);
      double f0 = interp_(t), f1 = interp_(t + h), f2 = interp_(t + 2 * h);
      if (order == 1) return tb.order == 1 ? (f1 - f0) / h : (-3 * f0 + 4 * f1 - f2) / (2 * h);
      return (f0 - 2 * f1 + f2) / (h * h);
    }
    double room = std::min(t - lo_edge, hi_edge - t);
    double h = std::min(room * 0.5, width * (order == 1 ? 1e-5 : 1e-3));
    if (order == 1) return (interp_(t + h) - interp_(t - h)) / (2 * h);
    return (interp_(t + h) - 2 * interp_(t) + interp_(t - h)) / (h * h);
  }

  Family family_;
  double support_ = 1.0;
  int deriv_order_ = 2;
  bool zero_ = false;
  std::vector<double> breaks_;
  detail::TruncShape<double> trunc_, trunc_d1_, trunc_d2_;
  detail::ExpShape exp_, exp_d1_, exp_d2_;
  CurveInterpolant interp_;
  std::vector<double> expanded_;
  bool has_expanded_ = false;
};

inline double evaluate(const Profile& p, double t) { return p(t); }

inline DerivativeValue derivative(const Profile& p, double t, int order) { return p.derivative(t, order); }

/// f1(t) = t f0(t) + int_t^inf f0(u) du. Symbolic for the closed families,
/// tabulated on the same grid otherwise.
inline Profile build_f1(const Profile& p) {
  const auto& fam = p.family();
  if (const auto* tp = std::get_if<TruncatedPower>(&fam)) {
    auto s = detail::TruncShape<double>{tp->alpha, tp->poly}.f1();
    return Profile::truncated_power(tp->alpha, s.q);
  }
  if (const auto* ep = std::get_if<ExpPoly>(&fam)) {
    auto s = detail::ExpShape{ep->lambda, ep->poly}.f1();
    return Profile::exp_poly(ep->lambda, s.p);
  }
  if (const auto* sp = std::get_if<SplinePoly>(&fam)) {
    auto s = detail::TruncShape<Rational>{sp->m, sp->coeffs}.f1();
    poly::trim(s.q);
    return Profile::spline(SplinePoly{sp->m, s.q});
  }
  // f1 is not piecewise linear, so it is sampled on a refined grid. Each
  // sub-segment integral is exact for the interpolant: a single 15-point
  // Kronrod panel integrates cubics exactly.
  constexpr int kRefine = 8;
  const auto& tb = std::get<Tabulated>(fam);
  const auto& g0 = tb.curve.grid;
  const auto& interp = p.interpolant();
  std::vector<double> g;
  for (std::size_t i = 0; i + 1 < g0.size(); ++i)
    for (int k = 0; k < kRefine; ++k) g.push_back(g0[i] + (g0[i + 1] - g0[i]) * k / kRefine);
  g.push_back(g0.back());
  std::vector<double> values(g.size());
  auto f = [&](double u) { return interp(u); };
  double tail = 0;
  for (std::size_t i = g.size(); i-- > 0;) {
    if (i + 1 < g.size()) tail += detail::gk15(f, g[i], g[i + 1]).value;
    double f0 = i + 1 < g.size() ? interp(g[i]) : 0.0;
    values[i] = g[i] * f0 + tail;
  }
  return Profile::tabulated(SampledCurve(std::move(g), std::move(values)), tb.order);
}

/// f0(t) = -int_t^inf f1'(u)/u du (equivalently f1(t)/t - int_t^inf f1(u)/u^2 du).
inline Profile build_f0_from_f1(const Profile& q, const QuadratureSpec& spec = {}) {
  constexpr double kZeroTol = 1e-9;
  const auto& fam = q.family();
  if (q.is_zero()) return Profile::zero();
  if (const auto* tp = std::get_if<TruncatedPower>(&fam)) {
    auto s = detail::TruncShape<double>{tp->alpha, tp->poly}.f0_from_f1(kZeroTol);
    return Profile::truncated_power(tp->alpha, s.q);
  }
  if (const auto* ep = std::get_if<ExpPoly>(&fam)) {
    auto s = detail::ExpShape{ep->lambda, ep->poly}.f0_from_f1(kZeroTol);
    return Profile::exp_poly(ep->lambda, s.p);
  }
  if (const auto* sp = std::get_if<SplinePoly>(&fam)) {
    auto s = detail::TruncShape<Rational>{sp->m, sp->coeffs}.f0_from_f1(0.0);
    poly::trim(s.q);
    return Profile::spline(SplinePoly{sp->m, s.q});
  }
  const auto& tb = std::get<Tabulated>(fam);
  const auto& g = tb.curve.grid;
  const auto& interp = q.interpolant();
  std::vector<double> values(g.size(), 0.0);
  double tail = 0;  // int_{g_i}^R f1(u)/u^2 du
  for (std::size_t i = g.size(); i-- > 1;) {
    if (i + 1 < g.size()) {
      auto f = [&](double u) { return interp(u) / (u * u); };
      tail += integrate(f, g[i], g[i + 1], spec).value;
    }
    values[i] = (i + 1 < g.size() ? tb.curve.values[i] : 0.0) / g[i] - tail;
  }
  values.back() = 0.0;
  // f0(0) by linear extrapolation of the two nearest samples.
  if (g.size() >= 3) {
    double w = g[1] / (g[2] - g[1]);
    values[0] = values[1] + w * (values[1] - values[2]);
  } else {
    values[0] = values[1];
  }
  return Profile::tabulated(SampledCurve(g, std::move(values)), tb.order);
}

/// int_0^inf t^power f0(t) dt (or |f0|). Throws convergence_error with the
/// partial value when the integral does not settle.
inline double moment(const Profile& p, double power, bool absolute = false, const QuadratureSpec& spec = {}) {
  if (p.is_zero()) return 0.0;
  auto f = [&](double t) {
    double v = p.eval_unchecked(t);
    if (absolute) v = std::abs(v);
    if (v == 0.0) return 0.0;
    return power == 0.0 ? v : std::pow(t, power) * v;
  };
  auto r = integrate(f, 0.0, p.support_radius(), spec, p.breakpoints());
  if (!r.converged) throw convergence_error("moment integral did not converge", r.value, r.error);
  return r.value;
}

enum class Derivand { f0_prime, f1_prime };

struct ModulusResult {
  double value = 0;         // max over the delta grid (a lower bound for the sup)
  double argmax_delta = 0;  // maximizing shift
  double g_l1_norm = 0;     // ||g||_1, for the 2||g|| clamp
  bool converged = true;
};

namespace detail {

inline double derivand(const Profile& p, Derivand which, double u) {
  if (u >= p.support_radius()) return 0.0;
  double d = p.derivative(u, 1).value;
  return which == Derivand::f1_prime ? u * d : d;
}

}  // namespace detail

/// omega(g; t)_1 = sup_{0 < delta <= t} int_0^inf |g(u) - g(u + delta)| du for
/// g = f0' or f1' = t f0', maximized over delta = t * 10^{-j/per_decade}.
inline ModulusResult modulus_l1(const Profile& p, Derivand which, double t, int per_decade = 64, int decades = 2,
                                QuadratureSpec spec = {1e-9, 1e-7, 2000, true}) {
  ModulusResult out;
  if (!(t >= 0.0)) throw domain_error("modulus argument must be >= 0");
  if (p.is_zero()) return out;
  auto g = [&](double u) { return detail::derivand(p, which, u); };
  auto norm = integrate([&](double u) { return std::abs(g(u)); }, 0.0, p.support_radius(), spec, p.breakpoints());
  if (!std::isfinite(norm.value)) throw domain_error("derivative is not absolutely integrable");
  out.g_l1_norm = norm.value;
  if (t == 0.0) return out;
  int n = per_decade * decades;
  for (int j = 0; j <= n; ++j) {
    double delta = t * std::pow(10.0, -static_cast<double>(j) / per_decade);
    std::vector<double> cuts = p.breakpoints();
    for (double b : p.breakpoints())
      if (b - delta > 0) cuts.push_back(b - delta);
    auto f = [&](double u) { return std::abs(g(u) - g(u + delta)); };
    auto r = integrate(f, 0.0, p.support_radius(), spec, cuts);
    out.converged = out.converged && r.converged;
    if (r.value > out.value) {
      out.value = r.value;
      out.argmax_delta = delta;
    }
  }
  return out;
}

}  // namespace maxnorm
