#pragma once

// Wiener-algebra membership diagnostics: boundary criteria on a dyadic
// epsilon ladder, the sufficient integral set with L1 moduli of continuity,
// and the tail profile used to show divergence of the A* norm.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/transform.hpp"

namespace maxnorm {

enum class Classification { convergent, divergent, inconclusive };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::convergent:
      return "convergent";
    case Classification::divergent:
      return "divergent";
    default:
      return "inconclusive";
  }
}

struct ConvergenceReport {
  Classification classification = Classification::inconclusive;
  std::vector<std::pair<double, double>> epsilon_ladder;  // (eps, partial integral), eps decreasing
  double fitted_exponent = 0;  // slope of log P against log ln(1/eps)
  double fit_r_squared = 0;
  double local_order = 0;      // extrapolated decay order of the normalized shells
  double critical_order = 0;   // convergence needs local_order above this
  double value_if_convergent = NAN;
  std::string weight;
};

namespace detail {

inline constexpr int kLadderFirst = 4;
inline constexpr int kLadderLast = 20;
inline constexpr int kFitPoints = 8;

// Least squares log W_k ~ c0 + c1 k + c2 ln k over the last shells.
inline std::array<double, 3> fit_log_weight(const std::vector<double>& W, std::size_t first) {
  double A[3][3] = {}, b[3] = {};
  for (std::size_t k = first; k < W.size(); ++k) {
    double x = static_cast<double>(k + 1), phi[3] = {1.0, x, std::log(x)}, y = std::log(W[k]);
    for (int i = 0; i < 3; ++i) {
      b[i] += phi[i] * y;
      for (int j = 0; j < 3; ++j) A[i][j] += phi[i] * phi[j];
    }
  }
  auto det = [](double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  double d = det(A);
  std::array<double, 3> c{};
  for (int col = 0; col < 3; ++col) {
    double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] = j == col ? b[i] : A[i][j];
    c[col] = det(M) / d;
  }
  return c;
}

// Sum of the shells beyond the ladder: D_j = D_K 2^{-sum beta} with
// beta_j = b0 + b1 / j, times the extrapolated weight W_j.
inline double extrapolated_tail(const std::vector<double>& I, const std::vector<double>& W, const LinearFit& order,
                                double partial) {
  std::size_t K = I.size();
  auto c = fit_log_weight(W, K - kFitPoints);
  double log_d = std::log(I[K - 1] / W[K - 1]);
  double tail = 0;
  for (int j = static_cast<int>(K) + 1; j < static_cast<int>(K) + 20000; ++j) {
    log_d -= (order.intercept + order.slope / j) * std::log(2.0);
    double term = std::exp(log_d + c[0] + c[1] * j + c[2] * std::log(static_cast<double>(j)));
    tail += term;
    if (term < 1e-16 * (partial + tail)) break;
  }
  return tail;
}

// Classifies sum_k I_k from shell integrals I_k of a nonnegative integrand and
// the matching shell integrals W_k of the weight alone. Shell k covers scale
// 2^-k (or 2^k for tails); ladder[k] = (eps_k, sum_{j<=k} I_j).
inline ConvergenceReport classify_shells(const std::vector<double>& eps, const std::vector<double>& I,
                                         const std::vector<double>& W, double critical_order, std::string weight) {
  ConvergenceReport r;
  r.weight = std::move(weight);
  r.critical_order = critical_order;
  std::size_t K = I.size();
  std::vector<double> P(K);
  double acc = 0;
  for (std::size_t k = 0; k < K; ++k) P[k] = acc += I[k];
  for (std::size_t k = 0; k < K; ++k)
    if (k + 1 >= static_cast<std::size_t>(kLadderFirst)) r.epsilon_ladder.emplace_back(eps[k], P[k]);

  std::size_t first = K - kFitPoints;
  bool negligible = true;
  for (std::size_t k = first; k < K; ++k) negligible = negligible && I[k] <= 1e-13 * std::max(P[K - 1], 1e-300);
  if (negligible) {
    r.classification = Classification::convergent;
    r.value_if_convergent = P[K - 1];
    r.local_order = INFINITY;
    return r;
  }

  // Local orders beta_k = log2(D_{k-1} / D_k) of D = I / W, extrapolated in 1/k.
  std::vector<double> inv_k, beta;
  bool positive = true;
  for (std::size_t k = first; k < K; ++k) {
    double d0 = I[k - 1] / W[k - 1], d1 = I[k] / W[k];
    if (!(d0 > 0 && d1 > 0)) {
      positive = false;
      break;
    }
    inv_k.push_back(1.0 / static_cast<double>(k + 1));
    beta.push_back(std::log2(d0 / d1));
  }
  LinearFit order_fit;
  if (positive) {
    order_fit = fit_line(inv_k, beta);
    r.local_order = order_fit.intercept;
  }

  std::vector<double> lx, ly;
  for (std::size_t k = first; k < K; ++k) {
    if (!(P[k] > 0)) continue;
    lx.push_back(std::log(static_cast<double>(k + 1) * std::log(2.0)));
    ly.push_back(std::log(P[k]));
  }
  if (lx.size() >= 2) {
    auto fit = fit_line(lx, ly);
    r.fitted_exponent = fit.slope;
    r.fit_r_squared = fit.r_squared;
  }

  if (positive && r.local_order > critical_order + 0.02) {
    r.classification = Classification::convergent;
    r.value_if_convergent = P[K - 1] + extrapolated_tail(I, W, order_fit, P[K - 1]);
  } else if (r.fitted_exponent > 0.2 && r.fit_r_squared > 0.99) {
    r.classification = Classification::divergent;
  }
  return r;
}

// Shells [2^-k, 2^-(k-1)], k = 1..20, of int_0^1 h(t) dt.
inline ConvergenceReport boundary_ladder(const std::function<double(double)>& h,
                                         const std::function<double(double)>& w, double critical_order,
                                         std::string weight, const std::vector<double>& cuts) {
  constexpr int K = kLadderLast;
  std::vector<double> eps(K), I(K), W(K);
  QuadratureSpec spec{1e-15, 1e-11, 4000, true};
  parallel_for(K, [&](std::size_t i) {
    double lo = std::ldexp(1.0, -static_cast<int>(i) - 1), hi = 2 * lo;
    std::vector<double> c;
    for (double x : cuts)
      if (x > lo && x < hi) c.push_back(x);
    eps[i] = lo;
    I[i] = integrate(h, lo, hi, spec, c).value;
    W[i] = integrate(w, lo, hi, spec).value;
  });
  return classify_shells(eps, I, W, critical_order, std::move(weight));
}

// f0(1 - t) on (0, 1], zero beyond.
inline double reflected(const Profile& p, double t) { return t > 1.0 ? 0.0 : p.eval_unchecked(1.0 - t); }

inline std::vector<double> reflected_cuts(const Profile& p) {
  std::vector<double> c;
  for (double b : p.breakpoints())
    if (b > 0 && b < 1) c.push_back(1.0 - b);
  return c;
}

inline void require_unit_support(const Profile& p) {
  if (p.is_zero()) return;
  if (!p.compact() || std::abs(p.support_radius() - 1.0) > 1e-12)
    throw domain_error("boundary criteria need support radius 1");
}

}  // namespace detail

/// int_0^1 f0(1 - t) ln(2/t) / t dt on the epsilon ladder.
inline ConvergenceReport boundary_log_criterion(const Profile& p) {
  detail::require_unit_support(p);
  auto w = [](double t) { return std::log(2.0 / t) / t; };
  auto h = [&](double t) { return detail::reflected(p, t) * w(t); };
  return detail::boundary_ladder(h, w, 0.0, "ln(2/t)/t", detail::reflected_cuts(p));
}

/// int_0^1 f0(1 - t) t^{-3/2} dt, the euclidean-norm analogue.
inline ConvergenceReport remark3_radial_criterion(const Profile& p) {
  detail::require_unit_support(p);
  auto w = [](double t) { return std::pow(t, -1.5); };
  auto h = [&](double t) { return detail::reflected(p, t) * w(t); };
  return detail::boundary_ladder(h, w, 0.5, "t^-3/2", detail::reflected_cuts(p));
}

struct ModulusReport {
  ConvergenceReport log_square;      // int_0^1 |f0'| ln^2(2/t)
  ConvergenceReport tail;            // int_1^inf t^2 |f0'|
  ConvergenceReport modulus_f0;      // int_0^1 omega(f0'; t)_1 / t ln(2/t)
  ConvergenceReport modulus_f1;      // int_0^1 omega(f1'; t)_1 / t
  std::vector<std::pair<double, double>> omega_f0, omega_f1;  // (t, omega) on the dyadic ladder
  bool continuous = true;            // f0 vanishes at the support edge
  bool satisfied = false;

  std::vector<const ConvergenceReport*> integrals() const { return {&log_square, &tail, &modulus_f0, &modulus_f1}; }
};

namespace detail {

// Dyadic ladder t_k = 2^-k, k = 0..20, for a modulus; shells integrated by the
// trapezoid rule in ln t.
inline ConvergenceReport modulus_ladder(const Profile& p, Derivand which, const std::function<double(double)>& w,
                                        std::string weight, std::vector<std::pair<double, double>>& omega) {
  constexpr int K = kLadderLast;
  std::vector<double> t(K + 1), om(K + 1);
  parallel_for(K + 1, [&](std::size_t k) {
    t[k] = std::ldexp(1.0, -static_cast<int>(k));
    om[k] = modulus_l1(p, which, t[k], 16, 1).value;
  });
  omega.clear();
  for (int k = 0; k <= K; ++k) omega.emplace_back(t[k], om[k]);
  std::vector<double> eps(K), I(K), W(K);
  double half = 0.5 * std::log(2.0);
  for (int k = 1; k <= K; ++k) {
    eps[k - 1] = t[k];
    I[k - 1] = half * (t[k] * om[k] * w(t[k]) + t[k - 1] * om[k - 1] * w(t[k - 1]));
    W[k - 1] = half * (t[k] * w(t[k]) + t[k - 1] * w(t[k - 1]));
  }
  return classify_shells(eps, I, W, 0.0, std::move(weight));
}

}  // namespace detail

/// The four integrals of the sufficient condition, each classified on a ladder.
inline ModulusReport modulus_criterion(const Profile& p) {
  if (p.derivative_order_available() < 1) throw domain_error("sufficient test needs a first derivative");
  ModulusReport r;
  auto dp = [&](double t) { return t >= p.support_radius() ? 0.0 : std::abs(p.derivative(t, 1).value); };
  std::vector<double> cuts = p.breakpoints();

  auto w_log2 = [](double t) { return std::pow(std::log(2.0 / t), 2); };
  r.log_square = detail::boundary_ladder([&](double t) { return dp(t) * w_log2(t); }, w_log2, -1.0,
                                         "ln^2(2/t)", cuts);

  {
    constexpr int K = detail::kLadderLast;
    std::vector<double> eps(K), I(K), W(K);
    QuadratureSpec spec{1e-15, 1e-11, 4000, true};
    parallel_for(K, [&](std::size_t i) {
      double lo = std::ldexp(1.0, static_cast<int>(i)), hi = 2 * lo;
      std::vector<double> c;
      for (double x : cuts)
        if (x > lo && x < hi) c.push_back(x);
      eps[i] = 1.0 / hi;
      I[i] = integrate([&](double t) { return t * t * dp(t); }, lo, hi, spec, c).value;
      W[i] = (hi * hi * hi - lo * lo * lo) / 3.0;
    });
    r.tail = detail::classify_shells(eps, I, W, 3.0, "t^2 on [1, 1/eps]");
  }

  r.modulus_f0 = detail::modulus_ladder(
      p, Derivand::f0_prime, [](double t) { return std::log(2.0 / t) / t; }, "omega(f0')/t ln(2/t)", r.omega_f0);
  r.modulus_f1 = detail::modulus_ladder(
      p, Derivand::f1_prime, [](double t) { return 1.0 / t; }, "omega(f1')/t", r.omega_f1);

  if (p.compact() && !p.is_zero()) {
    double R = p.support_radius();
    r.continuous = std::abs(p.eval_unchecked(R * (1 - 1e-12))) <= 1e-9;
  }
  r.satisfied = r.continuous;
  for (const auto* c : r.integrals()) r.satisfied = r.satisfied && c->classification == Classification::convergent;
  return r;
}

struct AStarReport {
  SampledCurve tail_profile;                           // (t, S(t))
  std::vector<std::pair<double, double>> partials;     // (T, int_1^T S)
  LinearFit log_fit;                                   // partial = intercept + slope ln T
  double sup_t_times_s = 0;                            // max over the grid of t S(t)
  bool boundary_limited = false;                       // some max sat on the outer radius
  double first_boundary_t = NAN;
  double scan_radius = 0;
  double radial_step = 0.02;
  std::size_t directions = 720;
  std::size_t distinct_directions = 0;
};

/// S(t) = t max{|fhat(y)| : t <= |y| <= R} from a 720-direction scan folded
/// onto the sector 0 <= theta <= pi/4 by the symmetries of fhat.
inline AStarReport astar_tail_profile(const Profile& p, std::vector<double> t_grid = {},
                                      double y_scan_radius = 128.0) {
  if (!(y_scan_radius > 1)) throw domain_error("scan radius must exceed 1");
  if (t_grid.empty()) t_grid = linspace(1.0, 64.0, 3151);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0) || t_grid[i] > y_scan_radius || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw domain_error("t grid must be increasing inside (0, scan radius]");
  }
  AStarReport out;
  out.scan_radius = y_scan_radius;
  const double step = out.radial_step;
  std::size_t nr = static_cast<std::size_t>(std::ceil(y_scan_radius / step)) + 1;

  std::vector<double> angles;
  for (std::size_t j = 0; j < out.directions; ++j) {
    double th = 2 * pi * static_cast<double>(j) / static_cast<double>(out.directions);
    if (th <= pi / 4 + 1e-12) angles.push_back(th);
  }
  out.distinct_directions = angles.size();

  std::vector<double> radial(nr, 0.0);
  if (!p.is_zero()) {
    FhatEvaluator ev(p);
    double tmax = 1.5 * y_scan_radius;
    GFunction G(ev, tmax, static_cast<std::size_t>(tmax / 0.005) + 1);
    double origin = ev.origin();
    parallel_for(nr, [&](std::size_t i) {
      double r = std::min(static_cast<double>(i) * step, y_scan_radius);
      double m = 0;
      for (double th : angles) m = std::max(m, std::abs(G.fhat(r * std::sin(th), r * std::cos(th), origin)));
      radial[i] = m;
    });
  }
  // Suffix max and the index where it is attained.
  std::vector<double> suffix(nr);
  std::vector<std::size_t> arg(nr);
  for (std::size_t i = nr; i-- > 0;) {
    if (i + 1 == nr || radial[i] >= suffix[i + 1]) {
      suffix[i] = radial[i];
      arg[i] = i;
    } else {
      suffix[i] = suffix[i + 1];
      arg[i] = arg[i + 1];
    }
  }

  std::vector<double> S(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    std::size_t i = std::min(nr - 1, static_cast<std::size_t>(std::ceil(t_grid[k] / step - 1e-9)));
    S[k] = t_grid[k] * suffix[i];
    out.sup_t_times_s = std::max(out.sup_t_times_s, t_grid[k] * S[k]);
    if (suffix[i] > 0 && arg[i] == nr - 1 && !out.boundary_limited) {
      out.boundary_limited = true;
      out.first_boundary_t = t_grid[k];
    }
  }
  out.tail_profile = SampledCurve(t_grid, S);

  // Trapezoid partial integrals from t = 1 at T = 2, 4, 8, ... inside the grid.
  double acc = 0;
  double T = 2;
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    double a = std::max(t_grid[k - 1], 1.0), b = t_grid[k];
    if (b > a) {
      double sa = t_grid[k - 1] >= 1.0 ? S[k - 1] : S[k - 1] + (S[k] - S[k - 1]) * (a - t_grid[k - 1]) / (b - t_grid[k - 1]);
      acc += 0.5 * (sa + S[k]) * (b - a);
    }
    if (std::abs(t_grid[k] - T) < 1e-9) {
      out.partials.emplace_back(T, acc);
      if (T >= 8) {
        lx.push_back(std::log(T));
        ly.push_back(acc);
      }
      T *= 2;
    }
  }
  if (lx.size() >= 2) out.log_fit = fit_line(lx, ly);
  return out;
}

}  // namespace maxnorm
