#pragma once

// Positive definiteness of f(x1, x2) = f0(max(|x1|, |x2|)), decided either
// from the cosine transform of the one-dimensional profile f1 or by scanning
// the two-dimensional transform directly.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "maxnorm/common.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/transform.hpp"

namespace maxnorm {

enum class Verdict { strictly_positive, nonnegative, indefinite, inconclusive };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::strictly_positive:
      return "strictly_positive";
    case Verdict::nonnegative:
      return "nonnegative";
    case Verdict::indefinite:
      return "indefinite";
    default:
      return "inconclusive";
  }
}

struct Witness {
  double x = 0;  // scan point (x for the f1 scan, y1 for the direct scan)
  double y = 0;  // y2 for the direct scan
  double value = 0;
};

struct PDVerdict {
  Verdict verdict = Verdict::inconclusive;
  std::optional<Witness> witness;  // first point found below -tolerance
  double min_margin = 0;           // smallest sampled value
  double min_x = 0, min_y = 0;     // where it was sampled
  double tolerance = 0;
  std::string grid_spec;

  // Extra diagnostics of the f1 route.
  double f1_integral = 0;     // int f1
  double moment_t_f1p = 0;    // int t f1'(t) dt, should equal -int f1
  bool parts_check = true;    // the two agree to 1e-8
  double tail_bound = 0;      // bound on |transform| beyond the scan
  std::vector<std::pair<double, double>> pv_ladder;  // (eps, int_eps^1 f1'(t)/t dt)
  bool pv_settled = true;
};

struct ScanSpec {
  double x_max = 0;         // 0 selects the default range
  std::size_t points = 4096;
  std::size_t refine = 10;  // extra samples per cell around the minimum
  double tol_rel = 1e-9;
  double tol_abs = 0;       // overrides tol_rel when > 0
};

/// int_0^inf f1(u) cos(ux) du.
inline double cos_transform_f1(const Profile& f1, double x, const QuadratureSpec& spec = transform_spec()) {
  return cos_transform(f1, x, spec);
}

namespace detail {

// Radius carrying all but 1e-3 of int t |f0|.
inline double effective_radius(const Profile& p) {
  if (p.compact()) return p.support_radius();
  double total = moment(p, 1.0, true);
  if (total == 0.0) return 1.0;
  double L = 1.0;
  for (int i = 0; i < 200; ++i) {
    auto h = [&](double t) { return t * std::abs(p.eval_unchecked(t)); };
    double tail = integrate(h, L, INFINITY, {1e-14, 1e-10, 4000, true}).value;
    if (tail <= 1e-3 * total) break;
    L *= 1.05;
  }
  // Polish by bisection between L/1.05 and L.
  double lo = L / 1.05, hi = L;
  for (int i = 0; i < 40; ++i) {
    double mid = 0.5 * (lo + hi);
    auto h = [&](double t) { return t * std::abs(p.eval_unchecked(t)); };
    double tail = integrate(h, mid, INFINITY, {1e-14, 1e-10, 4000, true}).value;
    (tail <= 1e-3 * total ? hi : lo) = mid;
  }
  return hi;
}

// Total variation of f1' sampled on a fine grid over the effective support.
inline double f1_prime_variation(const Profile& f1, double radius) {
  constexpr std::size_t n = 20001;
  double R = f1.compact() ? f1.support_radius() : 3.0 * radius;
  double tv = 0, prev = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double u = R * static_cast<double>(i) / static_cast<double>(n - 1);
    double d = u >= f1.support_radius() ? 0.0 : f1.derivative(u, 1).value;
    if (i > 0) tv += std::abs(d - prev);
    prev = d;
  }
  return tv;
}

// Bisects [lo, hi] (value(lo) >= -tol > value(hi)) to the point where the
// function first drops below -tol.
template <class F>
Witness refine_crossing(F&& value, double lo, double hi, double hi_value, double tol) {
  Witness w{hi, 0, hi_value};
  for (int i = 0; i < 60 && hi - lo > 1e-9 * std::max(1.0, hi); ++i) {
    double mid = 0.5 * (lo + hi);
    double v = value(mid);
    if (v < -tol) {
      hi = mid;
      w = {mid, 0, v};
    } else {
      lo = mid;
    }
  }
  return w;
}

}  // namespace detail

/// Default scan range for the f1 route: 50 periods of the support radius.
inline double default_scan_extent(const Profile& f0) { return 50.0 * 2.0 * pi / detail::effective_radius(f0); }

namespace detail {

// Samples value() on [0, X], refines around the minimum and bisects to the
// first crossing below -tolerance.
template <class F>
void scan_sign(F&& value, double X, const ScanSpec& scan, PDVerdict& out) {
  auto grid = linspace(0.0, X, scan.points);
  std::vector<double> vals(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { vals[i] = value(grid[i]); });

  std::size_t imin = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  out.min_margin = vals[imin];
  out.min_x = grid[imin];
  if (scan.refine > 1) {
    double lo = grid[imin > 0 ? imin - 1 : 0];
    double hi = grid[std::min(imin + 1, grid.size() - 1)];
    for (double x : linspace(lo, hi, 2 * scan.refine + 1)) {
      double v = value(x);
      if (v < out.min_margin) {
        out.min_margin = v;
        out.min_x = x;
      }
    }
  }
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (vals[i] < -out.tolerance) {
      double lo = i > 0 ? grid[i - 1] : grid[i];
      out.witness = refine_crossing(value, lo, grid[i], vals[i], out.tolerance);
      break;
    }
  }
  std::ostringstream gs;
  gs << "x in [0, " << X << "], " << scan.points << " points, refine " << scan.refine;
  out.grid_spec = gs.str();
}

// Verdict from the scan; `strict_extra` is the additional strictness test.
inline Verdict decide(const PDVerdict& v, bool strict_extra) {
  if (v.witness) return Verdict::indefinite;
  if (v.min_margin > v.tolerance) return strict_extra ? Verdict::strictly_positive : Verdict::nonnegative;
  // Within tolerance of zero: sampled values that are all >= 0 count as
  // nonnegative; slightly negative ones cannot be resolved.
  return v.min_margin >= 0 ? Verdict::nonnegative : Verdict::inconclusive;
}

}  // namespace detail

/// Sign of the cosine transform of an even one-dimensional profile f1, i.e.
/// positive definiteness of f1(|x|) on the line. `radius` is the effective
/// support used for the default range and the tail bound (0: from f1).
inline PDVerdict check_pd_1d(const Profile& f1, ScanSpec scan = {}, double radius = 0) {
  PDVerdict out;
  if (!(radius > 0)) radius = detail::effective_radius(f1);
  double X = scan.x_max > 0 ? scan.x_max : 50.0 * 2.0 * pi / radius;
  if (scan.points < 2) throw domain_error("scan needs at least two points");

  QuadratureSpec qs{1e-14, 1e-12, 40000, true};
  out.f1_integral = f1.is_zero() ? 0.0 : cos_transform_f1(f1, 0.0, qs);
  double scale = std::abs(out.f1_integral);
  out.tolerance = scan.tol_abs > 0 ? scan.tol_abs : scan.tol_rel * (scale > 0 ? scale : 1.0);
  qs.abs_tol = std::max(1e-16, out.tolerance * 1e-3);

  detail::scan_sign([&](double x) { return cos_transform_f1(f1, x, qs); }, X, scan, out);

  if (!f1.is_zero()) {
    auto h = [&](double t) { return t >= f1.support_radius() ? 0.0 : t * f1.derivative(t, 1).value; };
    out.moment_t_f1p = integrate(h, 0.0, f1.support_radius(), {1e-13, 1e-12, 4000, true}, f1.breakpoints()).value;
    out.parts_check = std::abs(out.moment_t_f1p + out.f1_integral) <= 1e-8;
    out.tail_bound = detail::f1_prime_variation(f1, radius) / (X * X);
    // Principal-value proxy for int_0^1 f1'(t)/t dt.
    double acc = 0, hi = 1.0;
    for (int k = 4; k <= 20; ++k) {
      double eps = std::ldexp(1.0, -k);
      auto q = [&](double t) { return t >= f1.support_radius() ? 0.0 : f1.derivative(t, 1).value / t; };
      std::vector<double> brk = f1.breakpoints();
      acc += integrate(q, eps, hi, {1e-13, 1e-10, 4000, true}, brk).value;
      out.pv_ladder.emplace_back(eps, acc);
      hi = eps;
    }
    std::size_t L = out.pv_ladder.size();
    out.pv_settled = std::abs(out.pv_ladder[L - 1].second - out.pv_ladder[L - 2].second) < 1e-6;
  }
  out.verdict = detail::decide(out, out.moment_t_f1p < 0);
  return out;
}

/// Positive definiteness in R^d (d odd) of the radial function whose
/// one-dimensional ascent is f1. The d-dimensional transform is proportional
/// to G(s) = F1(s) / s^{d-1}, F1 the cosine transform of f1; near s = 0 G is
/// summed from the even moments of f1 (compact f1 only).
inline PDVerdict check_pd_radial(const Profile& f1, int d, ScanSpec scan = {}) {
  if (d < 1 || d % 2 == 0) throw domain_error("radial check needs odd d");
  if (d == 1) return check_pd_1d(f1, scan);
  if (!f1.compact()) throw domain_error("radial check in d > 1 needs a compact f1");
  PDVerdict out;
  double R = f1.support_radius();
  double X = scan.x_max > 0 ? scan.x_max : 50.0 * 2.0 * pi / R;
  if (scan.points < 2) throw domain_error("scan needs at least two points");
  int p = d - 1;
  constexpr int kTerms = 40;
  std::vector<double> m(2 * (p / 2 + kTerms) + 1, 0.0);
  if (!f1.is_zero())
    for (std::size_t j = 0; j < m.size(); j += 2)
      m[j] = integrate([&](double t) { return std::pow(t, static_cast<double>(j)) * f1.eval_unchecked(t); }, 0.0, R,
                       {1e-16, 1e-13, 4000, true}, f1.breakpoints())
                 .value;
  auto series = [&](double s) {
    double acc = 0, fact = 1;
    for (int j = 1; j <= p; ++j) fact *= j;
    for (int k = p / 2; 2 * k < static_cast<int>(m.size()); ++k) {
      if (2 * k > p) fact *= (2 * k - 1) * (2 * k);
      acc += ((k % 2) ? -1.0 : 1.0) * m[2 * k] * std::pow(s, 2 * k - p) / fact;
    }
    return acc;
  };
  double g0 = series(0.0);
  out.f1_integral = m[0];
  out.tolerance = scan.tol_abs > 0 ? scan.tol_abs : scan.tol_rel * (g0 != 0 ? std::abs(g0) : 1.0);
  QuadratureSpec qs{1e-16, 1e-12, 40000, true};
  const double s_switch = 1.5 / R;
  auto value = [&](double s) {
    if (s < s_switch) return series(s);
    return cos_transform_f1(f1, s, qs) / std::pow(s, p);
  };
  detail::scan_sign(value, X, scan, out);
  out.verdict = detail::decide(out, true);
  return out;
}

/// Positivity through the one-dimensional profile f1 = build_f1(f0).
inline PDVerdict check_pd_via_f1(const Profile& f0, ScanSpec scan = {}) {
  double L = detail::effective_radius(f0);
  if (!(scan.x_max > 0)) scan.x_max = 50.0 * 2.0 * pi / L;
  return check_pd_1d(build_f1(f0), scan, L);
}

struct Scan2DSpec {
  double y_max = 0;  // 0 selects the f1-route default
  std::size_t points = 200;
  double tol_rel = 1e-9;
  double tol_abs = 0;  // overrides tol_rel when > 0
};

/// Positivity by scanning fhat on 0 <= y1 <= y2 <= y_max (axis included).
inline PDVerdict check_pd_direct(const Profile& f0, Scan2DSpec scan = {}) {
  PDVerdict out;
  FhatEvaluator ev(f0);
  double Y = scan.y_max > 0 ? scan.y_max : default_scan_extent(f0);
  if (scan.points < 2) throw domain_error("scan needs at least two points");
  double scale = std::abs(ev.origin());
  out.tolerance = scan.tol_abs > 0 ? scan.tol_abs : scan.tol_rel * (scale > 0 ? scale : 1.0);
  auto axis = linspace(0.0, Y, scan.points);
  std::size_t n = axis.size();
  // Row j holds y2 = axis[j], y1 = axis[0..j].
  std::vector<std::vector<double>> rows(n);
  parallel_for(n, [&](std::size_t j) {
    rows[j].resize(j + 1);
    for (std::size_t i = 0; i <= j; ++i) rows[j][i] = ev(axis[i], axis[j]);
  });
  out.min_margin = INFINITY;
  double best_r = INFINITY;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i <= j; ++i) {
      double v = rows[j][i];
      if (v < out.min_margin) {
        out.min_margin = v;
        out.min_x = axis[i];
        out.min_y = axis[j];
      }
      if (v < -out.tolerance) {
        double r = std::hypot(axis[i], axis[j]);
        if (r < best_r) {
          best_r = r;
          out.witness = Witness{axis[i], axis[j], v};
        }
      }
    }
  std::ostringstream gs;
  gs << "0 <= y1 <= y2 <= " << Y << ", " << scan.points << " points per axis";
  out.grid_spec = gs.str();
  if (out.witness) {
    out.verdict = Verdict::indefinite;
  } else if (out.min_margin > out.tolerance) {
    out.verdict = Verdict::strictly_positive;
  } else {
    out.verdict = out.min_margin >= 0 ? Verdict::nonnegative : Verdict::inconclusive;
  }
  return out;
}

struct MonotonicityReport {
  double min_g_prime = 0;
  double argmin = 0;
  bool nondecreasing = true;
  std::size_t sign_changes = 0;
  std::string grid_spec;

  /// g nondecreasing exactly when fhat >= 0.
  bool consistent_with(const PDVerdict& v) const {
    if (v.verdict == Verdict::inconclusive) return true;
    return nondecreasing == (v.verdict != Verdict::indefinite);
  }
};

/// Scans g' on (0, t_max].
inline MonotonicityReport monotonicity_of_g(const Profile& f0, double t_max = 0, std::size_t points = 2000,
                                            double tol_rel = 1e-9) {
  MonotonicityReport out;
  FhatEvaluator ev(f0);
  double T = t_max > 0 ? t_max : default_scan_extent(f0);
  std::vector<double> grid(points), vals(points);
  for (std::size_t i = 0; i < points; ++i) grid[i] = T * static_cast<double>(i + 1) / static_cast<double>(points);
  parallel_for(points, [&](std::size_t i) { vals[i] = ev.g_prime(grid[i]); });
  double tol = tol_rel * std::max(std::abs(ev.origin()), 1e-300);
  out.min_g_prime = INFINITY;
  int prev_sign = 0;
  for (std::size_t i = 0; i < points; ++i) {
    if (vals[i] < out.min_g_prime) {
      out.min_g_prime = vals[i];
      out.argmin = grid[i];
    }
    int s = vals[i] * grid[i] < -tol ? -1 : (vals[i] * grid[i] > tol ? 1 : 0);
    if (s != 0 && prev_sign != 0 && s != prev_sign) ++out.sign_changes;
    if (s != 0) prev_sign = s;
  }
  if (f0.is_zero()) out.min_g_prime = 0;
  // fhat(0, y) = 4 g'(y) / y, so compare g'(y)/y with the transform tolerance.
  out.nondecreasing = true;
  for (std::size_t i = 0; i < points; ++i)
    if (4.0 * vals[i] / grid[i] < -tol) out.nondecreasing = false;
  std::ostringstream gs;
  gs << "t in (0, " << T << "], " << points << " points";
  out.grid_spec = gs.str();
  return out;
}

}  // namespace maxnorm
