#pragma once

// Adaptive Gauss-Kronrod integration with support for trigonometric weights
// h(u)*sin(u*w), h(u)*cos(u*w) on finite and semi-infinite ranges.

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "maxnorm/common.hpp"

namespace maxnorm {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_subdivisions = 4000;
  bool oscillation_splitting = true;

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0)) throw domain_error("quadrature tolerances must be positive");
    if (max_subdivisions < 1) throw domain_error("max_subdivisions must be at least 1");
  }

  QuadratureSpec tightened(double factor) const {
    QuadratureSpec s = *this;
    s.abs_tol *= factor;
    return s;
  }
};

enum class Oscillation { none, sine, cosine };

struct QuadratureResult {
  double value = 0;
  double error = 0;
  bool converged = true;
  int subdivisions = 0;

  QuadratureResult& operator+=(const QuadratureResult& o) {
    value += o.value;
    error += o.error;
    converged = converged && o.converged;
    subdivisions += o.subdivisions;
    return *this;
  }
};

/// Frequencies below this are integrated without a trigonometric split.
inline constexpr double kLowFrequency = 1e-8;

namespace detail {

struct Panel {
  double a = 0, b = 0, value = 0, error = 0;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// One 15-point Kronrod panel with the embedded 7-point Gauss rule; error
// scaled the way QUADPACK's qk15 does.
template <class F>
Panel gk15(F& f, double a, double b) {
  using boost::math::quadrature::gauss;
  using boost::math::quadrature::gauss_kronrod;
  const auto& xk = gauss_kronrod<double, 15>::abscissa();
  const auto& wk = gauss_kronrod<double, 15>::weights();
  const auto& wg = gauss<double, 7>::weights();

  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double fv[15];
  fv[0] = f(c);
  for (int i = 1; i < 8; ++i) {
    double dx = h * xk[i];
    fv[2 * i - 1] = f(c - dx);
    fv[2 * i] = f(c + dx);
  }
  double k = wk[0] * fv[0];
  double g = wg[0] * fv[0];
  double kabs = wk[0] * std::abs(fv[0]);
  for (int i = 1; i < 8; ++i) {
    double s = fv[2 * i - 1] + fv[2 * i];
    k += wk[i] * s;
    kabs += wk[i] * (std::abs(fv[2 * i - 1]) + std::abs(fv[2 * i]));
    if (i % 2 == 0) g += wg[i / 2] * s;
  }
  double mean = 0.5 * k;
  double asc = wk[0] * std::abs(fv[0] - mean);
  for (int i = 1; i < 8; ++i) asc += wk[i] * (std::abs(fv[2 * i - 1] - mean) + std::abs(fv[2 * i] - mean));

  Panel p;
  p.a = a;
  p.b = b;
  p.value = k * h;
  double err = std::abs((k - g) * h);
  double resasc = asc * std::abs(h);
  double resabs = kabs * std::abs(h);
  if (resasc != 0 && err != 0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50 * eps)) err = std::max(50 * eps * resabs, err);
  if (!std::isfinite(p.value)) {
    p.error = std::numeric_limits<double>::infinity();
  } else {
    p.error = err;
  }
  return p;
}

// Globally adaptive bisection over an initial partition.
template <class F>
QuadratureResult adaptive(F& f, const std::vector<double>& cuts, const QuadratureSpec& spec) {
  QuadratureResult out;
  if (cuts.size() < 2) return out;
  std::priority_queue<Panel> heap;
  double total = 0, total_err = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    Panel p = gk15(f, cuts[i], cuts[i + 1]);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  int budget = std::max<int>(spec.max_subdivisions, static_cast<int>(4 * heap.size()));
  int splits = 0;
  while (!heap.empty()) {
    double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= target) break;
    if (splits >= budget) break;
    Panel worst = heap.top();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;  // interval exhausted at machine resolution
    heap.pop();
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }
  // Re-sum from panels so the reported value does not carry update round-off.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  total = 0;
  total_err = 0;
  for (const auto& p : panels) {
    total += p.value;
    total_err += p.error;
  }
  out.value = total;
  out.error = total_err;
  out.subdivisions = splits;
  out.converged = std::isfinite(total) && total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return out;
}

inline std::vector<double> partition(double a, double b, std::span<const double> breakpoints) {
  std::vector<double> cuts{a};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

inline double trig(Oscillation kind, double x) {
  switch (kind) {
    case Oscillation::sine:
      return std::sin(x);
    case Oscillation::cosine:
      return std::cos(x);
    default:
      return 1.0;
  }
}

// First zero of the trigonometric factor strictly greater than x.
inline double next_zero(Oscillation kind, double freq, double x) {
  double period_half = pi / freq;
  double shift = kind == Oscillation::cosine ? 0.5 : 0.0;
  double k = std::floor(x / period_half - shift) + 1.0;
  double z = (k + shift) * period_half;
  if (z <= x) z += period_half;
  return z;
}

}  // namespace detail

/// Integrates h over [a, b] (b may be +infinity). Breakpoints mark points
/// where h is not smooth.
template <class F>
QuadratureResult integrate(F&& h, double a, double b, const QuadratureSpec& spec = {},
                           std::span<const double> breakpoints = {}) {
  spec.validate();
  if (a == b) return {};
  if (b < a) {
    auto r = integrate(h, b, a, spec, breakpoints);
    r.value = -r.value;
    return r;
  }
  if (std::isfinite(b)) {
    auto cuts = detail::partition(a, b, breakpoints);
    return detail::adaptive(h, cuts, spec);
  }
  // u = a + s/(1-s) maps [0,1) onto [a, inf).
  auto mapped = [&](double s) {
    double one_minus = 1.0 - s;
    double u = a + s / one_minus;
    double v = h(u);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  std::vector<double> sbreaks;
  for (double x : breakpoints)
    if (x > a && std::isfinite(x)) sbreaks.push_back((x - a) / (1.0 + x - a));
  // Extra cuts keep the first panels from straddling the bulk of a decaying tail.
  for (double s : {0.5, 0.75, 0.9, 0.99}) sbreaks.push_back(s);
  auto cuts = detail::partition(0.0, 1.0, sbreaks);
  return detail::adaptive(mapped, cuts, spec);
}

/// Integrates h(u)*trig(freq*u) over [a, b]. On semi-infinite ranges the
/// integral is summed half-period by half-period and the partial sums are
/// accelerated by iterated averaging (Euler transform).
template <class F>
QuadratureResult integrate_oscillatory(F&& h, double a, double b, double freq, Oscillation kind,
                                       const QuadratureSpec& spec = {},
                                       std::span<const double> breakpoints = {}) {
  spec.validate();
  freq = std::abs(freq);
  if (kind == Oscillation::sine && freq == 0.0) return {};
  auto w = [&](double u) {
    double v = h(u);
    return v == 0.0 ? 0.0 : v * detail::trig(kind, freq * u);
  };
  if (kind == Oscillation::none || freq < kLowFrequency || !spec.oscillation_splitting) {
    return integrate(w, a, b, spec, breakpoints);
  }
  constexpr double kMaxZeros = 2e5;
  if (std::isfinite(b)) {
    std::vector<double> cuts = detail::partition(a, b, breakpoints);
    double n_zeros = (b - a) * freq / pi;
    if (n_zeros <= kMaxZeros) {
      for (double z = detail::next_zero(kind, freq, a); z < b; z += pi / freq) cuts.push_back(z);
      std::sort(cuts.begin(), cuts.end());
      cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    }
    return detail::adaptive(w, cuts, spec);
  }

  // Semi-infinite: head integral up to the first zero past every breakpoint.
  double last_break = a;
  for (double x : breakpoints)
    if (std::isfinite(x)) last_break = std::max(last_break, x);
  double z = detail::next_zero(kind, freq, last_break);
  QuadratureSpec head_spec = spec.tightened(0.1);
  QuadratureResult total = integrate_oscillatory(h, a, z, freq, kind, head_spec, breakpoints);

  QuadratureSpec piece_spec = spec.tightened(0.01);
  const double half = pi / freq;
  std::vector<double> partial;
  double running = total.value;
  double accelerated_prev = running;
  int calm = 0;
  int small_terms = 0;
  constexpr int kMaxHalfPeriods = 200000;
  constexpr std::size_t kTable = 16;
  for (int k = 0; k < kMaxHalfPeriods; ++k) {
    double lo = z + k * half;
    auto piece = detail::adaptive(w, {lo, lo + half}, piece_spec);
    running += piece.value;
    total.error += piece.error;
    total.converged = total.converged && piece.converged;
    total.subdivisions += piece.subdivisions;
    partial.push_back(running);
    if (std::abs(piece.value) <= spec.abs_tol * 1e-3) {
      if (++small_terms >= 3) {
        total.value = running;
        return total;
      }
    } else {
      small_terms = 0;
    }
    if (partial.size() < 4) continue;
    std::size_t m = std::min(partial.size(), kTable);
    std::vector<double> row(partial.end() - static_cast<std::ptrdiff_t>(m), partial.end());
    while (row.size() > 1) {
      for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
      row.pop_back();
    }
    double accelerated = row.front();
    double step = std::abs(accelerated - accelerated_prev);
    accelerated_prev = accelerated;
    if (step < spec.abs_tol * 0.1) {
      if (++calm >= 2) {
        total.value = accelerated;
        total.error += step;
        return total;
      }
    } else {
      calm = 0;
    }
  }
  total.value = accelerated_prev;
  total.converged = false;
  return total;
}

/// Value of integrate_oscillatory, or convergence_error when it fails.
template <class F>
double integrate_value(F&& h, double a, double b, double freq, Oscillation kind, const QuadratureSpec& spec,
                       std::span<const double> breakpoints = {}, const char* what = "integral") {
  auto r = integrate_oscillatory(h, a, b, freq, kind, spec, breakpoints);
  if (!r.converged) throw convergence_error(std::string(what) + " did not converge", r.value, r.error);
  return r.value;
}

}  // namespace maxnorm
