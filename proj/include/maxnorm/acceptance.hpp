#pragma once

// The acceptance suite: numbered end-to-end checks shared by the `selftest`
// command and the acceptance test binary. Reports carry no timings so that
// repeated runs are byte-identical; timings go to the text table only.

#include <chrono>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "maxnorm/dimwalk.hpp"
#include "maxnorm/json_io.hpp"
#include "maxnorm/membership.hpp"
#include "maxnorm/positivity.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/splines.hpp"
#include "maxnorm/summability.hpp"
#include "maxnorm/transform.hpp"

namespace maxnorm {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  Json details;
  double seconds = 0;  // not serialized
};

namespace acceptance {

inline double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// First positive root of sin x = x cos x by plain bisection on (pi, 3 pi / 2).
inline double first_tan_root() {
  double lo = pi + 1e-9, hi = 1.5 * pi - 1e-9;
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  double flo = f(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// f0(t) = 1 / ln(2e / (1 - t)) on [0, 1), tabulated on a grid that is
/// geometric towards t = 1; the boundary integral with weight ln(2/s)/s
/// diverges like ln ln.
inline Profile log_borderline_profile() {
  std::vector<double> g, v;
  for (double x : linspace(0.0, 0.9, 91)) {
    g.push_back(x);
    v.push_back(1.0 / std::log(2.0 * std::exp(1.0) / (1.0 - x)));
  }
  for (int k = 1; k <= 300; ++k) {
    double s = 0.1 * std::pow(10.0, -0.05 * k);  // down to 1e-16
    double x = 1.0 - s;
    if (x <= g.back()) continue;
    g.push_back(x);
    v.push_back(1.0 / std::log(2.0 * std::exp(1.0) / s));
  }
  g.push_back(1.0);
  v.push_back(0.0);
  return Profile::tabulated(SampledCurve(g, v));
}

inline Profile spline_a13() { return Profile::spline(SplinePoly{Rational(4), {Rational(1), Rational(4)}}); }

// Deterministic uniform samples in [a, b) independent of the standard
// library's distribution implementation.
class Uniform {
 public:
  explicit Uniform(std::uint32_t seed) : rng_(seed) {}
  double operator()(double a, double b) { return a + (b - a) * (static_cast<double>(rng_()) / 4294967296.0); }

 private:
  std::mt19937 rng_;
};

inline CriterionResult norm_identity() {
  CriterionResult r{1, "norm identity: box quadrature of |f| against 8 int t |f0|", true, Json::object()};
  for (const auto& [label, p] : std::vector<std::pair<std::string, Profile>>{{"exp(1)", Profile::exponential(1)},
                                                                             {"power(2)", Profile::power_plus(2)}}) {
    auto t0 = std::chrono::steady_clock::now();
    double reduced = 8.0 * moment(p, 1.0, true);
    auto o = oracle_norm(p, 1.0);
    double oracle = o.value + o.tail_bound;
    double rel = std::abs(oracle - reduced) / std::abs(reduced);
    double secs = elapsed(t0);
    bool ok = rel <= 1e-6 && secs < 10.0;
    r.pass = r.pass && ok;
    r.details[label] = Json{{"oracle", oracle}, {"reduced", reduced}, {"rel_diff", rel}, {"tolerance", 1e-6}, {"pass", ok}};
  }
  return r;
}

inline CriterionResult transform_reduction() {
  CriterionResult r{2, "transform reduction: three-way agreement at 25 random points", true, Json::object()};
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& [label, p, tol] : std::vector<std::tuple<std::string, Profile, double>>{
           {"power(2)", Profile::power_plus(2), 1e-6}, {"exp(1)", Profile::exponential(1), 1e-5}}) {
    FhatEvaluator ev(p);
    Uniform u(20240601);
    std::vector<std::array<double, 2>> pts(25);
    for (auto& y : pts) y = {u(0.1, 10.0), u(0.1, 10.0)};
    std::vector<double> diff(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      double a = ev(pts[i][0], pts[i][1], TransformMethod::via_f0hat);
      double b = ev(pts[i][0], pts[i][1], TransformMethod::via_derivative);
      double o = oracle_2d(p, pts[i][0], pts[i][1]).value;
      diff[i] = std::max({std::abs(a - b), std::abs(a - o), std::abs(b - o)});
    });
    double worst = *std::max_element(diff.begin(), diff.end());
    bool ok = worst <= tol;
    r.pass = r.pass && ok;
    r.details[label] = Json{{"max_abs_diff", worst}, {"tolerance", tol}, {"points", pts.size()}, {"pass", ok}};
  }
  r.pass = r.pass && elapsed(t0) < 60.0;
  return r;
}

inline CriterionResult g_derivative_identity() {
  CriterionResult r{3, "g' by the derivative sine transform and by the cosine transform of f1", true, Json::object()};
  for (const auto& [label, p] : std::vector<std::pair<std::string, Profile>>{{"exp(1)", Profile::exponential(1)},
                                                                             {"A_1,3", spline_a13()}}) {
    FhatEvaluator ev(p);
    Json rows = Json::array();
    double worst = 0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      auto g = ev.g_derivative(t);
      worst = std::max(worst, g.discrepancy);
      rows.push_back(Json{{"t", t}, {"path_a", g.path_a}, {"path_b", g.path_b}, {"abs_diff", g.discrepancy}});
    }
    bool ok = worst <= 1e-6;
    r.pass = r.pass && ok;
    r.details[label] = Json{{"rows", rows}, {"max_abs_diff", worst}, {"tolerance", 1e-6}, {"pass", ok}};
  }
  return r;
}

inline CriterionResult exponential_example() {
  CriterionResult r{4, "cosine transform of (1+t)e^-t and positivity of exp(1)", true, Json::object()};
  auto f1 = Profile::exp_poly(1.0, {1.0, 1.0});
  double worst = 0;
  for (double x : linspace(0.0, 10.0, 50)) worst = std::max(worst, std::abs(cos_transform(f1, x) - 2.0 / std::pow(1 + x * x, 2)));
  bool closed = worst <= 1e-8;
  auto via = check_pd_via_f1(Profile::exponential(1));
  auto direct = check_pd_direct(Profile::exponential(1));
  bool v_ok = via.verdict == Verdict::strictly_positive && via.min_margin > 0;
  bool d_ok = direct.verdict == Verdict::strictly_positive && direct.min_margin > 0;
  r.pass = closed && v_ok && d_ok;
  r.details = Json{{"closed_form_max_abs_diff", worst},
                   {"tolerance", 1e-8},
                   {"via_f1", Json{{"verdict", to_string(via.verdict)}, {"min_margin", via.min_margin}, {"grid", via.grid_spec}}},
                   {"direct", Json{{"verdict", to_string(direct.verdict)},
                                   {"min_margin", direct.min_margin},
                                   {"grid", direct.grid_spec}}}};
  return r;
}

inline CriterionResult non_pd_witness() {
  CriterionResult r{5, "power(1) is not positive definite; witness near the first root of tan x = x", false,
                    Json::object()};
  auto v = check_pd_via_f1(Profile::power_plus(1));
  double root = first_tan_root();
  r.details = Json{{"verdict", to_string(v.verdict)}, {"root", root}};
  if (v.witness) {
    r.details["witness_x"] = v.witness->x;
    r.details["witness_value"] = v.witness->value;
    r.details["distance"] = std::abs(v.witness->x - root);
    r.pass = v.verdict == Verdict::indefinite && std::abs(v.witness->x - root) <= 0.01;
  }
  return r;
}

inline CriterionResult spline_table() {
  CriterionResult r{6, "exact A_{r,d} coefficients and the printed A_{2,d} variant", true, Json::object()};
  Json rows = Json::array();
  for (int d : {1, 3, 5, 7}) {
    auto A = construct_A({1, d});
    Rational want(d + 5, 2);
    bool ok = A.m == want && A.coeffs.size() == 2 && A.coeffs[1] == want;
    r.pass = r.pass && ok;
    rows.push_back(Json{{"d", d}, {"exponent", rational_string(A.m)}, {"a1", rational_string(A.coeffs[1])}, {"pass", ok}});
  }
  auto A23 = construct_A({2, 3});
  bool a23 = A23.coeffs.size() == 3 && A23.coeffs[1] == Rational(6) && A23.coeffs[2] == Rational(35, 3);
  r.pass = r.pass && a23;
  auto printed = printed_A2(3);
  auto rep = verify_A_properties(printed, {2, 3});
  Json pc = Json::array();
  for (const auto& c : printed.coeffs) pc.push_back(rational_string(c));
  r.details = Json{{"r1", rows},
                   {"r2_d3", Json{{"a1", rational_string(A23.coeffs[1])}, {"a2", rational_string(A23.coeffs[2])}, {"pass", a23}}},
                   {"printed_variant_d3",
                    Json{{"exponent", rational_string(printed.m)},
                         {"coefficients", pc},
                         {"equals_construction", printed == A23},
                         {"equals_construction_d1", printed == construct_A({2, 1})},
                         {"degree", rep.degree},
                         {"claimed_degree", rep.claimed_degree},
                         {"pd_dimension", to_string(rep.pd_dimension)},
                         {"pd_dimension_min", rep.pd_dimension_min}}}};
  return r;
}

inline CriterionResult h_family() {
  CriterionResult r{7, "h_{2,2} / A_{1,1} is constant on (0, 1)", false, Json::object()};
  auto A = Profile::spline(construct_A({1, 1}));
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 1; i <= 20; ++i) {
    double x = i / 21.0;
    double q = eval_h_mu_nu({2, 2}, x) / A(x);
    lo = std::min(lo, q);
    hi = std::max(hi, q);
  }
  double spread = (hi - lo) / std::abs(0.5 * (hi + lo));
  r.pass = spread <= 1e-7;
  r.details = Json{{"ratio", 0.5 * (hi + lo)}, {"relative_spread", spread}, {"tolerance", 1e-7}};
  return r;
}

inline CriterionResult endpoint_asymptotics() {
  CriterionResult r{8, "asymptotics of int_0^1 (1-t)^a e^{itx} dt against quadrature", true, Json::object()};
  Json rows = Json::array();
  for (double a : {-0.5, 0.0, 0.7, 2.5})
    for (double x : {50.0, 100.0}) {
      double diff = std::abs(endpoint_asymptotic(a, x).value - endpoint_quadrature(a, x));
      double tol = 10.0 * std::max(1.0, std::abs(a)) / (x * x * x);
      bool ok = diff <= tol;
      r.pass = r.pass && ok;
      rows.push_back(Json{{"alpha", a}, {"x", x}, {"abs_diff", diff}, {"tolerance", tol}, {"pass", ok}});
    }
  r.details = Json{{"rows", rows}};
  return r;
}

inline CriterionResult boundary_classifier() {
  CriterionResult r{9, "log-weighted boundary integral classifier", true, Json::object()};
  Json rows = Json::array();
  auto run = [&](const std::string& label, const Profile& p, Classification want) {
    auto t0 = std::chrono::steady_clock::now();
    auto c = boundary_log_criterion(p);
    double secs = elapsed(t0);
    bool ok = c.classification == want && secs <= 5.0;
    r.pass = r.pass && ok;
    rows.push_back(Json{{"profile", label},
                        {"classification", to_string(c.classification)},
                        {"expected", to_string(want)},
                        {"local_order", c.local_order},
                        {"fitted_exponent", c.fitted_exponent},
                        {"pass", ok}});
  };
  for (double a : {0.1, 0.5, 1.0, 2.0}) run("power(" + Json(a).dump() + ")", Profile::power_plus(a), Classification::convergent);
  run("log-borderline table", log_borderline_profile(), Classification::divergent);
  r.details = Json{{"rows", rows}};
  return r;
}

inline CriterionResult astar_divergence() {
  CriterionResult r{10, "tail-sup integral of power(1) grows like ln T", false, Json::object()};
  auto a = astar_tail_profile(Profile::power_plus(1));
  std::vector<double> x, y;
  Json rows = Json::array();
  for (auto [T, v] : a.partials)
    if (T >= 8) {
      x.push_back(std::log(T));
      y.push_back(v);
      rows.push_back(Json{{"T", T}, {"integral", v}});
    }
  auto fit = fit_line(x, y);
  r.pass = x.size() == 4 && fit.r_squared >= 0.98 && fit.slope > 0;
  r.details = Json{{"partials", rows}, {"fit", to_json(fit)}, {"boundary_limited", a.boundary_limited}};
  return r;
}

inline CriterionResult dimension_walk() {
  CriterionResult r{11, "descent/ascent round trip and compact support from moment conditions", false, Json::object()};
  auto f1 = Profile::spline(SplinePoly{Rational(0), {Rational(1, 2), Rational(0), Rational(-1, 2)}});
  double worst = 0;
  for (double u : linspace(0.05, 0.95, 91)) {
    auto v = ascend_odd([&](double s) { return descend(f1, 3, s); }, 3, u);
    worst = std::max(worst, std::abs(v.value - f1(u)));
  }
  auto zero_mean = Profile::spline(SplinePoly{Rational(0), {Rational(-1, 3), Rational(0), Rational(1)}});
  auto m = support_moment_conditions(zero_mean, 3);
  double tail = 0;
  for (auto [t, v] : m.descent_tail) tail = std::max(tail, std::abs(v));
  r.pass = worst <= 1e-6 && tail <= 1e-8;
  r.details = Json{{"round_trip_max_error", worst}, {"tolerance", 1e-6}, {"moments", m.moments},
                   {"descent_tail_max", tail}, {"tail_tolerance", 1e-8}};
  return r;
}

inline CriterionResult summability() {
  CriterionResult r{12, "positive exponential kernels and ln^2 growth of square partial sums", true, Json::object()};
  auto t0 = std::chrono::steady_clock::now();
  Json pos = Json::array();
  for (double eps : {0.1, 0.5, 1.0}) {
    auto f = sample_multiplier(Generator::exp(), eps);
    auto k = kernel(f, 256);
    bool ok = k.min >= -1e-9;
    r.pass = r.pass && ok;
    pos.push_back(Json{{"eps", eps}, {"K", f.K}, {"tail", f.tail_estimate}, {"kernel_min", k.min}, {"pass", ok}});
  }
  std::vector<double> ns{8, 16, 32, 64}, norms;
  for (double n : ns) norms.push_back(kernel_l1_norm(sample_multiplier(Generator::sharp(), n)).value);
  auto g = fit_log_power(ns, norms);
  bool growth = g.exponent >= 1.5 && g.exponent <= 2.5;
  r.pass = r.pass && growth && elapsed(t0) < 120.0;
  r.details = Json{{"exponential", pos},
                   {"sharp_norms", norms},
                   {"growth_exponent", g.exponent},
                   {"growth_r_squared", g.r_squared},
                   {"exponent_range", {1.5, 2.5}}};
  return r;
}

}  // namespace acceptance

/// Criteria 1-12 in order; `progress` sees each result as it completes.
inline std::vector<CriterionResult> run_acceptance(const std::function<void(const CriterionResult&)>& progress = {}) {
  using namespace acceptance;
  std::vector<std::function<CriterionResult()>> suite{norm_identity,        transform_reduction, g_derivative_identity,
                                                      exponential_example,  non_pd_witness,      spline_table,
                                                      h_family,             endpoint_asymptotics, boundary_classifier,
                                                      astar_divergence,     dimension_walk,      summability};
  std::vector<CriterionResult> out;
  for (auto& c : suite) {
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult res;
    try {
      res = c();
    } catch (const std::exception& e) {
      res.id = static_cast<int>(out.size()) + 1;
      res.name = "criterion raised an exception";
      res.pass = false;
      res.details = Json{{"error", e.what()}};
    }
    res.seconds = elapsed(t0);
    if (progress) progress(res);
    out.push_back(std::move(res));
  }
  return out;
}

inline Json acceptance_json(const std::vector<CriterionResult>& results) {
  Json a = Json::array();
  for (const auto& r : results) a.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
  return a;
}

/// Criterion 13: the serialized suite is identical across two runs.
inline CriterionResult determinism_result(const std::string& first, const std::string& second) {
  CriterionResult r{13, "two consecutive runs give byte-identical reports", first == second, Json::object()};
  r.details = Json{{"bytes", first.size()}, {"identical", first == second}};
  return r;
}

inline std::string table_line(const CriterionResult& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s %2d ", r.pass ? "PASS" : "FAIL", r.id);
  std::string s = buf + r.name;
  if (r.seconds > 0) {
    std::snprintf(buf, sizeof buf, "  (%.1f s)", r.seconds);
    s += buf;
  }
  return s;
}

}  // namespace maxnorm
