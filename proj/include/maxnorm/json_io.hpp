#pragma once

// JSON profile parsing and report serialization. Keys keep insertion order so
// identical inputs give byte-identical output.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "maxnorm/dimwalk.hpp"
#include "maxnorm/membership.hpp"
#include "maxnorm/positivity.hpp"
#include "maxnorm/profile.hpp"
#include "maxnorm/splines.hpp"
#include "maxnorm/summability.hpp"
#include "maxnorm/transform.hpp"

namespace maxnorm {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kSchema = "maxnorm.report/1";

/// "p/q", "p" or a JSON integer.
inline Rational parse_rational(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long long>());
  if (!j.is_string()) throw domain_error("rational must be an integer or a \"p/q\" string");
  auto s = j.get<std::string>();
  try {
    return Rational(s);
  } catch (const std::exception&) {
    throw domain_error("cannot parse rational \"" + s + "\"");
  }
}

namespace detail {

inline double number(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) throw domain_error(std::string("profile needs numeric \"") + key + "\"");
  return j[key].get<double>();
}

inline std::vector<double> numbers(const Json& j, const char* key, std::vector<double> fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_array()) throw domain_error(std::string("\"") + key + "\" must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) throw domain_error(std::string("\"") + key + "\" must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace detail

/// {"family": "power", "alpha": a[, "poly": [..]]}
/// {"family": "exp", "lambda": l[, "poly": [..]]}
/// {"family": "spline", "m": "p/q", "coeffs": ["1", ..]} or {"family": "spline", "r": r, "d": d}
/// {"family": "table", "grid": [..], "values": [..][, "order": 1|3]}
/// {"family": "zero"}
inline Profile profile_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
    throw domain_error("profile must be an object with a \"family\" string");
  auto fam = j["family"].get<std::string>();
  if (fam == "power") return Profile::truncated_power(detail::number(j, "alpha"), detail::numbers(j, "poly", {1.0}));
  if (fam == "exp") {
    double l = detail::number(j, "lambda");
    if (!(l > 0)) throw domain_error("exponential rate must be > 0");
    return Profile::exp_poly(l, detail::numbers(j, "poly", {1.0}));
  }
  if (fam == "spline") {
    if (j.contains("r") || j.contains("d")) {
      if (!j.value("r", Json()).is_number_integer() || !j.value("d", Json()).is_number_integer())
        throw domain_error("spline shorthand needs integer \"r\" and \"d\"");
      return Profile::spline(construct_A({j["r"].get<int>(), j["d"].get<int>()}));
    }
    if (!j.contains("m") || !j.contains("coeffs") || !j["coeffs"].is_array())
      throw domain_error("spline needs \"m\" and a \"coeffs\" array");
    SplinePoly s;
    s.m = parse_rational(j["m"]);
    if (s.m < 0) throw domain_error("spline exponent must be >= 0");
    s.coeffs.clear();
    for (const auto& c : j["coeffs"]) s.coeffs.push_back(parse_rational(c));
    return Profile::spline(std::move(s));
  }
  if (fam == "table") {
    int order = j.value("order", 1);
    if (order != 1 && order != 3) throw domain_error("table order must be 1 or 3");
    return Profile::tabulated(SampledCurve(detail::numbers(j, "grid", {}), detail::numbers(j, "values", {})), order);
  }
  if (fam == "zero") return Profile::zero();
  throw domain_error("unknown profile family \"" + fam + "\"");
}

/// Parses text that is either JSON or "@path" naming a JSON file.
inline Json parse_json_argument(const std::string& text, const std::function<std::string(const std::string&)>& read_file) {
  std::string body = !text.empty() && text[0] == '@' ? read_file(text.substr(1)) : text;
  try {
    return Json::parse(body);
  } catch (const Json::parse_error& e) {
    throw domain_error(std::string("invalid JSON: ") + e.what());
  }
}

inline Json to_json(const SampledCurve& c) { return Json{{"grid", c.grid}, {"values", c.values}}; }

inline Json to_json(const Profile& p) {
  if (p.is_zero()) return Json{{"family", "zero"}};
  const auto& f = p.family();
  if (const auto* tp = std::get_if<TruncatedPower>(&f)) return Json{{"family", "power"}, {"alpha", tp->alpha}, {"poly", tp->poly}};
  if (const auto* ep = std::get_if<ExpPoly>(&f)) return Json{{"family", "exp"}, {"lambda", ep->lambda}, {"poly", ep->poly}};
  if (const auto* sp = std::get_if<SplinePoly>(&f)) {
    Json c = Json::array();
    for (const auto& q : sp->coeffs) c.push_back(rational_string(q));
    return Json{{"family", "spline"}, {"m", rational_string(sp->m)}, {"coeffs", c}};
  }
  const auto& tb = std::get<Tabulated>(f);
  return Json{{"family", "table"}, {"grid", tb.curve.grid}, {"values", tb.curve.values}, {"order", tb.order}};
}

inline Json pairs_json(const std::vector<std::pair<double, double>>& v, const char* a, const char* b) {
  Json out = Json::array();
  for (const auto& [x, y] : v) out.push_back(Json{{a, x}, {b, y}});
  return out;
}

inline Json to_json(const LinearFit& f) {
  return Json{{"intercept", f.intercept}, {"slope", f.slope}, {"r_squared", f.r_squared}};
}

inline Json to_json(const PDVerdict& v) {
  Json j{{"verdict", to_string(v.verdict)}};
  j["witness"] = v.witness ? Json{{"x", v.witness->x}, {"y", v.witness->y}, {"value", v.witness->value}} : Json();
  j["min_margin"] = v.min_margin;
  j["min_x"] = v.min_x;
  j["min_y"] = v.min_y;
  j["tolerance"] = v.tolerance;
  j["grid_spec"] = v.grid_spec;
  j["f1_integral"] = v.f1_integral;
  j["moment_t_f1p"] = v.moment_t_f1p;
  j["parts_check"] = v.parts_check;
  j["tail_bound"] = v.tail_bound;
  j["pv_ladder"] = pairs_json(v.pv_ladder, "eps", "partial");
  j["pv_settled"] = v.pv_settled;
  return j;
}

inline Json to_json(const MonotonicityReport& m) {
  return Json{{"min_g_prime", m.min_g_prime},
              {"argmin", m.argmin},
              {"nondecreasing", m.nondecreasing},
              {"sign_changes", m.sign_changes},
              {"grid_spec", m.grid_spec}};
}

inline Json to_json(const ConvergenceReport& r) {
  return Json{{"classification", to_string(r.classification)},
              {"weight", r.weight},
              {"epsilon_ladder", pairs_json(r.epsilon_ladder, "eps", "partial")},
              {"fitted_exponent", r.fitted_exponent},
              {"fit_r_squared", r.fit_r_squared},
              {"local_order", r.local_order},
              {"critical_order", r.critical_order},
              {"value_if_convergent", r.value_if_convergent}};
}

inline Json to_json(const ModulusReport& r) {
  return Json{{"satisfied", r.satisfied},
              {"continuous", r.continuous},
              {"log_square", to_json(r.log_square)},
              {"tail", to_json(r.tail)},
              {"modulus_f0", to_json(r.modulus_f0)},
              {"modulus_f1", to_json(r.modulus_f1)},
              {"omega_f0", pairs_json(r.omega_f0, "t", "omega")},
              {"omega_f1", pairs_json(r.omega_f1, "t", "omega")}};
}

inline Json to_json(const AStarReport& r) {
  return Json{{"partials", pairs_json(r.partials, "T", "integral")},
              {"log_fit", to_json(r.log_fit)},
              {"sup_t_times_s", r.sup_t_times_s},
              {"boundary_limited", r.boundary_limited},
              {"first_boundary_t", r.first_boundary_t},
              {"scan_radius", r.scan_radius},
              {"radial_step", r.radial_step},
              {"directions", r.directions},
              {"distinct_directions", r.distinct_directions},
              {"tail_profile", to_json(r.tail_profile)}};
}

inline Json to_json(const SplineReport& r) {
  return Json{{"coefficients", r.coefficients},
              {"exponent", r.exponent},
              {"odd_coefficients_vanish", r.odd_coefficients_vanish},
              {"edge_vanishing_order", r.edge_vanishing_order},
              {"edge_derivatives_vanish", r.edge_derivatives_vanish},
              {"smooth_c2r", r.smooth_c2r},
              {"degree", r.degree},
              {"claimed_degree", r.claimed_degree},
              {"degree_matches", r.degree_matches},
              {"pd_line", to_string(r.pd_line)},
              {"pd_dimension", to_string(r.pd_dimension)},
              {"pd_line_min", r.pd_line_min},
              {"pd_dimension_min", r.pd_dimension_min},
              {"positive_definite", r.positive_definite()}};
}

inline Json to_json(const MomentReport& r) {
  return Json{{"moments", r.moments},
              {"moments_vanish", r.moments_vanish},
              {"descent_tail", pairs_json(r.descent_tail, "t", "f_d")}};
}

inline Json to_json(const MultiplierField& f) {
  return Json{{"generator", f.generator},  {"scale", f.scale},         {"K", f.K},
              {"radial", f.radial},        {"tail_estimate", f.tail_estimate},
              {"tail_sup", f.tail_sup},    {"tail_flag", f.tail_flag}};
}

inline Json to_json(const L1Norm& n) {
  return Json{{"value", n.value}, {"coarse", n.coarse}, {"error_estimate", n.error_estimate}, {"grid", n.grid}};
}

inline Json to_json(const PeriodizationReport& r) {
  Json s = Json::array();
  for (const auto& c : r.samples)
    s.push_back(Json{{"k", {c.k1, c.k2}},
                     {"reconstructed", c.reconstructed},
                     {"raw", c.raw},
                     {"from_kernel", c.from_kernel},
                     {"direct", c.direct},
                     {"abs_diff", c.abs_diff}});
  return Json{{"delta", r.delta},           {"images", r.images},
              {"grid", r.grid},             {"samples", s},
              {"discrepancy", r.discrepancy}, {"imag_residue", r.imag_residue},
              {"budget", r.budget},         {"flagged", r.flagged}};
}

/// Envelope shared by every command.
inline Json run_report(const std::string& command, const Json& profile, Json payload) {
  return Json{{"schema", kSchema},
              {"version", kToolVersion},
              {"command", command},
              {"profile", profile},
              {"payload", std::move(payload)}};
}

}  // namespace maxnorm
