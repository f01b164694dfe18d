// Command line front end. JSON on stdout (or --out), CSV for grid dumps.
// Exit codes: 0 ok, 1 selftest failure, 2 domain error, 3 non-convergence
// (or a soft flag under --strict), 64 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "maxnorm/maxnorm.hpp"

using namespace maxnorm;

namespace {

constexpr int kExitSelftest = 1;
constexpr int kExitDomain = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitUsage = 64;

struct Options {
  std::string out = "-";
  double tol = 0;
  unsigned threads = 0;
  bool strict = false;
};

// Raised under --strict when a report carries a soft failure flag.
struct StrictFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw domain_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_arg(const std::string& text) { return parse_json_argument(text, read_file); }

void emit(const Options& o, const std::string& text) {
  if (o.out == "-" || o.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw domain_error("cannot write " + o.out);
  f << text;
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

void strict_check(const Options& o, bool bad, const std::string& what) {
  if (o.strict && bad) throw StrictFailure(what);
}

/// "a:b:n" or "a:b:n x c:d:m".
struct Axis {
  double lo = 0, hi = 0;
  std::size_t n = 0;
  std::vector<double> points() const { return linspace(lo, hi, n); }
};

Axis parse_axis(const std::string& s) {
  Axis a;
  char c1 = 0, c2 = 0;
  long n = 0;
  std::istringstream in(s);
  if (!(in >> a.lo >> c1 >> a.hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(in >> std::ws).eof())
    throw domain_error("grid must look like lo:hi:n, got \"" + s + "\"");
  a.n = static_cast<std::size_t>(n);
  return a;
}

std::pair<Axis, Axis> parse_grid2(const std::string& s) {
  auto x = s.find('x');
  if (x == std::string::npos) {
    auto a = parse_axis(s);
    return {a, a};
  }
  return {parse_axis(s.substr(0, x)), parse_axis(s.substr(x + 1))};
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// ---- transform -------------------------------------------------------------

struct TransformArgs {
  std::string profile, grid = "0:10:11", method = "f0hat", format = "csv";
  bool no_oracle = false;
};

int run_transform(const Options& o, const TransformArgs& a) {
  auto p = profile_from_json(parse_arg(a.profile));
  auto [ax, ay] = parse_grid2(a.grid);
  FhatEvaluator ev(p);
  auto xs = ax.points(), ys = ay.points();
  struct Row {
    double y1, y2, fhat, oracle, diff, deriv;
  };
  std::vector<Row> rows(xs.size() * ys.size());
  parallel_for(rows.size(), [&](std::size_t k) {
    double y1 = xs[k / ys.size()], y2 = ys[k % ys.size()];
    auto method = a.method == "derivative" ? TransformMethod::via_derivative : TransformMethod::via_f0hat;
    Row r{y1, y2, ev(y1, y2, method), NAN, NAN, NAN};
    if (!a.no_oracle) {
      r.oracle = oracle_2d(p, y1, y2).value;
      r.diff = std::abs(r.fhat - r.oracle);
    }
    if (a.method == "both") r.deriv = ev(y1, y2, TransformMethod::via_derivative);
    rows[k] = r;
  });
  if (a.format == "csv") {
    std::string s = "y1,y2,fhat,oracle,abs_diff";
    if (a.method == "both") s += ",fhat_derivative";
    s += "\n";
    for (const auto& r : rows) {
      s += num(r.y1) + "," + num(r.y2) + "," + num(r.fhat) + "," + num(r.oracle) + "," + num(r.diff);
      if (a.method == "both") s += "," + num(r.deriv);
      s += "\n";
    }
    emit(o, s);
    return 0;
  }
  Json arr = Json::array();
  double worst = 0;
  for (const auto& r : rows) {
    Json j{{"y1", r.y1}, {"y2", r.y2}, {"fhat", r.fhat}, {"oracle", r.oracle}, {"abs_diff", r.diff}};
    if (a.method == "both") {
      j["fhat_derivative"] = r.deriv;
      worst = std::max(worst, std::abs(r.deriv - r.fhat));
    }
    if (!a.no_oracle) worst = std::max(worst, r.diff);
    arr.push_back(j);
  }
  emit_json(o, run_report("transform", to_json(p),
                          Json{{"method", a.method}, {"grid", a.grid}, {"max_route_diff", worst}, {"points", arr}}));
  return 0;
}

// ---- check-pd --------------------------------------------------------------

struct CheckPdArgs {
  std::string profile, method = "f1";
  double x_max = 0;
  std::size_t points = 0;
};

int run_check_pd(const Options& o, const CheckPdArgs& a) {
  auto p = profile_from_json(parse_arg(a.profile));
  Json payload{{"method", a.method}};
  std::vector<Verdict> verdicts;
  if (a.method == "f1" || a.method == "both") {
    ScanSpec s;
    s.x_max = a.x_max;
    if (a.points) s.points = a.points;
    s.tol_abs = o.tol;
    auto v = check_pd_via_f1(p, s);
    verdicts.push_back(v.verdict);
    payload["via_f1"] = to_json(v);
  }
  if (a.method == "direct" || a.method == "both") {
    Scan2DSpec s;
    s.y_max = a.x_max;
    if (a.points) s.points = a.points;
    s.tol_abs = o.tol;
    auto v = check_pd_direct(p, s);
    verdicts.push_back(v.verdict);
    payload["direct"] = to_json(v);
  }
  Verdict v = verdicts.front();
  bool agree = std::all_of(verdicts.begin(), verdicts.end(), [&](Verdict w) { return w == v; });
  if (!agree) v = Verdict::inconclusive;
  payload["verdict"] = to_string(v);
  payload["routes_agree"] = agree;
  emit_json(o, run_report("check-pd", to_json(p), payload));
  strict_check(o, v == Verdict::inconclusive, "positive definiteness verdict is inconclusive");
  return 0;
}

// ---- check-wiener ----------------------------------------------------------

int run_check_wiener(const Options& o, const std::string& profile, const std::string& criterion) {
  auto p = profile_from_json(parse_arg(profile));
  Json payload{{"criterion", criterion}};
  bool soft_fail = false;
  if (criterion == "t4" || criterion == "r3") {
    auto r = criterion == "t4" ? boundary_log_criterion(p) : remark3_radial_criterion(p);
    payload["report"] = to_json(r);
    payload["classification"] = to_string(r.classification);
    soft_fail = r.classification == Classification::inconclusive;
  } else if (criterion == "t3") {
    auto r = modulus_criterion(p);
    payload["report"] = to_json(r);
    payload["satisfied"] = r.satisfied;
    for (const auto* c : r.integrals()) soft_fail = soft_fail || c->classification == Classification::inconclusive;
  } else {
    auto r = astar_tail_profile(p);
    payload["report"] = to_json(r);
    soft_fail = r.boundary_limited;
  }
  emit_json(o, run_report("check-wiener", to_json(p), payload));
  strict_check(o, soft_fail, "integral classification is inconclusive");
  return 0;
}

// ---- spline ----------------------------------------------------------------

int run_spline_construct(const Options& o, int r, int d, const std::string& variant) {
  SplineSpec spec{r, d};
  auto A = variant == "printed" ? printed_A2(d) : construct_A(spec);
  if (variant == "printed" && r != 2) throw domain_error("the printed variant exists for r = 2 only");
  ScanSpec s;
  s.tol_abs = o.tol;
  auto rep = verify_A_properties(A, spec, s);
  Json payload = to_json(rep);
  payload["r"] = r;
  payload["d"] = d;
  payload["variant"] = variant;
  emit_json(o, run_report("spline construct", to_json(Profile::spline(A)), payload));
  strict_check(o, !rep.positive_definite(), "spline is not confirmed positive definite");
  return 0;
}

int run_spline_eval_h(const Options& o, double mu, double nu, const std::string& grid, const std::string& format) {
  HmuNuSpec spec{mu, nu};
  auto xs = parse_axis(grid).points();
  std::vector<double> h(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) h[i] = eval_h_mu_nu(spec, xs[i]);
  if (format == "csv") {
    std::string s = "x,h\n";
    for (std::size_t i = 0; i < xs.size(); ++i) s += num(xs[i]) + "," + num(h[i]) + "\n";
    emit(o, s);
    return 0;
  }
  emit_json(o, run_report("spline eval-h", Json(), Json{{"mu", mu}, {"nu", nu}, {"curve", to_json(SampledCurve(xs, h))}}));
  return 0;
}

// ---- dimwalk ---------------------------------------------------------------

struct DimwalkArgs {
  std::string profile, direction = "down", grid = "0:1:11", format = "csv";
  int d = 3;
  bool moments = false;
};

int run_dimwalk(const Options& o, const DimwalkArgs& a) {
  auto p = profile_from_json(parse_arg(a.profile));
  auto ts = parse_axis(a.grid).points();
  std::vector<double> val(ts.size()), spread(ts.size(), 0.0);
  std::vector<bool> unstable(ts.size(), false);
  bool up = a.direction == "up";
  if (up) {
    for (std::size_t i = 0; i < ts.size(); ++i) {
      auto v = ascend_odd(p, a.d, ts[i]);
      val[i] = v.value;
      spread[i] = v.spread;
      unstable[i] = v.unstable;
    }
  } else {
    parallel_for(ts.size(), [&](std::size_t i) { val[i] = descend(p, a.d, ts[i]); });
  }
  bool any_unstable = std::find(unstable.begin(), unstable.end(), true) != unstable.end();
  if (a.format == "csv") {
    std::string s = up ? "t,value,spread,unstable\n" : "t,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      s += num(ts[i]) + "," + num(val[i]);
      if (up) s += "," + num(spread[i]) + "," + (unstable[i] ? "1" : "0");
      s += "\n";
    }
    emit(o, s);
  } else {
    Json rows = Json::array();
    for (std::size_t i = 0; i < ts.size(); ++i) {
      Json r{{"t", ts[i]}, {"value", val[i]}};
      if (up) {
        r["spread"] = spread[i];
        r["unstable"] = static_cast<bool>(unstable[i]);
      }
      rows.push_back(r);
    }
    Json payload{{"direction", a.direction}, {"d", a.d}, {"rows", rows}};
    if (a.moments) payload["moment_conditions"] = to_json(support_moment_conditions(p, a.d));
    emit_json(o, run_report("dimwalk", to_json(p), payload));
  }
  strict_check(o, any_unstable, "ascent finite differences are unstable");
  return 0;
}

// ---- summability -----------------------------------------------------------

struct SummabilityArgs {
  std::string generator, measure = "norm";
  double scale = 0;
  int K = 0;
  std::size_t grid = 0;
  int images = 40;
};

Generator generator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw domain_error("generator must be an object with a \"type\" string");
  auto t = j["type"].get<std::string>();
  if (t == "mr") return Generator::mr(j.value("alpha", 1.0), j.value("beta", 1.0));
  if (t == "exp") return Generator::exp();
  if (t == "sharp") return Generator::sharp();
  if (t == "profile") {
    if (!j.contains("profile")) throw domain_error("profile generator needs \"profile\"");
    return Generator::of(profile_from_json(j["profile"]));
  }
  throw domain_error("unknown generator type \"" + t + "\"");
}

int run_summability(const Options& o, const SummabilityArgs& a) {
  auto gj = parse_arg(a.generator);
  auto gen = generator_from_json(gj);
  Json payload{{"measure", a.measure}, {"scale", a.scale}};
  bool soft_fail = false;
  if (a.measure == "periodization") {
    if (gen.kind != GeneratorKind::profile) throw domain_error("periodization needs a profile generator");
    auto r = periodization_check(*gen.profile, a.scale, a.images, a.grid ? a.grid : 64);
    payload["periodization"] = to_json(r);
    soft_fail = r.flagged;
  } else {
    auto f = sample_multiplier(gen, a.scale, a.K);
    payload["field"] = to_json(f);
    soft_fail = f.tail_flag;
    if (a.measure == "norm") {
      payload["l1_norm"] = to_json(kernel_l1_norm(f, a.grid));
    } else {
      auto k = kernel(f, a.grid ? a.grid : 256);
      payload["kernel"] = Json{{"grid", k.N},     {"min", k.min},       {"max", k.max},
                               {"min_x1", k.min_x1}, {"min_x2", k.min_x2}, {"mean", k.mean},
                               {"nonnegative", k.min >= -1e-9}};
    }
  }
  emit_json(o, run_report("summability", gj, payload));
  strict_check(o, soft_fail, "truncation budget exceeded");
  return 0;
}

// ---- selftest --------------------------------------------------------------

int run_selftest(const Options& o) {
  auto first = run_acceptance([](const CriterionResult& r) { std::cerr << table_line(r) << "\n"; });
  auto second = run_acceptance();
  auto a = acceptance_json(first), b = acceptance_json(second);
  auto det = determinism_result(a.dump(), b.dump());
  std::cerr << table_line(det) << "\n";
  a.push_back(Json{{"id", det.id}, {"name", det.name}, {"pass", det.pass}, {"details", det.details}});
  bool ok = det.pass;
  for (const auto& r : first) ok = ok && r.pass;
  emit_json(o, run_report("selftest", Json(), Json{{"all_pass", ok}, {"criteria", a}}));
  return ok ? 0 : kExitSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Max-norm radial functions: transforms, positive definiteness, Wiener algebra tests"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--out", o.out, "Output path, - for stdout")->capture_default_str();
  app.add_option("--tol", o.tol, "Absolute tolerance for sign decisions (0: relative default)")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", o.threads, "Worker thread cap (0: hardware)");
  app.add_flag("--strict", o.strict, "Treat soft numerical flags as fatal (exit 3)");

  const std::vector<std::string> formats{"csv", "json"};

  TransformArgs ta;
  auto* tr = app.add_subcommand("transform", "2D transform of f0(max(|x1|,|x2|)) on a grid");
  tr->add_option("--profile", ta.profile, "Profile JSON or @file")->required();
  tr->add_option("--grid", ta.grid, "lo:hi:n or lo:hi:n x lo:hi:n")->capture_default_str();
  tr->add_option("--method", ta.method)->check(CLI::IsMember({"f0hat", "derivative", "both"}))->capture_default_str();
  tr->add_option("--format", ta.format)->check(CLI::IsMember(formats))->capture_default_str();
  tr->add_flag("--no-oracle", ta.no_oracle, "Skip the 2D quadrature oracle column");

  CheckPdArgs pa;
  auto* pd = app.add_subcommand("check-pd", "Positive definiteness of the 2D function");
  pd->add_option("--profile", pa.profile, "Profile JSON or @file")->required();
  pd->add_option("--method", pa.method)->check(CLI::IsMember({"f1", "direct", "both"}))->capture_default_str();
  pd->add_option("--x-max", pa.x_max, "Scan extent (0: default)");
  pd->add_option("--points", pa.points, "Scan points (0: default)");

  std::string w_profile, w_criterion = "t4";
  auto* cw = app.add_subcommand("check-wiener", "Integral criteria for the Wiener algebra");
  cw->add_option("--profile", w_profile, "Profile JSON or @file")->required();
  cw->add_option("--criterion", w_criterion)->check(CLI::IsMember({"t3", "t4", "r3", "astar"}))->capture_default_str();

  auto* sp = app.add_subcommand("spline", "Compactly supported positive definite splines");
  sp->require_subcommand(1);
  int s_r = 1, s_d = 1;
  std::string s_variant = "canonical";
  auto* sc = sp->add_subcommand("construct", "Exact A_{r,d} and its checks");
  sc->add_option("--r", s_r)->required();
  sc->add_option("--d", s_d)->required();
  sc->add_option("--variant", s_variant)->check(CLI::IsMember({"canonical", "printed"}))->capture_default_str();
  double h_mu = 1, h_nu = 1;
  std::string h_grid = "0:1:11", h_format = "json";
  auto* se = sp->add_subcommand("eval-h", "Evaluate h_{mu,nu} on a grid");
  se->add_option("--mu", h_mu)->required();
  se->add_option("--nu", h_nu)->required();
  se->add_option("--grid", h_grid, "lo:hi:n")->capture_default_str();
  se->add_option("--format", h_format)->check(CLI::IsMember(formats))->capture_default_str();

  DimwalkArgs da;
  auto* dw = app.add_subcommand("dimwalk", "Radial profiles across dimensions");
  dw->add_option("--f1,--profile", da.profile, "Profile JSON or @file (f1 down, f_d up)")->required();
  dw->add_option("--d", da.d)->capture_default_str();
  dw->add_option("--direction", da.direction)->check(CLI::IsMember({"down", "up"}))->capture_default_str();
  dw->add_option("--grid", da.grid, "lo:hi:n")->capture_default_str();
  dw->add_option("--format", da.format)->check(CLI::IsMember(formats))->capture_default_str();
  dw->add_flag("--moments", da.moments, "Report the support moment conditions (json)");

  SummabilityArgs sa;
  auto* sm = app.add_subcommand("summability", "Multipliers on Z^2 and their kernels");
  sm->add_option("--generator", sa.generator, "Generator JSON or @file")->required();
  sm->add_option("--scale", sa.scale, "n, eps or delta")->required();
  sm->add_option("--measure", sa.measure)
      ->check(CLI::IsMember({"norm", "positivity", "periodization"}))
      ->capture_default_str();
  sm->add_option("--K", sa.K, "Lattice window (0: automatic)");
  sm->add_option("--grid", sa.grid, "Grid points per axis (0: default)");
  sm->add_option("--images", sa.images, "Periodization image window")->capture_default_str();

  auto* st = app.add_subcommand("selftest", "Run the acceptance suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitUsage;
  }

  try {
    if (o.threads) set_max_threads(o.threads);
    if (*tr) return run_transform(o, ta);
    if (*pd) return run_check_pd(o, pa);
    if (*cw) return run_check_wiener(o, w_profile, w_criterion);
    if (*sc) return run_spline_construct(o, s_r, s_d, s_variant);
    if (*se) return run_spline_eval_h(o, h_mu, h_nu, h_grid, h_format);
    if (*dw) return run_dimwalk(o, da);
    if (*sm) return run_summability(o, sa);
    if (*st) return run_selftest(o);
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const StrictFailure& e) {
    std::cerr << "strict: " << e.what() << "\n";
    return kExitConvergence;
  }
  return kExitUsage;
}
