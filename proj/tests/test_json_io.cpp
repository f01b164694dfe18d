#include <gtest/gtest.h>

#include "maxnorm/json_io.hpp"

using namespace maxnorm;

namespace {

Profile parse(const std::string& s) { return profile_from_json(Json::parse(s)); }

}  // namespace

TEST(JsonIo, Families) {
  EXPECT_DOUBLE_EQ(parse(R"({"family":"exp","lambda":1})")(2.0), std::exp(-2.0));
  EXPECT_DOUBLE_EQ(parse(R"({"family":"power","alpha":3})")(0.5), 0.125);
  EXPECT_DOUBLE_EQ(parse(R"({"family":"power","alpha":2,"poly":[1,2]})")(0.5), 0.25 * 2);
  EXPECT_DOUBLE_EQ(parse(R"({"family":"spline","m":"4","coeffs":["1","4"]})")(0.5), std::pow(0.5, 4) * 3);
  EXPECT_DOUBLE_EQ(parse(R"({"family":"spline","m":4,"coeffs":[1,4]})")(0.25), std::pow(0.75, 4) * 2);
  EXPECT_DOUBLE_EQ(parse(R"({"family":"spline","r":1,"d":3})")(0.5), std::pow(0.5, 4) * 3);
  EXPECT_DOUBLE_EQ(parse(R"({"family":"table","grid":[0,1,2],"values":[2,1,0]})")(0.5), 1.5);
  EXPECT_TRUE(parse(R"({"family":"zero"})").is_zero());
}

TEST(JsonIo, RationalCoefficients) {
  auto p = parse(R"({"family":"spline","m":"7/2","coeffs":["1","7/2","35/12"]})");
  const auto& s = std::get<SplinePoly>(p.family());
  EXPECT_EQ(s.m, Rational(7, 2));
  EXPECT_EQ(s.coeffs[2], Rational(35, 12));
  EXPECT_EQ(rational_string(s.coeffs[2]), "35/12");
  EXPECT_EQ(rational_string(Rational(4)), "4");
  EXPECT_EQ(rational_string(Rational(-3, 6)), "-1/2");
}

TEST(JsonIo, RoundTrip) {
  for (const char* s : {R"({"family":"exp","lambda":2.5,"poly":[1,1]})", R"({"family":"power","alpha":1.5,"poly":[1]})",
                        R"({"family":"spline","m":"4","coeffs":["1","4"]})",
                        R"({"family":"table","grid":[0,0.5,1,1.5],"values":[1,0.25,0.1,0],"order":3})",
                        R"({"family":"zero"})"}) {
    auto p = parse(s);
    auto j = to_json(p);
    EXPECT_EQ(j, Json::parse(s)) << s;
    auto q = profile_from_json(j);
    for (double t : {0.0, 0.1, 0.7, 1.3}) EXPECT_EQ(p(t), q(t));
  }
}

TEST(JsonIo, Errors) {
  for (const char* s : {R"({"lambda":1})", R"({"family":"exp"})", R"({"family":"exp","lambda":-1})",
                        R"({"family":"power","alpha":0})", R"({"family":"blob"})", R"({"family":"spline","m":"x/y","coeffs":[]})",
                        R"({"family":"spline","r":1,"d":2})", R"({"family":"table","grid":[0,0],"values":[1,0]})",
                        R"({"family":"table","grid":[0,1],"values":[1,0],"order":2})", R"([1,2])"})
    EXPECT_THROW(parse(s), domain_error) << s;
  EXPECT_THROW(parse_json_argument("{oops", [](const std::string&) { return std::string(); }), domain_error);
  auto j = parse_json_argument("@prof.json", [](const std::string& path) {
    EXPECT_EQ(path, "prof.json");
    return std::string(R"({"family":"zero"})");
  });
  EXPECT_EQ(j["family"], "zero");
}

TEST(JsonIo, ReportsAreDeterministic) {
  auto p = Profile::exponential(1);
  auto a = run_report("check-pd", to_json(p), to_json(check_pd_via_f1(p))).dump(2);
  auto b = run_report("check-pd", to_json(p), to_json(check_pd_via_f1(p))).dump(2);
  EXPECT_EQ(a, b);
  auto j = Json::parse(a);
  EXPECT_EQ(j["schema"], kSchema);
  EXPECT_EQ(j["payload"]["verdict"], "strictly_positive");
  EXPECT_TRUE(j["payload"]["witness"].is_null());
  // Doubles survive the text round trip exactly.
  double v = j["payload"]["min_margin"].get<double>();
  EXPECT_EQ(v, check_pd_via_f1(p).min_margin);
}

TEST(JsonIo, NonFiniteBecomesNull) {
  ConvergenceReport r;
  auto j = Json::parse(to_json(r).dump());
  EXPECT_TRUE(j["value_if_convergent"].is_null());
}
