#include "doctest.h"

#include "qblocks/error.hpp"
#include "qblocks/mpreal.hpp"
#include "qblocks/report.hpp"

using namespace qblocks;

namespace {

VerificationReport sample() {
  VerificationReport r;
  r.command = "verify";
  r.config = {{"algebra", "A1"}, {"seifert", "2/1,3/1,5/1"}, {"level", "5"}};
  r.results = {{"value_re", "-5.1269359805941193078006501580242835773"}, {"count", "300"}};
  CheckResult c;
  c.name = "radial_limit";
  c.lhs_source = "series";
  c.rhs_source = "finite-sum";
  c.lhs_re = "1.5";
  c.lhs_im = "-0.25";
  c.rhs_re = "1.5000001";
  c.rhs_im = "-0.25";
  c.abs_error = "1e-7";
  c.tolerance = "1e-06";
  c.pass = true;
  r.checks.push_back(c);
  r.tables["extrapolation"] = {{"t", "value"}, {{"0.1", "1+2i"}, {"0.05", "has,comma"}}};
  SeriesPayload p;
  p.denom = "240";
  p.terms = {{"-532", "1", "1"}, {"-292", "-1", "1"}, {"100000000000000000000000", "3", "7"}};
  p.cutoff = "31/40";
  p.prefactor_exponent = "-89/40";
  r.series = p;
  r.notes = {"a note with \"quotes\""};
  r.status = "pass";
  r.wall_time = "0.5";
  return r;
}

}  // namespace

TEST_CASE("json round trip is lossless") {
  VerificationReport r = sample();
  std::string text = emit_json(r);
  CHECK(parse_report_json(text) == r);
  CHECK(emit_json(parse_report_json(text)) == text);
  r.series.reset();
  r.wall_time.reset();
  CHECK(parse_report_json(emit_json(r)) == r);
  CHECK(emit_json(r).find("wall_time_s") == std::string::npos);
}

TEST_CASE("json keys are sorted and integers that fit are numbers") {
  std::string text = emit_json(sample());
  CHECK(text.find("\"checks\"") < text.find("\"command\""));
  CHECK(text.find("\"command\"") < text.find("\"config\""));
  CHECK(text.find("\"denom\": 240") != std::string::npos);
  CHECK(text.find("\"100000000000000000000000\"") != std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("decimal strings keep every bit of the working precision") {
  for (Precision prec : {64, 128, 192}) {
    Real x = sqrt(Real(2, prec)) / Real(7, prec);
    VerificationReport r;
    r.results["x"] = x.to_decimal();
    VerificationReport back = parse_report_json(emit_json(r));
    CHECK(Real::from_decimal(back.results.at("x"), prec) == x);
  }
}

TEST_CASE("malformed report json is a validation error") {
  CHECK_THROWS_AS(parse_report_json("{"), ValidationError);
  CHECK_THROWS_AS(parse_report_json("{\"version\": 1}"), ValidationError);
}

TEST_CASE("csv quoting and the fixed check columns") {
  VerificationReport r = sample();
  CHECK(emit_csv(r.tables.at("extrapolation")) == "t,value\n0.1,1+2i\n0.05,\"has,comma\"\n");
  std::string checks = emit_csv(checks_table(r));
  CHECK(checks.substr(0, checks.find('\n')) ==
        "name,lhs_source,lhs_re,lhs_im,rhs_source,rhs_re,rhs_im,abs_error,tolerance,pass");
  CHECK(checks.find("radial_limit,series,1.5,-0.25,finite-sum,1.5000001,-0.25,1e-7,1e-06,true") !=
        std::string::npos);
}

TEST_CASE("text output names every check") {
  std::string t = emit_text(sample());
  CHECK(t.find("check radial_limit: PASS") != std::string::npos);
  CHECK(t.find("status: pass") != std::string::npos);
}
