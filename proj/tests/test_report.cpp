// Copyright 2026 The serre-lab Authors
//
// Licensed under the Apache License, Version 2.0 (see
// LICENSE or https://www.apache.org/licenses/LICENSE-2.0).
// This file may not be copied, modified, or distributed
// except according to those terms.

#include <doctest.h>

#include <cmath>
#include <sstream>

#include "serre/cli.hpp"
#include "serre/errors.hpp"
#include "serre/report.hpp"

using namespace serre;

namespace {

int run(const std::vector<std::string>& args, std::string& out, std::string& err) {
  std::ostringstream o, e;
  int rc = runCli(args, o, e);
  out = o.str();
  err = e.str();
  return rc;
}

}  // namespace

TEST_CASE("real formatting") {
  CHECK(formatReal(0.5) == "0.5");
  CHECK(formatReal(1.0 / 3) == "0.333333333333");
  CHECK(formatReal(INFINITY) == "inf");
  CHECK(formatReal(-INFINITY) == "-inf");
  CHECK(formatReal(NAN) == "nan");
}

TEST_CASE("json emission is sorted and stable") {
  Json a;
  a["zeta"] = 1;
  a["alpha"] = {{"y", 2.5}, {"x", "s"}};
  a["mid"] = Json::array({1, 2});
  const std::string s = emitJson(a);
  CHECK(s == emitJson(a));
  CHECK(s.back() == '\n');
  CHECK(s.find("alpha") < s.find("mid"));
  CHECK(s.find("mid") < s.find("zeta"));
  CHECK(Json::parse(s) == a);
}

TEST_CASE("csv quoting round trip") {
  Table t{{"a", "b,c", "q"}, {{"1", "x,y", "say \"hi\""}, {"", "line\nbreak", "z"}}};
  auto s = emitCsv(t);
  auto u = parseCsv(s);
  CHECK(u.columns == t.columns);
  CHECK(u.rows == t.rows);
  CHECK_THROWS_AS(parseCsv("a,b\n1\n"), ParseError);
  Table empty{{"x"}, {}};
  CHECK(emitCsv(empty) == "x\n");
}

TEST_CASE("empty reports keep their schema") {
  Corpus corpus;
  Family fam;
  PairStatistics st;
  auto r = pairsReport(fam, st);
  auto js = reportEmit(r, ReportFormat::json);
  auto doc = Json::parse(js);
  CHECK(doc.is_object());
  CHECK(doc.contains("pairs"));
  CHECK(doc["pairs"].is_array());
  auto csv = reportEmit(r, ReportFormat::csv);
  auto t = parseCsv(csv);
  CHECK(!t.columns.empty());
  CHECK(t.rows.empty());
  auto f = reportEmit(familyReport(corpus, fam), ReportFormat::csv);
  CHECK(parseCsv(f).rows.empty());
}

TEST_CASE("census csv round trip") {
  auto c = cmCensus(std::vector<Integer>{Integer(100), Integer(1000)});
  auto text = reportEmit(censusReport(c), ReportFormat::csv);
  auto back = parseCensusCsv(text);
  REQUIRE(back.rows.size() == c.rows.size());
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    CHECK(back.rows[i].ceiling == c.rows[i].ceiling);
    CHECK(back.rows[i].count == c.rows[i].count);
    CHECK(back.rows[i].perDiscriminant == c.rows[i].perDiscriminant);
  }
  CHECK(back.discriminants == c.discriminants);
  CHECK(back.exponent == doctest::Approx(c.exponent).epsilon(1e-10));
  CHECK(reportEmit(censusReport(back), ReportFormat::csv) == text);
}

TEST_CASE("report determinism across thread counts") {
  std::string o1, o2, e;
  setenv("SERRE_LAB_THREADS", "1", 1);
  REQUIRE(run({"ap", "[0,0,1,-1,0]", "-X", "300"}, o1, e) == kExitOk);
  setenv("SERRE_LAB_THREADS", "4", 1);
  REQUIRE(run({"ap", "[0,0,1,-1,0]", "-X", "300"}, o2, e) == kExitOk);
  CHECK(o1 == o2);
  REQUIRE(run({"cm-census", "-N", "2000", "--format", "csv"}, o1, e) == kExitOk);
  setenv("SERRE_LAB_THREADS", "1", 1);
  REQUIRE(run({"cm-census", "-N", "2000", "--format", "csv"}, o2, e) == kExitOk);
  CHECK(o1 == o2);
  unsetenv("SERRE_LAB_THREADS");
}

TEST_CASE("cli exit codes and parsing") {
  std::string out, err;
  CHECK(run({"cdelta", "5/6"}, out, err) == kExitOk);
  auto doc = Json::parse(out);
  CHECK(doc.dump().find("5558") != std::string::npos);
  CHECK(run({"cdelta", "1/2"}, out, err) == kExitRejects);
  CHECK(err.find("error") != std::string::npos);
  CHECK(run({"tate", "[0,0,1,-1,0]", "-p", "37"}, out, err) == kExitOk);
  CHECK(run({"tate", "[0,0,0,0,0]", "-p", "5"}, out, err) == kExitRejects);
  CHECK(run({"nonsense"}, out, err) != kExitOk);
  CHECK(parseRational("0.8") == Rational(4, 5));
  CHECK(parseRational("-3/6") == Rational(-1, 2));
  CHECK(parseRational("7") == 7);
  CHECK_THROWS(parseRational("x/2"));
}
