// Copyright (c) the localsmith authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "localsmith_cli/commands.hpp"
#include "localsmith_cli/input_doc.hpp"

using namespace localsmith;
using namespace localsmith::cli;

namespace {

InputDocument doc_from(const char* text) { return parse_input_document(Json::parse(text)); }

const char* kShear = R"({
  "field": "rational", "kind": "polynomial", "rows": 2, "cols": 2,
  "coefficients": [ [["0","-1"],["0","0"]], [["1","0"],["0","1"]] ]
})";

}  // namespace

TEST_CASE("input document parsing") {
  InputDocument doc = doc_from(kShear);
  CHECK(doc.rows == 2);
  CHECK(doc.kind == "polynomial");
  MatSeries<Rational> l = materialize<Rational>(doc);
  CHECK(l.is_polynomial());
  CHECK(l.degree() == 1);
  CHECK(l.at(0)(0, 1) == Rational(-1));
}

TEST_CASE("input document rejections") {
  CHECK_THROWS_AS(doc_from("[1,2]"), ParseError);
  CHECK_THROWS_AS(doc_from(R"({"field":"rational","kind":"polynomial","rows":2,"cols":2})"),
                  ParseError);  // no coefficients
  CHECK_THROWS_AS(
      doc_from(
          R"({"field":"rational","kind":"polynomial","rows":2,"cols":2,"coefficients":[[["1"]]]})"),
      ParseError);  // ragged
  CHECK_THROWS_AS(
      doc_from(
          R"({"field":"what","kind":"polynomial","rows":1,"cols":1,"coefficients":[[["1"]]]})"),
      ParseError);
  InputDocument bad_entry = doc_from(
      R"({"field":"rational","kind":"polynomial","rows":1,"cols":1,"coefficients":[[["x"]]]})");
  CHECK_THROWS_AS(materialize<Rational>(bad_entry), ParseError);
}

TEST_CASE("jet documents honor the declared order") {
  InputDocument doc = doc_from(R"({
    "field": "rational", "kind": "jet", "rows": 1, "cols": 1, "order": 4,
    "coefficients": [ [["1"]], [["1"]] ]
  })");
  MatSeries<Rational> l = materialize<Rational>(doc);
  CHECK(!l.is_polynomial());
  CHECK(l.order() == 4);
  CHECK(l.at(3).is_zero());  // padded with declared zeros
}

TEST_CASE("number entries and float materialization") {
  InputDocument doc = doc_from(R"({
    "field": "float", "kind": "polynomial", "rows": 1, "cols": 2,
    "coefficients": [ [[1, 0.5]] ]
  })");
  MatSeries<double> l = materialize<double>(doc);
  CHECK(l.at(0)(0, 0) == 1.0);
  CHECK(l.at(0)(0, 1) == 0.5);
}

TEST_CASE("run_typed produces deterministic structured reports") {
  InputDocument doc = doc_from(kShear);
  CommandOptions opts;
  opts.command = "diagonalize";
  opts.check = true;
  Json a, b;
  CHECK(run_typed<Rational>(doc, opts, a) == kExitOk);
  CHECK(run_typed<Rational>(doc, opts, b) == kExitOk);
  CHECK(a.dump() == b.dump());
  CHECK(a["stabilization"]["k"] == 2);
  CHECK(a["transforms"]["dual_path_checked"] == true);
  for (const Json& c : a["verification"]) CHECK(c["pass"] == true);
}

TEST_CASE("the analyze command on a curve input document") {
  InputDocument doc = doc_from(R"({
    "field": "rational", "kind": "polynomial", "rows": 1, "cols": 2,
    "coefficients": [ [["1","0"]], [["0","1"]] ],
    "curve": [ ["0","1"], ["-1","0"] ]
  })");
  CommandOptions opts;
  opts.command = "artin";
  Json out;
  CHECK(run_typed<Rational>(doc, opts, out) == kExitOk);
  REQUIRE(out.contains("approximations"));
  CHECK(out["approximations"][0]["source"] == "input-curve");
  CHECK(out["approximations"][0]["residual_order"] == "exact-through-order");
}

TEST_CASE("recentering through options") {
  InputDocument doc = doc_from(kShear);
  CommandOptions opts;
  opts.command = "analyze";
  opts.at = std::string("1");
  Json out;
  CHECK(run_typed<Rational>(doc, opts, out) == kExitOk);
  CHECK(out["stabilization"]["k"] == 0);  // the family is invertible at 1
}

TEST_CASE("text rendering is stable and compact for matrices") {
  Json j;
  j["m"] = Json::array({Json::array({"1", "0"}), Json::array({"0", "1"})});
  std::ostringstream os;
  render_text(j, os);
  CHECK(os.str() == "m: [1 0; 0 1]\n");
}
