#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "sharpconst/report.hpp"
#include "sharpconst/sl_eigen.hpp"
#include "sharpconst/verifier.hpp"

using namespace sharpconst;
using nlohmann::json;

namespace {

report::Report sample() {
  report::Report r("verify");
  r.input("case", "INEQ-X1");
  r.input("tol", 1e-8);
  r.constant("qf", 1 / (4 * std::numbers::pi), verify::Provenance::closed_form, {{"n", 2}});
  sl::EigenResult e;
  e.lambda = 0.156;
  e.error_estimate = 1e-5;
  e.mesh_levels = {{100, 0.157}, {200, 0.1562}};
  r.eigen("corollary2", e, 1e-4);
  verify::RatioReport rr;
  rr.case_id = "INEQ-X1";
  rr.field_id = "gaussian_bump(w=1)";
  rr.lhs = 0.5;
  rr.rhs = 1.0;
  rr.ratio = 0.5;
  rr.pass = true;
  rr.extras = {{"k", 2.0}, {"bad", std::numeric_limits<double>::infinity()}};
  r.ratio(rr);
  r.timing("total", 0.25);
  return r;
}

}  // namespace

TEST_CASE("json layout") {
  const auto j = json::parse(sample().json());
  CHECK(j["schema_version"] == report::kSchemaVersion);
  CHECK(j["command"] == "verify");
  CHECK(j["inputs"]["case"] == "INEQ-X1");
  CHECK(j["pass"] == true);
  CHECK(j["constants"][0]["provenance"] == "closed_form");
  CHECK(j["eigen"][0]["levels"].size() == 2);
  CHECK(j["eigen"][0]["levels"][1]["elements"] == 200);
  CHECK(j["ratios"][0]["field"] == "gaussian_bump(w=1)");
  CHECK(j["ratios"][0]["extras"]["bad"] == "inf");
  CHECK(j["run_metadata"]["timings_s"]["total"] == 0.25);
  CHECK(j["run_metadata"]["timestamp"].get<std::string>().back() == 'Z');
}

TEST_CASE("without metadata the output is reproducible") {
  const std::string a = sample().json(false), b = sample().json(false);
  CHECK(a == b);
  CHECK_FALSE(json::parse(a).contains("run_metadata"));
}

TEST_CASE("a failing ratio or error fails the report") {
  auto r = sample();
  verify::RatioReport bad;
  bad.case_id = "INEQ-1M";
  bad.ratio = 2.0;
  bad.pass = false;
  r.ratio(bad);
  CHECK_FALSE(r.passed());
  report::Report e("eigen");
  e.error("refinement stalled");
  CHECK_FALSE(e.passed());
  CHECK(json::parse(e.json())["errors"][0] == "refinement stalled");
}

TEST_CASE("csv projection") {
  std::istringstream in(sample().csv());
  std::string line;
  std::getline(in, line);
  CHECK(line == "kind,id,field,quantity,value,error,provenance,verdict");
  int rows = 0;
  bool quoted = false;
  while (std::getline(in, line)) {
    ++rows;
    if (line.rfind("ratio,", 0) == 0) {
      CHECK(line.find("\"gaussian_bump(w=1)\"") == std::string::npos);
      CHECK(line.find(",pass") != std::string::npos);
    }
    quoted = quoted || line.find('"') != std::string::npos;
  }
  CHECK(rows == 3);
  CHECK_FALSE(quoted);

  report::Report r("sharpness");
  r.check("capacity", {{"a,b", 1.0}}, true);
  CHECK(r.csv().find("check,capacity,,\"a,b\",1,") != std::string::npos);
}
