#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rigmon/cli.hpp"

using namespace rigmon;
using namespace rigmon::cli;
using nlohmann::json;

namespace {

json cusp_document() {
  return json::parse(R"J({"n":3,"k":2,"l":1,"shaft":false,"variant":"curve","epsilon":"1",
                         "lambdas":["-1"],"xis":["zeta(3)","zeta(3)^2"]})J");
}

JobResult job(const std::string& command, json doc, FieldRequest field = {}) {
  return run_job(JobSpec{command, std::move(doc), std::move(field)});
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& text) {
    path = std::filesystem::temp_directory_path() /
           ("rigmon_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + ".json");
    std::ofstream(path) << text;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

int invoke(std::vector<std::string> args, std::string& out_text) {
  std::vector<const char*> argv{"rigmon"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  out_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("field resolution: flags, document, automatic conductor") {
  json doc = cusp_document();
  CHECK(resolve_field(doc, {}).conductor() == 3);
  doc["xis"] = {"zeta(12)", "-1"};
  doc["lambdas"] = {"zeta(8)^3"};
  CHECK(resolve_field(doc, {}).conductor() == 24);
  doc["field"] = {{"mode", "exact"}, {"conductor", 48}};
  CHECK(resolve_field(doc, {}).conductor() == 48);
  FieldRequest flag;
  flag.conductor = "auto";
  CHECK(resolve_field(doc, flag).conductor() == 24);
  flag.conductor = "0";
  CHECK_THROWS_AS(resolve_field(doc, flag), UsageError);
  FieldRequest approx;
  approx.precision = 96;
  ScalarField f = resolve_field(doc, approx);
  CHECK(f.mode() == FieldMode::approx);
  CHECK(f.precision() == 96);
  CHECK(resolve_field(json::parse(R"J({"epsilon":"1","lambdas":["2/3"]})J"), {}).conductor() == 1);
}

TEST_CASE("matrix JSON round trip") {
  ScalarField f = ScalarField::exact(5);
  Matrix m = Matrix::parse(f, {{"zeta(5)", "1/2"}, {"-zeta(5)^4 + 3", "0"}});
  CHECK(matrix_from_json(matrix_to_json(m), f) == m);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"J([["1","2"],["3"]])J"), f), UsageError);
  CHECK_THROWS_AS(matrix_from_json(json::parse(R"J([["1","zeta("]])J"), f), UsageError);
}

TEST_CASE("construct on the cusp succeeds and its report verifies") {
  JobResult built = job("construct", cusp_document());
  REQUIRE(built.exit_code == exit_ok);
  CHECK(built.report["status"] == "ok");
  CHECK(built.report["rigidity"]["index"] == 2);
  CHECK(built.report["certificate"]["verdict"] == true);
  CHECK(built.report["burnside"] == true);
  CHECK(built.report["alpha_infinity"]["ok"] == true);
  CHECK(built.report["matrices"]["omega0"] == json::parse(R"J([["0","1"],["1","0"]])J"));

  JobResult verified = job("verify", built.report);
  CHECK(verified.exit_code == exit_ok);
  JobResult classified = job("classify", built.report);
  CHECK(classified.exit_code == exit_ok);
  CHECK(classified.report["verdict"] == "rigid");
}

TEST_CASE("construct reports validation failures with exit code 2") {
  json doc = cusp_document();
  doc["lambdas"] = {"1"};
  JobResult r = job("construct", doc);
  CHECK(r.exit_code == exit_validation);
  bool named = false;
  for (const auto& c : r.report["validation"])
    if (c["id"] == "lambda_not_one") named = c["passed"] == false;
  CHECK(named);
}

TEST_CASE("construct with the shaft equal to an exponent fails validation") {
  json doc = json::parse(R"J({"n":3,"k":2,"l":1,"shaft":true,"epsilon":"1","b":"zeta(3)",
                             "lambdas":["-1"],"xis":["zeta(3)","zeta(3)^2","1"]})J");
  JobResult r = job("construct", doc);
  CHECK(r.exit_code == exit_validation);
}

TEST_CASE("malformed documents exit with code 1") {
  CHECK(job("construct", json::parse(R"J({"n":3})J")).exit_code == exit_usage);
  json doc = cusp_document();
  doc["xis"] = {"zeta(3", "1"};
  CHECK(job("construct", doc).exit_code == exit_usage);
  doc = cusp_document();
  doc["shaft"] = "no";
  CHECK(job("construct", doc).exit_code == exit_usage);
  CHECK(job("frobnicate", cusp_document()).exit_code == exit_usage);
  CHECK(job("verify", cusp_document()).exit_code == exit_usage);  // no matrices
}

TEST_CASE("verify rejects a tampered representation with exit code 3") {
  JobResult built = job("construct", cusp_document());
  REQUIRE(built.exit_code == exit_ok);
  json tampered = built.report;
  tampered["matrices"]["delta"][0][0] = "2";
  JobResult r = job("verify", tampered);
  CHECK(r.exit_code == exit_certification);
  bool delta_failed = false;
  for (const auto& c : r.report["verification"])
    if (c["id"] == "delta_scalar") delta_failed = c["passed"] == false;
  CHECK(delta_failed);

  json other = built.report;
  other["lambdas"] = {"zeta(3)"};
  CHECK(job("verify", other).exit_code == exit_certification);
}

TEST_CASE("classify completes missing generators and flags reducible input") {
  json doc = json::parse(R"J({"n":3,"k":2,"l":1,"shaft":false,"epsilon":"1",
    "matrices":{"omega0":[["0","1"],["1","0"]],"alpha":[[["1","1"],["0","-1"]]]}})J");
  JobResult r = job("classify", doc);
  CHECK(r.exit_code == exit_ok);
  CHECK(r.report["verdict"] == "rigid");

  json reducible = json::parse(R"J({"n":3,"k":2,"l":1,"shaft":false,"epsilon":"1",
    "matrices":{"omega0":[["1","0"],["0","1"]],"alpha":[[["-1","0"],["0","1"]]]}})J");
  JobResult red = job("classify", reducible);
  CHECK(red.exit_code == exit_certification);
  CHECK(red.report["verdict"] != "rigid");
}

TEST_CASE("example reproduces omega_0 and reports the printed X mismatch") {
  JobResult r = job("example", json::object());
  CHECK(r.report["golden"]["omega0"]["match"] == true);
  CHECK(r.report["diagnostics"]["built_equals_golden_with_inverted_xi"] == true);
  CHECK(r.report["certificate"]["verdict"] == true);
  CHECK(r.report["rigidity"]["index"] == 2);
  CHECK(r.exit_code == (r.report["golden_match"] == true ? exit_ok : exit_certification));
}

TEST_CASE("command line: input file, json format, sweep and bad options") {
  TempFile doc(cusp_document().dump());
  std::string text;
  CHECK(invoke({"construct", "--input", doc.path.string(), "--format", "json"}, text) == exit_ok);
  json report = json::parse(text);
  CHECK(report["exit_code"] == 0);

  TempFile constructed(report.dump());
  CHECK(invoke({"verify", "--input", constructed.path.string()}, text) == exit_ok);
  CHECK(text.find("verify: ok") != std::string::npos);

  json bad = cusp_document();
  bad["lambdas"] = {"1"};
  TempFile sweep(cusp_document().dump() + "\n" + bad.dump() + "\n");
  CHECK(invoke({"construct", "--sweep", sweep.path.string()}, text) == exit_validation);
  CHECK(text.find("job 1: ok") != std::string::npos);
  CHECK(text.find("job 2: validation_failed") != std::string::npos);

  CHECK(invoke({"construct", "--format", "xml"}, text) == exit_usage);
  CHECK(invoke({}, text) == exit_usage);
  CHECK(invoke({"construct", "--input", "/nonexistent/doc.json"}, text) == exit_usage);
}

TEST_CASE("approximate mode agrees with the exact cusp construction") {
  FieldRequest approx;
  approx.precision = 128;
  JobResult r = job("construct", cusp_document(), approx);
  CHECK(r.exit_code == exit_ok);
  CHECK(r.report["field"]["mode"] == "approx");
  CHECK(r.report["rigidity"]["index"] == 2);
}
