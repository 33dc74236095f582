#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "relhdmr/error.hpp"
#include "relhdmr/examples.hpp"
#include "relhdmr/report.hpp"

using namespace relhdmr;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = RELHDMR_SOURCE_DIR;

std::string error_path(const std::string& text) {
  try {
    ProblemDefinition::from_json_text(text, kSource / "data");
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

const char* kMinimal = R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 3}],
                           "lsf": {"builtin": "example1"}})";

json small_problem() {
  json j = json::parse(kMinimal);
  j["mcs"] = {{"n", 20000}};
  j["al"] = {{"alpha", 0.05}, {"n_coupling", 1}};
  j["runs"] = 2;
  j["base_seed"] = 3;
  j["reference"] = {{"direct_mcs", {{"n", 20000}, {"seed", 1}}}};
  j["trace"] = {{"mcs_n", 2000}};
  return j;
}

}  // namespace

TEST_CASE("validation errors carry the key path") {
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1}], "lsf": {"builtin": "nope"}})") ==
        "lsf.builtin");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 4}],
                       "lsf": {"builtin": "example1"}})") == "variables");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 3}],
                       "lsf": {"builtin": "example1"}, "al": {"r_s": 4.0}})") == "al.r_s");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": -1, "count": 3}],
                       "lsf": {"builtin": "example1"}})") == "variables[0]");
  CHECK(error_path(R"({"variables": [{"kind": "weibull", "mean": 1, "std": 1}], "lsf": {"builtin": "linear"}})") ==
        "variables[0].kind");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 3}],
                       "lsf": {"builtin": "example1"}, "al": {"bogus": 1}})") == "al.bogus");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 3}],
                       "lsf": {"builtin": "example1"}, "pso": {"n_swarm": 1}})") == "pso.n_swarm");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1, "count": 3}],
                       "lsf": {"builtin": "example1"}, "al": {"pairs": [[0, 1]]}})") == "al.pairs[0]");
  CHECK(error_path(R"({"variables": [{"kind": "lognormal", "mean": 1, "std": 0.1, "count": 9}],
                       "lsf": {"builtin": "truss", "file": "truss23_10var.json"}})") == "variables");
  CHECK(error_path(R"({"variables": [{"kind": "lognormal", "mean": 1, "std": 0.1, "count": 10}],
                       "lsf": {"builtin": "truss", "file": "nowhere.json"}})") == "lsf.file");
  CHECK(error_path(R"({"variables": [{"kind": "normal", "mean": 0, "std": 1}], "lsf": {"builtin": "coupled"}})") ==
        "lsf.a");
}

TEST_CASE("malformed JSON reports the parse location") {
  try {
    ProblemDefinition::from_json_text("{\n  \"variables\": [\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("malformed JSON") != std::string::npos);
    CHECK(msg.find("line 3") != std::string::npos);
  }
}

TEST_CASE("the configuration echo is the effective configuration") {
  const auto p = ProblemDefinition::from_json(small_problem());
  const json echo = p.to_json();
  const auto again = ProblemDefinition::from_json(echo);
  CHECK(again.to_json() == echo);
  CHECK(echo["al"]["r_s"] == 2.8);
  CHECK(echo["al"]["n_coupling"] == 1);
  CHECK(echo["variables"].size() == 3);
  CHECK(echo["pso"]["n_swarm"] == 50);
}

TEST_CASE("shipped configs agree with the built-in examples") {
  const std::pair<const char*, std::pair<const char*, std::size_t>> files[] = {
      {"example1.json", {"example1", 0}},      {"example2_nd20.json", {"linear", 20}},
      {"example2_nd40.json", {"linear", 40}},  {"example2_nd60.json", {"linear", 60}},
      {"example2_nd100.json", {"linear", 100}}, {"example3_nd20.json", {"coupled", 20}},
      {"example3_nd60.json", {"coupled", 60}}, {"example4_truss10.json", {"truss10", 0}},
      {"example4_truss30.json", {"truss30", 0}}};
  for (const auto& [file, example] : files) {
    CAPTURE(file);
    const auto shipped = ProblemDefinition::from_file(kSource / "configs" / file);
    const auto builtin = ProblemDefinition::from_json(example_config(example.first, example.second), kSource / "data");
    json a = shipped.to_json(), b = builtin.to_json();
    if (a["lsf"].contains("file")) {
      CHECK(std::filesystem::equivalent(kSource / "configs" / a["lsf"]["file"].get<std::string>(),
                                        kSource / "data" / b["lsf"]["file"].get<std::string>()));
      a["lsf"].erase("file");
      b["lsf"].erase("file");
    }
    a.erase("runs");
    b.erase("runs");
    CHECK(a == b);
  }
}

TEST_CASE("batch report") {
  const auto p = ProblemDefinition::from_json(small_problem());
  const auto report = run_batch(p);
  REQUIRE(report.runs.size() == 2);
  CHECK(report.runs[0].seed == 3);
  CHECK(report.runs[1].seed == 4);
  REQUIRE(report.shared_reference.has_value());
  CHECK(report.refs.size() == 2);

  SUBCASE("aggregates recompute from the per-run rows") {
    const json j = report_json(report, "2000-01-01T00:00:00Z");
    std::vector<RunRow> rows;
    std::vector<double> refs;
    for (const auto& r : j["runs"]) {
      std::optional<double> cov;
      if (!r["cov"].is_null()) cov = r["cov"].get<double>();
      rows.push_back({r["pf"].get<double>(), cov, r["n_call_doe"].get<std::size_t>(),
                      r["n_call_probe"].get<std::size_t>()});
      refs.push_back(r["reference_pf"].get<double>());
      CHECK(r["n_call"] == r["n_call_doe"].get<std::size_t>() + r["n_call_probe"].get<std::size_t>());
    }
    const auto a = aggregate_runs(rows, refs);
    CHECK(j["aggregates"]["pf_mean"].get<double>() == a.pf_mean);
    CHECK(j["aggregates"]["n_call_mean"].get<double>() == a.n_call_mean);
    CHECK(j["aggregates"]["rel_error_pct"].get<double>() == *a.rel_error_pct);
    CHECK(j["schema_version"] == kReportSchemaVersion);
    CHECK(j["config"] == p.to_json());
    CHECK(j["generated_at"] == "2000-01-01T00:00:00Z");
  }
  SUBCASE("repeated batches are identical") {
    const auto again = run_batch(p);
    CHECK(report_json(again).dump() == report_json(report).dump());
  }
  SUBCASE("traces") {
    const auto dir = std::filesystem::temp_directory_path() / "relhdmr_trace_test";
    std::filesystem::remove_all(dir);
    write_traces(report, dir);
    std::ifstream doe(dir / "doe_growth.csv"), pf(dir / "pf_trace.csv");
    std::string header;
    std::getline(doe, header);
    CHECK(header == "run,stage,submodel,doe_size,n_call,response,point");
    std::getline(pf, header);
    CHECK(header == "run,n_call,pf");
    std::size_t lines = 0;
    for (std::string line; std::getline(pf, line);) ++lines;
    CHECK(lines == report.runs[0].pf_trace.size() + report.runs[1].pf_trace.size());
    std::filesystem::remove_all(dir);
  }
}

TEST_CASE("per-run references use each run's own Monte Carlo samples") {
  json j = small_problem();
  j["reference"] = {{"direct_mcs", {{"n", 20000}}}, {"per_run", true}};
  const auto report = run_batch(ProblemDefinition::from_json(j));
  REQUIRE(report.run_references.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) CHECK(report.run_references[k].seed == report.runs[k].mcs.seed);
}

TEST_CASE("example names and published rows") {
  CHECK(example_names().size() == 5);
  CHECK_THROWS_AS(example_config("nope"), ConfigError);
  CHECK_THROWS_AS(example_config("coupled", 30), ConfigError);
  CHECK_THROWS_AS(example_config("example1", 4), ConfigError);
  CHECK(published_row("linear", 20)->n_call == 61.6);
  CHECK_FALSE(published_row("linear", 30).has_value());
}
