#include <doctest.h>

#include "dioph/experiment.hpp"

using namespace dioph;

namespace {

Json parse(const char* s) { return Json::parse(s); }

}  // namespace

TEST_CASE("config errors are reported") {
  CHECK_THROWS_AS(parse_config(parse(R"({"entries": [{"name": "x", "builtin": "cubic",
      "tasks": [{"task": "ESTIMATE", "d": 5}]}]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"seeed": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"schema_version": 99})")), ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"entries": [{"name": "x", "builtin": "nope"}]})")), ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"entries": [{"name": "x", "builtin": "cubic",
      "tasks": [{"task": "FLY"}]}]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"entries": [{"name": "x", "kind": "algebraic",
      "coeffs": [-4, 0, 0, 0, 1], "lower": "1", "upper": "2", "powers": [1]}]})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(parse(R"({"entries": [{"name": "x", "builtin": "cubic",
      "tasks": [{"task": "WITNESS-DOWN", "d": 0}]}]})")),
                  ConfigError);
}

TEST_CASE("a valid config parses with defaults applied") {
  ExperimentConfig c = parse_config(parse(R"({"seed": 9, "defaults": {"height": "500", "mode": "REDUCED"},
      "entries": [{"name": "c", "builtin": "cubic", "tasks": [{"task": "ESTIMATE", "d": 1}]},
                  {"name": "r", "kind": "random", "n": 2, "height": 50}],
      "tasks": [{"task": "SELFTEST-ALGEBRA"}]})"));
  CHECK(c.seed == 9);
  REQUIRE(c.entries.size() == 2);
  CHECK(c.entries[0].height == 500);
  CHECK(c.entries[0].mode == SearchMode::Reduced);
  CHECK(c.entries[1].height == 50);
  CHECK(c.entries[0].tasks.size() == 1);
  CHECK(c.tasks.size() == 1);
}

TEST_CASE("a violated asserted vector sets exit code 1") {
  ExperimentConfig c = parse_config(parse(R"({"entries": [{"name": "c", "builtin": "cubic", "tasks": [
      {"task": "VALIDATE", "vector": {"omega": {"0": "1/10", "1": "2"}, "omega_hat_0": "1/2", "omega_hat_top": "2"}}]}]})"));
  ReportBundle b = run(c);
  CHECK(b.exit_code == kExitViolated);
  CHECK(b.report["summary"]["violated"].get<int>() > 0);

  ExperimentConfig ok = parse_config(parse(R"({"entries": [{"name": "c", "builtin": "cubic", "tasks": [
      {"task": "VALIDATE", "source": "expected"}]}]})"));
  CHECK(run(ok).exit_code == kExitOk);
}

TEST_CASE("estimates produce CSV staircases and identical reports") {
  const char* text = R"({"seed": 5, "workers": 2, "csv_dir": "out", "entries": [{"name": "c", "builtin": "cubic",
      "height": 300, "tasks": [{"task": "ESTIMATE", "d": 0}, {"task": "ESTIMATE", "d": 1}, {"task": "VALIDATE",
      "source": "estimated"}]}]})";
  ReportBundle a = run(parse_config(parse(text)));
  ReportBundle b = run(parse_config(parse(text)));
  CHECK(dump(a.report) == dump(b.report));
  CHECK(a.csv == b.csv);
  REQUIRE(a.csv.count("c_0_omega_0.csv") == 1);
  const std::string& csv = a.csv.at("c_0_omega_0.csv");
  CHECK(csv.rfind("log_norm,log_error,instant_exponent\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') >= 4);
  for (const auto& t : a.report["entries"][0]["tasks"]) CHECK(t["status"] == "OK");
  CHECK(a.exit_code == kExitOk);
}

TEST_CASE("budget exhaustion maps to its exit code") {
  ExperimentConfig c = parse_config(parse(R"({"entries": [{"name": "c", "builtin": "cubic", "height": 100000,
      "node_budget": 2, "tasks": [{"task": "ESTIMATE", "d": 0}]}]})"));
  ReportBundle b = run(c);
  CHECK(b.exit_code == kExitBudget);
}
