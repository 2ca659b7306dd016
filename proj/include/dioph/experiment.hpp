#pragma once

// Batch runner: parses an experiment config, runs its tasks on a worker pool and
// assembles the report in config order.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dioph/report.hpp"

namespace dioph {

enum class TaskKind {
  Estimate,
  EstimateUniform,
  Validate,
  WitnessUp,
  WitnessDown,
  Truncation,
  SelftestAlgebra,
  SelftestMinima,
};

const char* to_string(TaskKind k);

enum class VectorSource { Given, Expected, Estimated };

struct TaskSpec {
  TaskKind kind = TaskKind::Estimate;
  int d = 0;
  bool top = false;      // ESTIMATE-UNIFORM: omega_hat_top instead of omega_hat_0
  bool uniform = false;  // WITNESS-UP/DOWN: also run the uniform variant
  bool designed = true;  // ESTIMATE on a lacunary entry: merge truncation witnesses
  VectorSource source = VectorSource::Expected;
  std::optional<ExponentVector> vector;  // VALIDATE with source Given
  int per_case = 5;                      // SELFTEST-ALGEBRA
  int hodge_samples = 200;               // SELFTEST-ALGEBRA
  int bodies = 100;                      // SELFTEST-MINIMA
  int mahler_bodies = 12;                // SELFTEST-MINIMA, each gives n instances
  BigRational kappa_bound = 100;         // SELFTEST-MINIMA
};

struct EntryConfig {
  CatalogEntry entry;
  BigRational height = 1000;
  std::optional<BigRational> search_height;  // exhaustive height when smaller than height
  SearchMode mode = SearchMode::Exhaustive;
  int precision_cap = kDefaultPrecisionCap;
  long node_budget = kDefaultEnumerationBudget;
  BigRational tolerance = BigRational(3, 20);
  std::vector<TaskSpec> tasks;

  BigRational exhaustive_height() const { return search_height ? std::min(*search_height, height) : height; }
};

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int workers = 1;
  bool timings = false;
  std::string report_path = "report.json";
  std::string csv_dir;  // empty: no CSV files
  std::vector<EntryConfig> entries;
  std::vector<TaskSpec> tasks;  // entry-free tasks (self-tests)
};

/// Parses the JSON config; throws ConfigError with a readable message.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::string& path);

struct ReportBundle {
  Json report;
  std::map<std::string, std::string> csv;  // file name -> contents
  int exit_code = 0;
};

enum ExitCode { kExitOk = 0, kExitViolated = 1, kExitConfig = 2, kExitPrecision = 3, kExitBudget = 4 };

ReportBundle run(const ExperimentConfig& config);

/// Writes the report and CSV files; returns false on an I/O failure.
bool write_bundle(const ReportBundle& bundle, const ExperimentConfig& config, std::string* error = nullptr);

/// The built-in suite: self-tests plus estimates, validations and witnesses on the catalog.
ExperimentConfig full_suite_config(std::uint64_t seed);

}  // namespace dioph
