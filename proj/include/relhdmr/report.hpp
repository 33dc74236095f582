#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relhdmr/active_learning.hpp"
#include "relhdmr/mcs.hpp"
#include "relhdmr/problem.hpp"

namespace relhdmr {

inline constexpr int kReportSchemaVersion = 1;

/// Outcome of all runs of a problem.
struct BatchReport {
  ProblemDefinition problem;
  std::vector<RunRecord> runs;
  /// One direct estimate shared by all runs (reference.direct_mcs).
  std::optional<McsResult> shared_reference;
  /// One direct estimate per run (reference.per_run).
  std::vector<McsResult> run_references;
  /// Reference pf per run as used in the aggregates; empty without a reference.
  std::vector<double> refs;
  RunAggregates aggregates;
};

using RunProgress = std::function<void(std::size_t run, const RunRecord&)>;

/// Direct Monte Carlo on the problem's limit state (no surrogate).
McsResult direct_mcs(const ProblemDefinition& problem, std::size_t n, std::uint64_t seed);

/// Executes problem.runs analyses with seeds base_seed + k and aggregates them.
BatchReport run_batch(const ProblemDefinition& problem, const RunProgress& progress = {});

/// Versioned JSON report. `timestamp` is stored verbatim when given.
nlohmann::json report_json(const BatchReport& report, const std::optional<std::string>& timestamp = std::nullopt);

/// JSON for one run (also used by the Python bindings).
nlohmann::json run_json(const RunRecord& record);

/// Writes doe_growth.csv and pf_trace.csv into `dir` (created if missing).
void write_traces(const BatchReport& report, const std::filesystem::path& dir);

/// Current UTC time in ISO 8601.
std::string utc_timestamp();

}  // namespace relhdmr
