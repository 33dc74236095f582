#include "relhdmr/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "relhdmr/error.hpp"

namespace relhdmr {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json mcs_json(const McsResult& r) {
  return {{"pf", r.pf}, {"n_mc", r.n_mc}, {"n_fail", r.n_fail}, {"cov", optional_number(r.cov)}, {"seed", r.seed}};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

McsResult direct_mcs(const ProblemDefinition& problem, std::size_t n, std::uint64_t seed) {
  const auto evaluator = problem.evaluator();
  const auto& dists = problem.variables;
  McsConfig cfg = problem.mcs;
  cfg.n = n;
  cfg.auto_grow = false;
  return estimate_pf(
      [&](std::span<const double> u) {
        thread_local std::vector<double> x;
        x.resize(u.size());
        to_physical(u, dists, x);
        return evaluator(x);
      },
      dists.size(), seed, cfg);
}

BatchReport run_batch(const ProblemDefinition& problem, const RunProgress& progress) {
  problem.validate();
  BatchReport report{problem, {}, std::nullopt, {}, {}, {}};
  const auto evaluator = problem.evaluator();
  const auto options = problem.analysis_options();

  for (std::size_t k = 0; k < problem.runs; ++k) {
    const std::uint64_t seed = problem.run_seed(k);
    auto result = run_analysis(evaluator, problem.variables, problem.al, options, seed);
    if (progress) progress(k, result.record);
    report.runs.push_back(std::move(result.record));
  }

  if (problem.reference) {
    const auto& ref = *problem.reference;
    if (ref.pf) {
      report.refs.assign(problem.runs, *ref.pf);
    } else if (ref.per_run) {
      // Same seed and population as the run's own surrogate estimate.
      for (const auto& run : report.runs) {
        report.run_references.push_back(direct_mcs(problem, ref.mcs_n, analysis_mcs_seed(run.seed)));
        report.refs.push_back(report.run_references.back().pf);
      }
    } else {
      report.shared_reference = direct_mcs(problem, ref.mcs_n, ref.mcs_seed);
      report.refs.assign(problem.runs, report.shared_reference->pf);
    }
    for (double r : report.refs)
      if (r == 0.0) throw EvaluationError("direct Monte Carlo reference observed no failures; enlarge reference.direct_mcs.n");
  }

  std::vector<RunRow> rows;
  for (const auto& run : report.runs) rows.push_back(run.row());
  report.aggregates = aggregate_runs(rows, report.refs);
  return report;
}

json run_json(const RunRecord& r) {
  json couplings = json::array();
  for (const auto& c : r.couplings) couplings.push_back({{"i", c.i + 1}, {"j", c.j + 1}, {"index", c.index}});
  json pairs = json::array();
  for (const auto& [i, j] : r.pairs) pairs.push_back({i + 1, j + 1});
  json subs = json::array();
  for (const auto& s : r.submodels) {
    json vars = json::array();
    for (auto v : s.vars) vars.push_back(v + 1);
    subs.push_back({{"id", s.id}, {"vars", vars}, {"doe_size", s.doe_size}, {"max_sigma", s.max_sigma}});
  }
  return {{"seed", r.seed},
          {"pf", r.mcs.pf},
          {"cov", optional_number(r.mcs.cov)},
          {"n_mc", r.mcs.n_mc},
          {"n_fail", r.mcs.n_fail},
          {"mcs_seed", r.mcs.seed},
          {"n_call", r.n_call()},
          {"n_call_doe", r.n_call_doe},
          {"n_call_probe", r.n_call_probe},
          {"stage1_updates", r.stage1_updates},
          {"stage3_updates", r.stage3_updates},
          {"stage2_skipped", r.stage2_skipped},
          {"stage3_skipped", r.stage3_skipped},
          {"stage3_converged", r.stage3_converged},
          {"truncated", r.truncated},
          {"couplings", couplings},
          {"pairs", pairs},
          {"submodels", subs},
          {"warnings", r.warnings}};
}

json report_json(const BatchReport& report, const std::optional<std::string>& timestamp) {
  json runs = json::array();
  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    json row = run_json(report.runs[k]);
    row["run"] = k;
    row["reference_pf"] = report.refs.empty() ? json(nullptr) : json(report.refs[k]);
    if (!report.run_references.empty()) row["reference"] = mcs_json(report.run_references[k]);
    runs.push_back(std::move(row));
  }
  const auto& a = report.aggregates;
  json out = {{"schema_version", kReportSchemaVersion},
              {"tool_version", RELHDMR_VERSION},
              {"config", report.problem.to_json()},
              {"runs", runs},
              {"aggregates",
               {{"runs", a.runs},
                {"pf_mean", a.pf_mean},
                {"rel_error_pct", optional_number(a.rel_error_pct)},
                {"rel_error_signed_pct", optional_number(a.rel_error_signed_pct)},
                {"n_call_mean", a.n_call_mean},
                {"n_call_doe_mean", a.n_call_doe_mean},
                {"n_call_probe_mean", a.n_call_probe_mean},
                {"cov_mean", optional_number(a.cov_mean)}}}};
  if (report.shared_reference) out["reference"] = mcs_json(*report.shared_reference);
  if (timestamp) out["generated_at"] = *timestamp;
  return out;
}

void write_traces(const BatchReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create trace directory '" + dir.string() + "': " + ec.message());

  std::ofstream doe(dir / "doe_growth.csv");
  std::ofstream pf(dir / "pf_trace.csv");
  if (!doe || !pf) throw Error("cannot write traces into '" + dir.string() + "'");
  doe << "run,stage,submodel,doe_size,n_call,response,point\n";
  pf << "run,n_call,pf\n";
  for (std::size_t k = 0; k < report.runs.size(); ++k) {
    const auto& run = report.runs[k];
    for (const auto& e : run.updates) {
      doe << k << ',' << e.stage << ',' << e.submodel << ',' << e.doe_size << ',' << e.n_call << ','
          << fmt(e.response) << ',';
      for (std::size_t j = 0; j < e.point.size(); ++j) doe << (j ? ";" : "") << fmt(e.point[j]);
      doe << '\n';
    }
    for (const auto& t : run.pf_trace) pf << k << ',' << t.n_call << ',' << fmt(t.pf) << '\n';
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace relhdmr
