#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "relhdmr/error.hpp"
#include "relhdmr/examples.hpp"
#include "relhdmr/report.hpp"

namespace {

using relhdmr::BatchReport;
using relhdmr::ProblemDefinition;

struct Common {
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string trace_dir;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--runs", c.runs, "Number of independent runs")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "Base seed; run k uses seed + k");
  cmd->add_option("--out", c.out, "Write the JSON report here (default: stdout for run, none for benchmark)");
  cmd->add_option("--trace-dir", c.trace_dir, "Write doe_growth.csv and pf_trace.csv into this directory");
}

BatchReport execute(ProblemDefinition problem, const Common& c) {
  if (c.runs) problem.runs = *c.runs;
  if (c.seed) problem.base_seed = *c.seed;
  problem.validate();
  const auto report = relhdmr::run_batch(problem, [](std::size_t k, const relhdmr::RunRecord& r) {
    std::fprintf(stderr, "run %zu: seed %llu, pf %.6g, N_call %zu\n", k, static_cast<unsigned long long>(r.seed),
                 r.mcs.pf, r.n_call());
    for (const auto& w : r.warnings) std::fprintf(stderr, "  warning: %s\n", w.c_str());
  });
  if (!c.trace_dir.empty()) relhdmr::write_traces(report, c.trace_dir);
  return report;
}

void write_report(const BatchReport& report, const std::string& path, bool to_stdout) {
  const std::string text = relhdmr::report_json(report, relhdmr::utc_timestamp()).dump(2) + "\n";
  if (path.empty()) {
    if (to_stdout) std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out || !(out << text)) throw relhdmr::Error("cannot write report to '" + path + "'");
}

std::string opt(const std::optional<double>& v, const char* format) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, format, *v);
  return buf;
}

void print_table(const std::string& example, std::size_t nd, const BatchReport& report) {
  const auto& a = report.aggregates;
  const auto published = relhdmr::published_row(example, nd);
  std::printf("%-10s %5s %5s %12s %12s %8s %8s %12s\n", "source", "nd", "runs", "N_call", "pf", "eps%", "V%",
              "ref_pf");
  const std::optional<double> ref = report.refs.empty() ? std::nullopt : std::optional<double>(report.refs[0]);
  const std::optional<double> cov_pct = a.cov_mean ? std::optional<double>(*a.cov_mean * 100.0) : std::nullopt;
  std::printf("%-10s %5zu %5zu %12.1f %12.4e %8s %8s %12s\n", "this", nd, a.runs, a.n_call_mean, a.pf_mean,
              opt(a.rel_error_pct, "%.2f").c_str(), opt(cov_pct, "%.2f").c_str(), opt(ref, "%.4e").c_str());
  if (!published) {
    std::printf("%-10s (no published row for this dimension)\n", "published");
    return;
  }
  std::string calls = opt(published->n_call, "%.1f");
  if (published->n_call_coupling) calls += "+" + opt(published->n_call_coupling, "%.0f");
  std::printf("%-10s %5zu %5s %12s %12.4e %8s %8s %12s\n", "published", nd, "", calls.c_str(), published->pf,
              opt(published->rel_error_pct, "%.2f").c_str(), opt(published->cov_pct, "%.2f").c_str(),
              opt(published->mcs_pf, "%.4e").c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active-learning Kriging-HDMR reliability analysis"};
  app.set_version_flag("--version", std::string(RELHDMR_VERSION));
  app.require_subcommand(1);

  Common run_opts;
  std::string config;
  auto* run = app.add_subcommand("run", "Analyse a problem described by a JSON config");
  run->add_option("--config", config, "Problem config file")->required();
  add_common(run, run_opts);

  Common bench_opts;
  std::string example;
  std::size_t nd = 0;
  auto* bench = app.add_subcommand("benchmark", "Run a bundled example and compare with the published row");
  bench->add_option("--example", example, "example1, linear, coupled, truss10 or truss30")->required();
  bench->add_option("--nd", nd, "Dimension (linear: any, coupled: 20 or 60)");
  add_common(bench, bench_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*run) {
      const auto report = execute(ProblemDefinition::from_file(config), run_opts);
      write_report(report, run_opts.out, true);
      const auto& a = report.aggregates;
      std::fprintf(stderr, "mean pf %.6g, mean N_call %.1f, eps %s%%\n", a.pf_mean, a.n_call_mean,
                   opt(a.rel_error_pct, "%.3f").c_str());
    } else {
      const std::size_t dim = nd ? nd : relhdmr::default_dimension(example);
      auto problem = ProblemDefinition::from_json(relhdmr::example_config(example, nd), RELHDMR_DATA_DIR);
      if (!bench_opts.runs) bench_opts.runs = 10;
      const auto report = execute(std::move(problem), bench_opts);
      write_report(report, bench_opts.out, false);
      print_table(example, dim, report);
    }
  } catch (const relhdmr::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
