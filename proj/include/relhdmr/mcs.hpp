#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace relhdmr {

struct McsConfig {
  std::size_t n = 1'000'000;
  std::size_t batch = 100'000;
  /// Population is deemed sufficient when cov < max_cov.
  double max_cov = 0.05;
  /// Double the population (up to `cap`) while it is insufficient.
  bool auto_grow = false;
  std::size_t cap = 100'000'000;
  /// Worker count; 0 defers to RELHDMR_THREADS / hardware concurrency.
  std::size_t threads = 0;

  void validate() const;
};

struct McsResult {
  double pf = 0.0;
  std::size_t n_mc = 0;
  std::size_t n_fail = 0;
  /// sqrt((1 - pf) / (n pf)); empty when pf == 0.
  std::optional<double> cov;
  std::uint64_t seed = 0;

  bool sufficient(double max_cov) const { return cov && *cov < max_cov; }
};

/// Coefficient of variation of the crude Monte Carlo estimator.
std::optional<double> pf_cov(double pf, std::size_t n_mc);

using UPredictor = std::function<double(std::span<const double> u)>;

/// Crude Monte Carlo on a U-space predictor: pf = #{predictor < 0} / n.
/// Sample k uses standard_normal_sample(seed, k), so the count does not
/// depend on batch size or thread count. Throws EvaluationError on a
/// non-finite prediction (reported for the lowest offending sample index).
McsResult estimate_pf(const UPredictor& predictor, std::size_t dim, std::uint64_t seed, const McsConfig& config);

/// One analysis run as it enters the multi-run statistics.
struct RunRow {
  double pf = 0.0;
  std::optional<double> cov;
  std::size_t n_call_doe = 0;
  std::size_t n_call_probe = 0;

  std::size_t n_call() const noexcept { return n_call_doe + n_call_probe; }
};

struct RunAggregates {
  std::size_t runs = 0;
  double pf_mean = 0.0;
  /// Mean of |pf - ref| / ref, in percent. Present when references are given.
  std::optional<double> rel_error_pct;
  /// Mean of (pf - ref) / ref, in percent.
  std::optional<double> rel_error_signed_pct;
  double n_call_mean = 0.0;
  double n_call_doe_mean = 0.0;
  double n_call_probe_mean = 0.0;
  /// Mean cov over runs where it is defined.
  std::optional<double> cov_mean;
};

/// Multi-run statistics. `refs` is empty or one reference pf per row.
/// Throws ConfigError on a length mismatch or a zero reference.
RunAggregates aggregate_runs(std::span<const RunRow> rows, std::span<const double> refs = {});

}  // namespace relhdmr
