#include "relhdmr/mcs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>

#include "relhdmr/error.hpp"
#include "relhdmr/parallel.hpp"
#include "relhdmr/rng.hpp"

namespace relhdmr {

void McsConfig::validate() const {
  if (n < 1) throw ConfigError("must be >= 1", "mcs.n");
  if (batch < 1) throw ConfigError("must be >= 1", "mcs.batch");
  if (!(max_cov > 0.0)) throw ConfigError("must be > 0", "mcs.max_cov");
  if (auto_grow && cap < n) throw ConfigError("must be >= mcs.n", "mcs.cap");
}

std::optional<double> pf_cov(double pf, std::size_t n_mc) {
  if (!(pf > 0.0) || n_mc == 0) return std::nullopt;
  return std::sqrt((1.0 - pf) / (static_cast<double>(n_mc) * pf));
}

namespace {

// Counts failures over samples [begin, end). Returns the count; on a
// non-finite prediction records the lowest offending sample instead.
struct RangeCounter {
  const UPredictor& predictor;
  std::size_t dim;
  std::uint64_t seed;
  std::size_t batch;
  std::size_t threads;

  std::size_t count(std::size_t begin, std::size_t end) const {
    const std::size_t n_batches = (end - begin + batch - 1) / batch;
    std::vector<std::size_t> fails(n_batches, 0);
    std::size_t bad_sample = std::numeric_limits<std::size_t>::max();
    std::vector<double> bad_u;
    std::mutex bad_mutex;
    parallel_for(
        n_batches,
        [&](std::size_t b) {
          const std::size_t lo = begin + b * batch;
          const std::size_t hi = std::min(end, lo + batch);
          std::vector<double> u(dim);
          std::size_t local = 0;
          for (std::size_t k = lo; k < hi; ++k) {
            standard_normal_sample(seed, k, u);
            const double g = predictor(u);
            if (!std::isfinite(g)) {
              std::lock_guard lock(bad_mutex);
              if (k < bad_sample) {
                bad_sample = k;
                bad_u = u;
              }
              return;
            }
            if (g < 0.0) ++local;
          }
          fails[b] = local;
        },
        threads);
    if (bad_sample != std::numeric_limits<std::size_t>::max()) {
      std::ostringstream msg;
      msg << "predictor returned a non-finite value at Monte Carlo sample " << bad_sample << ", u = (";
      for (std::size_t j = 0; j < bad_u.size(); ++j) msg << (j ? ", " : "") << bad_u[j];
      msg << ")";
      throw EvaluationError(msg.str());
    }
    std::size_t total = 0;
    for (std::size_t f : fails) total += f;
    return total;
  }
};

}  // namespace

McsResult estimate_pf(const UPredictor& predictor, std::size_t dim, std::uint64_t seed, const McsConfig& config) {
  config.validate();
  if (dim == 0) throw ConfigError("Monte Carlo dimension must be >= 1");
  const RangeCounter counter{predictor, dim, seed, config.batch, config.threads};

  McsResult r;
  r.seed = seed;
  r.n_mc = config.n;
  r.n_fail = counter.count(0, config.n);
  r.pf = static_cast<double>(r.n_fail) / static_cast<double>(r.n_mc);
  r.cov = pf_cov(r.pf, r.n_mc);
  while (config.auto_grow && !r.sufficient(config.max_cov) && r.n_mc < config.cap) {
    const std::size_t next = std::min(config.cap, 2 * r.n_mc);
    r.n_fail += counter.count(r.n_mc, next);
    r.n_mc = next;
    r.pf = static_cast<double>(r.n_fail) / static_cast<double>(r.n_mc);
    r.cov = pf_cov(r.pf, r.n_mc);
  }
  return r;
}

RunAggregates aggregate_runs(std::span<const RunRow> rows, std::span<const double> refs) {
  if (rows.empty()) throw ConfigError("aggregate_runs needs at least one run");
  if (!refs.empty() && refs.size() != rows.size())
    throw ConfigError("aggregate_runs: " + std::to_string(refs.size()) + " references for " +
                      std::to_string(rows.size()) + " runs");
  const double n = static_cast<double>(rows.size());
  RunAggregates a;
  a.runs = rows.size();
  double cov_sum = 0.0;
  std::size_t cov_count = 0;
  for (const auto& row : rows) {
    a.pf_mean += row.pf;
    a.n_call_mean += static_cast<double>(row.n_call());
    a.n_call_doe_mean += static_cast<double>(row.n_call_doe);
    a.n_call_probe_mean += static_cast<double>(row.n_call_probe);
    if (row.cov) {
      cov_sum += *row.cov;
      ++cov_count;
    }
  }
  a.pf_mean /= n;
  a.n_call_mean /= n;
  a.n_call_doe_mean /= n;
  a.n_call_probe_mean /= n;
  if (cov_count > 0) a.cov_mean = cov_sum / static_cast<double>(cov_count);
  if (!refs.empty()) {
    double abs_sum = 0.0;
    double signed_sum = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (refs[k] == 0.0) throw ConfigError("reference failure probability of run " + std::to_string(k) + " is zero");
      const double rel = (rows[k].pf - refs[k]) / refs[k];
      abs_sum += std::abs(rel);
      signed_sum += rel;
    }
    a.rel_error_pct = 100.0 * abs_sum / n;
    a.rel_error_signed_pct = 100.0 * signed_sum / n;
  }
  return a;
}

}  // namespace relhdmr
