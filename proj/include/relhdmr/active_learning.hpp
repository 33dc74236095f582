#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relhdmr/hdmr.hpp"
#include "relhdmr/kriging.hpp"
#include "relhdmr/lsf.hpp"
#include "relhdmr/mcs.hpp"
#include "relhdmr/pso.hpp"

namespace relhdmr {

using VarPair = std::pair<std::size_t, std::size_t>;  // 0-based, first < second

struct AlParams {
  /// Target offset from the limit state in the refinement objective.
  double delta = 0.001;
  /// First-order accuracy: stop when max sigma < alpha * (response range).
  double alpha = 0.05;
  double r_s = 2.8;
  double r_c = 3.5;
  double u_lim = 6.0;
  /// Half-spread of the three-point initial DoE of each cut line.
  double du_init = 6.0;
  double du_coupling = 2.0;
  std::size_t n_coupling = 0;
  /// Predetermined pair list; skips the coupling scan when present.
  std::optional<std::vector<VarPair>> pairs;
  std::size_t max_updates = 500;
  std::size_t min_updates = 0;
  /// Run only the first-order stage (requires no pairs).
  bool first_order_only = false;
  /// Refinement stop test |mu|/sigma >= 2 takes mu from the composite at the
  /// selected point; false uses the selected sub-model's own mean.
  bool stop_on_composite_mean = true;
  /// Start each refinement swarm uniformly inside the r_c ball, where the
  /// penalty-free optimum lies, rather than across the whole box.
  bool refine_init_in_ball = true;
  /// Consecutive independent searches that must all meet the stop test.
  std::size_t stop_confirmations = 1;
  ProbeSign probe_sign = ProbeSign::Plus;
  /// Empty means the origin.
  std::vector<double> cut_point;
  /// Template for every sample-selection search; seeds are derived per call.
  pso::SwarmConfig pso;
  /// Swarm size for the one-dimensional first-order searches.
  std::size_t first_order_swarm = 20;
  /// A cut line is not tested for accuracy before its DoE holds this many
  /// samples. Three points cannot identify the correlation length.
  std::size_t min_first_order_doe = 4;
  KrigingFitOptions kriging;

  void validate(std::size_t n_dims) const;
};

struct UpdateEvent {
  int stage;  // 1 or 3
  std::string submodel;
  std::size_t doe_size;
  std::size_t n_call;
  std::vector<double> point;  // full U-space point that was evaluated
  double response;
};

struct CouplingScore {
  std::size_t i;
  std::size_t j;
  double index;
};

struct SubModelSummary {
  std::string id;
  std::vector<std::size_t> vars;
  std::size_t doe_size;
  /// Largest Kriging std on a verification grid over [-u_lim, u_lim]^order.
  double max_sigma;
};

struct PfTracePoint {
  std::size_t n_call;
  double pf;
};

/// Everything observable about one analysis run.
struct RunRecord {
  std::uint64_t seed = 0;
  std::size_t n_call_doe = 0;
  std::size_t n_call_probe = 0;
  std::vector<CouplingScore> couplings;
  std::vector<VarPair> pairs;
  std::size_t stage1_updates = 0;
  std::size_t stage3_updates = 0;
  bool stage2_skipped = false;
  bool stage3_skipped = false;
  bool stage3_converged = false;
  bool truncated = false;
  std::vector<UpdateEvent> updates;
  std::vector<SubModelSummary> submodels;
  std::vector<PfTracePoint> pf_trace;
  std::vector<std::string> warnings;
  McsResult mcs;

  std::size_t n_call() const noexcept { return n_call_doe + n_call_probe; }
  RunRow row() const { return {mcs.pf, mcs.cov, n_call_doe, n_call_probe}; }
};

using UpdateObserver = std::function<void(const CompositeSurrogate&, const UpdateEvent&)>;

/// Stage 1: a three-point DoE per cut line, grown by maximum-variance samples
/// until every line meets the alpha accuracy test. The cut-point response is
/// evaluated once and shared.
CompositeSurrogate build_first_order(LsfHandle& lsf, const AlParams& params, std::uint64_t seed,
                                     RunRecord* record = nullptr);

/// Stage 2: ranks all pairs by |coupling index| (one LSF call per pair), keeps
/// the n_coupling strongest (or the predetermined list) and seeds each pair
/// model from the two cut-line DoEs without new LSF calls. Returns the scores
/// in ranked order (empty when the list was predetermined).
std::vector<CouplingScore> identify_couplings(LsfHandle& lsf, CompositeSurrogate& cs, const AlParams& params,
                                              std::uint64_t seed, RunRecord* record = nullptr);

/// Stage 3: repeatedly picks the point minimizing
///   |mu(u) - delta| / sigma_bar(u) + p [max(|u| - r_c, 0) + max(|u| - r_s, 0)]
/// and adds it to the sub-model with the largest std there, until that
/// sub-model satisfies |mu| / sigma >= 2.
void refine_composite(LsfHandle& lsf, CompositeSurrogate& cs, const AlParams& params, std::uint64_t seed,
                      RunRecord* record = nullptr, const UpdateObserver& observer = {});

/// Penalty coefficient alpha_s * (g_max - g_min) / 4 with alpha_s = sqrt(2 / N_D).
double penalty_coefficient(double g_min, double g_max, std::size_t n_dims);

/// The refinement objective at u (sigma_bar floored at 1e-12).
double refinement_objective(const CompositeSurrogate& cs, std::span<const double> u, const AlParams& params,
                            double penalty);

struct AnalysisOptions {
  McsConfig mcs;
  /// Population of the surrogate pf evaluated after each refinement update;
  /// 0 disables the trace.
  std::size_t trace_mcs_n = 0;
};

struct AnalysisResult {
  CompositeSurrogate surrogate;
  McsResult mcs;
  RunRecord record;
};

/// Full pipeline: first order, couplings, refinement, Monte Carlo on the
/// composite. Deterministic given seed.
AnalysisResult run_analysis(const LsfHandle::Evaluator& evaluator, const std::vector<Distribution>& dists,
                            const AlParams& params, const AnalysisOptions& options, std::uint64_t seed);

/// Seed of the final Monte Carlo stage of a run. A direct-MCS reference drawn
/// with the same seed sees exactly the same samples.
std::uint64_t analysis_mcs_seed(std::uint64_t run_seed);

/// Summaries of every sub-model (DoE size and verification-grid max std).
std::vector<SubModelSummary> summarize(const CompositeSurrogate& cs, double u_lim);

}  // namespace relhdmr
