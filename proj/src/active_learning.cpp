#include "relhdmr/active_learning.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "relhdmr/error.hpp"
#include "relhdmr/rng.hpp"

namespace relhdmr {

namespace {

// Seed tags; one per kind of random decision so streams never overlap.
enum SeedTag : std::uint64_t {
  kTagFirstOrderSearch = 11,
  kTagFirstOrderFit = 12,
  kTagPairFit = 21,
  kTagRefineSearch = 31,
  kTagRefineFit = 32,
  kTagMcs = 51,
  kTagTrace = 52,
};

constexpr std::size_t kGridPoints = 1001;
constexpr std::size_t kPlaneGrid = 101;
constexpr double kSigmaFloor = 1e-12;

void warn(RunRecord* record, std::string message) {
  if (record) record->warnings.push_back(std::move(message));
}

std::vector<double> cut_point_of(const AlParams& params, std::size_t n) {
  return params.cut_point.empty() ? std::vector<double>(n, 0.0) : params.cut_point;
}

struct LineMax {
  double u;
  double sigma;
};

LineMax grid_max_sigma(const KrigingModel& model, double u_lim) {
  LineMax best{-u_lim, -1.0};
  for (std::size_t k = 0; k < kGridPoints; ++k) {
    const double u = -u_lim + 2.0 * u_lim * static_cast<double>(k) / static_cast<double>(kGridPoints - 1);
    const double s = model.predict_std(std::span<const double>(&u, 1));
    if (s > best.sigma) best = {u, s};
  }
  return best;
}

}  // namespace

void AlParams::validate(std::size_t n_dims) const {
  if (n_dims < 1) throw ConfigError("need at least one variable", "variables");
  if (!(alpha > 0.0)) throw ConfigError("must be > 0", "al.alpha");
  if (!(u_lim > 0.0)) throw ConfigError("must be > 0", "al.u_lim");
  if (!(r_s > 0.0 && r_s <= r_c && r_c <= u_lim))
    throw ConfigError("radii must satisfy 0 < r_s <= r_c <= u_lim", "al.r_s");
  if (!(du_init > 0.0 && du_init <= 6.0)) throw ConfigError("must lie in (0, 6]", "al.du_init");
  if (!(du_coupling > 0.0)) throw ConfigError("must be > 0", "al.du_coupling");
  if (!std::isfinite(delta)) throw ConfigError("must be finite", "al.delta");
  if (!cut_point.empty() && cut_point.size() != n_dims)
    throw ConfigError("needs one coordinate per variable", "al.cut_point");
  const std::size_t max_pairs = n_dims * (n_dims - 1) / 2;
  if (pairs) {
    for (std::size_t k = 0; k < pairs->size(); ++k) {
      const auto [i, j] = (*pairs)[k];
      if (!(i < j) || j >= n_dims)
        throw ConfigError("pair must satisfy 1 <= i < j <= N_D", "al.pairs[" + std::to_string(k) + "]");
      for (std::size_t q = 0; q < k; ++q)
        if ((*pairs)[q] == (*pairs)[k]) throw ConfigError("duplicate pair", "al.pairs[" + std::to_string(k) + "]");
    }
  } else if (n_coupling > max_pairs) {
    throw ConfigError("exceeds the number of variable pairs (" + std::to_string(max_pairs) + ")", "al.n_coupling");
  }
  if (first_order_only && (n_coupling > 0 || (pairs && !pairs->empty())))
    throw ConfigError("cannot be combined with n_coupling > 0 or a pair list", "al.first_order_only");
  if (first_order_swarm < 2) throw ConfigError("must be >= 2", "al.first_order_swarm");
  if (min_first_order_doe < 3) throw ConfigError("must be >= 3", "al.min_first_order_doe");
  if (stop_confirmations < 1) throw ConfigError("must be >= 1", "al.stop_confirmations");
  pso.validate();
}

double penalty_coefficient(double g_min, double g_max, std::size_t n_dims) {
  return std::sqrt(2.0 / static_cast<double>(n_dims)) * (g_max - g_min) / 4.0;
}

double refinement_objective(const CompositeSurrogate& cs, std::span<const double> u, const AlParams& params,
                            double penalty) {
  double norm2 = 0.0;
  for (double v : u) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  const double sigma = std::max(cs.sigma_bar(u).value, kSigmaFloor);
  const double learning = std::abs(cs.predict(u) - params.delta) / sigma;
  return learning + penalty * (std::max(norm - params.r_c, 0.0) + std::max(norm - params.r_s, 0.0));
}

CompositeSurrogate build_first_order(LsfHandle& lsf, const AlParams& params, std::uint64_t seed,
                                     RunRecord* record) {
  const std::size_t n = lsf.dim();
  params.validate(n);
  const std::vector<double> cut = cut_point_of(params, n);
  const double g0 = lsf(cut);

  std::vector<SubSurrogate> lines;
  lines.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::MatrixXd pts(3, 1);
    Eigen::VectorXd ys(3);
    pts << cut[i] - params.du_init, cut[i], cut[i] + params.du_init;
    std::vector<double> full = cut;
    full[i] = pts(0, 0);
    ys(0) = lsf(full);
    ys(1) = g0;
    full[i] = pts(2, 0);
    ys(2) = lsf(full);

    std::size_t updates = 0;
    KrigingModel model =
        KrigingModel::fit(DoeSet(pts, ys), derive_seed(seed, {kTagFirstOrderFit, i, updates}), params.kriging);
    SubSurrogate line({i}, model);

    while (true) {
      pso::SwarmConfig search = params.pso;
      search.n_swarm = params.first_order_swarm;
      search.seed = derive_seed(seed, {kTagFirstOrderSearch, i, updates});
      const auto found = pso::minimize(
          [&](std::span<const double> u) { return -line.model.predict(u).variance; },
          pso::Bounds::box(1, -params.u_lim, params.u_lim), search);
      double candidate = found.x_best[0];
      double sigma_max = std::sqrt(std::max(0.0, -found.f_best));
      // The grid backs up the swarm so the accuracy test holds on it exactly.
      const LineMax grid = grid_max_sigma(line.model, params.u_lim);
      if (grid.sigma > sigma_max) {
        candidate = grid.u;
        sigma_max = grid.sigma;
      }

      const double range = line.doe().max_response() - line.doe().min_response();
      const double tol = range > 0.0 ? params.alpha * range : params.alpha;
      // A constant line carries no length-scale information to wait for.
      const bool enough = range == 0.0 || line.doe().size() >= params.min_first_order_doe;
      if (sigma_max < tol && enough) break;
      if (line.doe().contains_near(std::span<const double>(&candidate, 1))) {
        warn(record, line.id() + ": selected sample duplicates the DoE; first-order refinement stopped");
        break;
      }
      if (updates >= params.max_updates) {
        warn(record, line.id() + ": first-order update cap reached");
        if (record) record->truncated = true;
        break;
      }

      full = cut;
      full[i] = candidate;
      const double g = lsf(full);
      DoeSet doe = line.doe();
      doe.append(std::span<const double>(&candidate, 1), g);
      ++updates;
      line.model = KrigingModel::fit(std::move(doe), derive_seed(seed, {kTagFirstOrderFit, i, updates}), params.kriging);
      if (record) {
        ++record->stage1_updates;
        record->updates.push_back({1, line.id(), line.doe().size(), lsf.calls(), full, g});
      }
    }
    lines.push_back(std::move(line));
  }
  return CompositeSurrogate(cut, g0, std::move(lines));
}

std::vector<CouplingScore> identify_couplings(LsfHandle& lsf, CompositeSurrogate& cs, const AlParams& params,
                                              std::uint64_t seed, RunRecord* record) {
  const std::size_t n = cs.dim();
  params.validate(n);
  std::vector<CouplingScore> ranked;
  std::vector<VarPair> selected;

  if (params.pairs) {
    selected = *params.pairs;
  } else if (params.n_coupling > 0) {
    const std::size_t before = lsf.calls();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        try {
          ranked.push_back({i, j, coupling_index(lsf, cs, i, j, params.du_coupling, params.probe_sign)});
        } catch (const DegenerateProbeError& e) {
          warn(record, std::string(e.what()) + "; pair skipped");
        }
      }
    }
    if (record) record->n_call_probe += lsf.calls() - before;
    std::stable_sort(ranked.begin(), ranked.end(), [](const CouplingScore& a, const CouplingScore& b) {
      return std::abs(a.index) > std::abs(b.index);
    });
    for (std::size_t k = 0; k < std::min(params.n_coupling, ranked.size()); ++k)
      selected.emplace_back(ranked[k].i, ranked[k].j);
  }

  const auto cut = cs.cut_point();
  for (const auto& [i, j] : selected) {
    // Cross-embedding of the two cut-line DoEs; the shared cut point appears once.
    std::vector<std::array<double, 2>> pts;
    std::vector<double> ys;
    auto add = [&](double a, double b, double y) {
      for (const auto& p : pts)
        if (std::hypot(p[0] - a, p[1] - b) < DoeSet::kMinSeparation) return;
      pts.push_back({a, b});
      ys.push_back(y);
    };
    const DoeSet& di = cs.first_order()[i].doe();
    const DoeSet& dj = cs.first_order()[j].doe();
    for (std::size_t k = 0; k < di.size(); ++k) add(di.point(k)[0], cut[j], di.response(k));
    for (std::size_t k = 0; k < dj.size(); ++k) add(cut[i], dj.point(k)[0], dj.response(k));
    Eigen::MatrixXd m(pts.size(), 2);
    Eigen::VectorXd y(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      m(k, 0) = pts[k][0];
      m(k, 1) = pts[k][1];
      y(k) = ys[k];
    }
    auto model = KrigingModel::fit(DoeSet(m, y), derive_seed(seed, {kTagPairFit, i, j}), params.kriging);
    cs.add_pair(SubSurrogate({i, j}, std::move(model)));
  }
  if (record) {
    record->couplings = ranked;
    record->pairs = selected;
  }
  return ranked;
}

void refine_composite(LsfHandle& lsf, CompositeSurrogate& cs, const AlParams& params, std::uint64_t seed,
                      RunRecord* record, const UpdateObserver& observer) {
  const std::size_t n = cs.dim();
  params.validate(n);
  const auto bounds = pso::Bounds::box(n, -params.u_lim, params.u_lim);

  std::size_t confirmations = 0;
  for (std::size_t update = 0, search_no = 0;; ++search_no) {
    if (update >= params.max_updates) {
      warn(record, "refinement stopped at the update cap (" + std::to_string(params.max_updates) + ")");
      if (record) record->truncated = true;
      return;
    }
    const double penalty = penalty_coefficient(cs.min_response(), cs.max_response(), n);
    pso::SwarmConfig search = params.pso;
    search.seed = derive_seed(seed, {kTagRefineSearch, search_no});
    if (params.refine_init_in_ball) search.init_radius = params.r_c;
    const auto found = pso::minimize(
        [&](std::span<const double> u) { return refinement_objective(cs, u, params, penalty); }, bounds, search);
    const auto& u_star = found.x_best;

    const SubModelRef which = cs.sigma_bar(u_star).which;
    const SubSurrogate& sub = cs.submodel(which);
    const std::vector<double> coords = cs.project(which, u_star);
    const KrigingPrediction pred = sub.model.predict(coords);
    const double mu = params.stop_on_composite_mean ? cs.predict(u_star) : pred.mean;
    const double sigma = std::sqrt(pred.variance);
    const double ratio = sigma > 0.0 ? std::abs(mu) / sigma : std::numeric_limits<double>::infinity();
    if (ratio >= 2.0 && update >= params.min_updates) {
      // Each confirmation is a fresh, independently seeded search.
      if (++confirmations >= params.stop_confirmations) {
        if (record) record->stage3_converged = true;
        return;
      }
      continue;
    }
    confirmations = 0;
    if (sub.doe().contains_near(coords)) {
      warn(record, sub.id() + ": refinement sample duplicates the DoE; refinement stopped");
      return;
    }

    const std::vector<double> full = embed_point(sub, coords, cs.cut_point());
    const double g = lsf(full);
    DoeSet doe = sub.doe();
    doe.append(coords, g);
    const std::string id = sub.id();
    cs.replace_model(which, KrigingModel::fit(std::move(doe), derive_seed(seed, {kTagRefineFit, update}), params.kriging));
    const UpdateEvent event{3, id, cs.submodel(which).doe().size(), lsf.calls(), full, g};
    if (record) {
      ++record->stage3_updates;
      record->updates.push_back(event);
    }
    if (observer) observer(cs, event);
    ++update;
  }
}

std::uint64_t analysis_mcs_seed(std::uint64_t run_seed) { return derive_seed(run_seed, {kTagMcs}); }

std::vector<SubModelSummary> summarize(const CompositeSurrogate& cs, double u_lim) {
  std::vector<SubModelSummary> out;
  for (const auto& ref : cs.all_refs()) {
    const SubSurrogate& sub = cs.submodel(ref);
    double max_sigma = 0.0;
    if (sub.order() == 1) {
      max_sigma = grid_max_sigma(sub.model, u_lim).sigma;
    } else {
      for (std::size_t a = 0; a < kPlaneGrid; ++a) {
        for (std::size_t b = 0; b < kPlaneGrid; ++b) {
          const std::array<double, 2> c{-u_lim + 2.0 * u_lim * static_cast<double>(a) / (kPlaneGrid - 1),
                                        -u_lim + 2.0 * u_lim * static_cast<double>(b) / (kPlaneGrid - 1)};
          max_sigma = std::max(max_sigma, sub.model.predict_std(c));
        }
      }
    }
    out.push_back({sub.id(), sub.vars, sub.doe().size(), max_sigma});
  }
  return out;
}

AnalysisResult run_analysis(const LsfHandle::Evaluator& evaluator, const std::vector<Distribution>& dists,
                            const AlParams& params, const AnalysisOptions& options, std::uint64_t seed) {
  params.validate(dists.size());
  options.mcs.validate();
  LsfHandle lsf(evaluator, dists);
  RunRecord record;
  record.seed = seed;

  auto trace_pf = [&](const CompositeSurrogate& cs) {
    if (options.trace_mcs_n == 0) return;
    McsConfig cfg = options.mcs;
    cfg.n = options.trace_mcs_n;
    cfg.auto_grow = false;
    const auto r = estimate_pf([&](std::span<const double> u) { return cs.predict(u); }, cs.dim(),
                               derive_seed(seed, {kTagTrace}), cfg);
    record.pf_trace.push_back({lsf.calls(), r.pf});
  };

  CompositeSurrogate cs = build_first_order(lsf, params, seed, &record);
  trace_pf(cs);

  const bool scan_needed = !params.first_order_only && (params.pairs || params.n_coupling > 0);
  if (scan_needed) {
    identify_couplings(lsf, cs, params, seed, &record);
    record.stage2_skipped = params.pairs.has_value();
  } else {
    record.stage2_skipped = true;
  }

  if (params.first_order_only && cs.second_order().empty()) {
    record.stage3_skipped = true;
  } else {
    refine_composite(lsf, cs, params, seed, &record,
                     [&](const CompositeSurrogate& current, const UpdateEvent&) { trace_pf(current); });
  }

  record.n_call_doe = lsf.calls() - record.n_call_probe;
  record.submodels = summarize(cs, params.u_lim);
  record.mcs = estimate_pf([&](std::span<const double> u) { return cs.predict(u); }, cs.dim(),
                           analysis_mcs_seed(seed), options.mcs);
  if (!record.mcs.sufficient(options.mcs.max_cov))
    record.warnings.push_back("Monte Carlo population is insufficient (cov >= " + std::to_string(options.mcs.max_cov) +
                              ")");
  McsResult mcs = record.mcs;
  return {std::move(cs), mcs, std::move(record)};
}

}  // namespace relhdmr
