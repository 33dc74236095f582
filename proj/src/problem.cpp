#include "relhdmr/problem.hpp"

#include <algorithm>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>

#include "relhdmr/benchmarks.hpp"
#include "relhdmr/error.hpp"

namespace relhdmr {

namespace {

using nlohmann::json;

// Typed access to one JSON object with key paths in every error and a check
// for unknown keys.
class Node {
 public:
  Node(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("expected an object", path_.empty() ? "<root>" : path_);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  const json& raw(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }
  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number()) throw ConfigError("expected a number", path(key));
    return v.get<double>();
  }
  double number(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key", path(key));
    return number(key, 0.0);
  }
  std::size_t count(const std::string& key, std::size_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("expected a non-negative integer", path(key));
    return v.get<std::size_t>();
  }
  std::uint64_t seed(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0))
      throw ConfigError("expected a non-negative integer", path(key));
    return v.get<std::uint64_t>();
  }
  bool flag(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError("expected true or false", path(key));
    return v.get<bool>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = j_.at(key);
    if (!v.is_string()) throw ConfigError("expected a string", path(key));
    return v.get<std::string>();
  }
  std::string text(const std::string& key) {
    if (!has(key)) throw ConfigError("missing required key", path(key));
    return text(key, {});
  }

  void reject_unknown() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown key", path(key));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::vector<Distribution> parse_variables(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("expected a non-empty array", "variables");
  std::vector<Distribution> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string path = "variables[" + std::to_string(k) + "]";
    Node n(j[k], path);
    if (n.has("correlation"))
      throw ConfigError("correlated inputs are not supported; only independent marginals", n.path("correlation"));
    DistributionKind kind;
    try {
      kind = distribution_kind_from_string(n.text("kind"));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), n.path("kind"));
    }
    const double mean = n.number("mean");
    const double sd = n.number("std");
    const std::size_t repeat = n.count("count", 1);
    if (repeat < 1) throw ConfigError("must be >= 1", n.path("count"));
    n.reject_unknown();
    try {
      out.insert(out.end(), repeat, Distribution(kind, mean, sd));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), path);
    }
  }
  return out;
}

void parse_pso(const json& j, pso::SwarmConfig& c) {
  Node n(j, "pso");
  c.n_swarm = n.count("n_swarm", c.n_swarm);
  c.n_iter = n.count("n_iter", c.n_iter);
  c.omega = n.number("omega", c.omega);
  c.c1 = n.number("c1", c.c1);
  c.c2 = n.number("c2", c.c2);
  c.v_max = n.number("v_max", c.v_max);
  c.v_max_relative = n.flag("v_max_relative", c.v_max_relative);
  c.delta0 = n.number("delta0", c.delta0);
  c.init_radius = n.number("init_radius", c.init_radius);
  n.reject_unknown();
}

void parse_kriging(const json& j, KrigingFitOptions& k) {
  Node n(j, "kriging");
  k.log10_theta_lo = n.number("log10_theta_lo", k.log10_theta_lo);
  k.log10_theta_hi = n.number("log10_theta_hi", k.log10_theta_hi);
  k.search_swarm = n.count("search_swarm", k.search_swarm);
  k.search_iterations = n.count("search_iterations", k.search_iterations);
  k.nugget_start = n.number("nugget_start", k.nugget_start);
  k.nugget_max = n.number("nugget_max", k.nugget_max);
  k.standardize_inputs = n.flag("standardize_inputs", k.standardize_inputs);
  k.interpolation_tol = n.number("interpolation_tol", k.interpolation_tol);
  n.reject_unknown();
}

void parse_al(const json& j, AlParams& a) {
  Node n(j, "al");
  a.delta = n.number("delta", a.delta);
  a.alpha = n.number("alpha", a.alpha);
  a.r_s = n.number("r_s", a.r_s);
  a.r_c = n.number("r_c", a.r_c);
  a.u_lim = n.number("u_lim", a.u_lim);
  a.du_init = n.number("du_init", a.du_init);
  a.du_coupling = n.number("du_coupling", a.du_coupling);
  a.n_coupling = n.count("n_coupling", a.n_coupling);
  if (n.has("pairs")) {
    const json& p = n.raw("pairs");
    if (!p.is_array()) throw ConfigError("expected an array of [i, j] pairs", n.path("pairs"));
    std::vector<VarPair> pairs;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const std::string path = "al.pairs[" + std::to_string(k) + "]";
      const json& e = p[k];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw ConfigError("expected [i, j] with 1-based integer indices", path);
      const auto i = e[0].get<long long>();
      const auto jj = e[1].get<long long>();
      if (i < 1 || jj < 1) throw ConfigError("indices are 1-based", path);
      pairs.emplace_back(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(jj - 1));
    }
    a.pairs = std::move(pairs);
  }
  a.max_updates = n.count("max_updates", a.max_updates);
  a.min_updates = n.count("min_updates", a.min_updates);
  a.first_order_only = n.flag("first_order_only", a.first_order_only);
  a.stop_on_composite_mean = n.flag("stop_on_composite_mean", a.stop_on_composite_mean);
  if (n.has("probe_sign")) {
    const std::string s = n.text("probe_sign");
    if (s == "plus") a.probe_sign = ProbeSign::Plus;
    else if (s == "minus") a.probe_sign = ProbeSign::Minus;
    else throw ConfigError("expected \"plus\" or \"minus\"", n.path("probe_sign"));
  }
  if (n.has("cut_point")) {
    const json& c = n.raw("cut_point");
    if (!c.is_array()) throw ConfigError("expected an array of numbers", n.path("cut_point"));
    a.cut_point.clear();
    for (const auto& v : c) {
      if (!v.is_number()) throw ConfigError("expected an array of numbers", n.path("cut_point"));
      a.cut_point.push_back(v.get<double>());
    }
  }
  a.first_order_swarm = n.count("first_order_swarm", a.first_order_swarm);
  a.min_first_order_doe = n.count("min_first_order_doe", a.min_first_order_doe);
  a.stop_confirmations = n.count("stop_confirmations", a.stop_confirmations);
  a.refine_init_in_ball = n.flag("refine_init_in_ball", a.refine_init_in_ball);
  n.reject_unknown();
}

void parse_mcs(const json& j, McsConfig& m) {
  Node n(j, "mcs");
  m.n = n.count("n", m.n);
  m.batch = n.count("batch", m.batch);
  m.max_cov = n.number("max_cov", m.max_cov);
  m.auto_grow = n.flag("auto_grow", m.auto_grow);
  m.cap = n.count("cap", m.cap);
  m.threads = n.count("threads", m.threads);
  n.reject_unknown();
}

LsfSpec parse_lsf(const json& j) {
  Node n(j, "lsf");
  LsfSpec s;
  s.builtin = n.text("builtin");
  if (s.builtin == "coupled") {
    s.a = n.number("a");
  } else if (s.builtin == "truss") {
    s.truss_file = n.text("file");
    s.limit = n.number("limit", s.limit);
  } else if (s.builtin != "example1" && s.builtin != "linear") {
    throw ConfigError("unknown builtin limit state '" + s.builtin + "' (expected example1, linear, coupled or truss)",
                      "lsf.builtin");
  }
  n.reject_unknown();
  return s;
}

ReferenceSpec parse_reference(const json& j) {
  Node n(j, "reference");
  ReferenceSpec r;
  if (n.has("pf")) {
    r.pf = n.number("pf");
    if (!(*r.pf > 0.0 && *r.pf < 1.0)) throw ConfigError("must lie in (0, 1)", "reference.pf");
  }
  if (n.has("direct_mcs")) {
    if (r.pf) throw ConfigError("give either pf or direct_mcs, not both", "reference");
    Node d(n.raw("direct_mcs"), "reference.direct_mcs");
    r.mcs_n = d.count("n", r.mcs_n);
    r.mcs_seed = d.seed("seed", r.mcs_seed);
    d.reject_unknown();
  } else if (!r.pf) {
    throw ConfigError("expected pf or direct_mcs", "reference");
  }
  r.per_run = n.flag("per_run", r.per_run);
  if (r.per_run && r.pf) throw ConfigError("per-run references need direct_mcs", "reference.per_run");
  n.reject_unknown();
  return r;
}

}  // namespace

std::size_t builtin_dimension(const std::string& builtin) { return builtin == "example1" ? 3 : 0; }

ProblemDefinition ProblemDefinition::from_json(const nlohmann::json& doc, std::filesystem::path base_dir) {
  ProblemDefinition p;
  p.base_dir = std::move(base_dir);
  try {
    Node n(doc, "");
    p.name = n.text("name", "");
    if (!n.has("variables")) throw ConfigError("missing required key", "variables");
    p.variables = parse_variables(n.raw("variables"));
    if (!n.has("lsf")) throw ConfigError("missing required key", "lsf");
    p.lsf = parse_lsf(n.raw("lsf"));
    if (n.has("pso")) parse_pso(n.raw("pso"), p.al.pso);
    if (n.has("kriging")) parse_kriging(n.raw("kriging"), p.al.kriging);
    if (n.has("al")) parse_al(n.raw("al"), p.al);
    if (n.has("mcs")) parse_mcs(n.raw("mcs"), p.mcs);
    p.runs = n.count("runs", p.runs);
    p.base_seed = n.seed("base_seed", p.base_seed);
    if (n.has("reference")) p.reference = parse_reference(n.raw("reference"));
    if (n.has("trace")) {
      Node t(n.raw("trace"), "trace");
      p.trace_mcs_n = t.count("mcs_n", p.trace_mcs_n);
      t.reject_unknown();
    }
    n.reject_unknown();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid problem definition: ") + e.what());
  }
  p.validate();
  // Loads the truss early so file and dimension errors surface at parse time.
  if (p.lsf.builtin == "truss") (void)p.evaluator();
  return p;
}

ProblemDefinition ProblemDefinition::from_json_text(const std::string& text, std::filesystem::path base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  return from_json(doc, std::move(base_dir));
}

ProblemDefinition ProblemDefinition::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str(), path.parent_path());
}

void ProblemDefinition::validate() const {
  if (variables.empty()) throw ConfigError("need at least one variable", "variables");
  const std::size_t n = variables.size();
  const std::size_t expected = builtin_dimension(lsf.builtin);
  if (expected && n != expected)
    throw ConfigError("limit state '" + lsf.builtin + "' needs " + std::to_string(expected) + " variables, got " +
                          std::to_string(n),
                      "variables");
  if (lsf.builtin == "coupled" && n < 2) throw ConfigError("coupled limit state needs >= 2 variables", "variables");
  if (lsf.builtin == "truss" && !(lsf.limit > 0.0)) throw ConfigError("must be > 0", "lsf.limit");
  if (runs < 1) throw ConfigError("must be >= 1", "runs");
  al.validate(n);
  mcs.validate();
  if (reference && !reference->pf && reference->mcs_n < 1) throw ConfigError("must be >= 1", "reference.direct_mcs.n");
}

nlohmann::json ProblemDefinition::to_json() const {
  json vars = json::array();
  for (const auto& d : variables)
    vars.push_back({{"kind", std::string(to_string(d.kind()))}, {"mean", d.mean()}, {"std", d.std()}});

  json l = {{"builtin", lsf.builtin}};
  if (lsf.builtin == "coupled") l["a"] = lsf.a;
  if (lsf.builtin == "truss") {
    l["file"] = lsf.truss_file;
    l["limit"] = lsf.limit;
  }

  json al_j = {{"delta", al.delta},
               {"alpha", al.alpha},
               {"r_s", al.r_s},
               {"r_c", al.r_c},
               {"u_lim", al.u_lim},
               {"du_init", al.du_init},
               {"du_coupling", al.du_coupling},
               {"n_coupling", al.n_coupling},
               {"max_updates", al.max_updates},
               {"min_updates", al.min_updates},
               {"first_order_only", al.first_order_only},
               {"stop_on_composite_mean", al.stop_on_composite_mean},
               {"probe_sign", al.probe_sign == ProbeSign::Plus ? "plus" : "minus"},
               {"cut_point", al.cut_point.empty() ? std::vector<double>(variables.size(), 0.0) : al.cut_point},
               {"first_order_swarm", al.first_order_swarm},
               {"min_first_order_doe", al.min_first_order_doe},
               {"stop_confirmations", al.stop_confirmations},
               {"refine_init_in_ball", al.refine_init_in_ball}};
  if (al.pairs) {
    json pairs = json::array();
    for (const auto& [i, j] : *al.pairs) pairs.push_back({i + 1, j + 1});
    al_j["pairs"] = pairs;
  }

  json out = {
      {"name", name},
      {"variables", vars},
      {"lsf", l},
      {"al", al_j},
      {"pso",
       {{"n_swarm", al.pso.n_swarm},
        {"n_iter", al.pso.n_iter},
        {"omega", al.pso.omega},
        {"c1", al.pso.c1},
        {"c2", al.pso.c2},
        {"v_max", al.pso.v_max},
        {"v_max_relative", al.pso.v_max_relative},
        {"delta0", al.pso.delta0},
        {"init_radius", al.pso.init_radius}}},
      {"kriging",
       {{"log10_theta_lo", al.kriging.log10_theta_lo},
        {"log10_theta_hi", al.kriging.log10_theta_hi},
        {"search_swarm", al.kriging.search_swarm},
        {"search_iterations", al.kriging.search_iterations},
        {"nugget_start", al.kriging.nugget_start},
        {"nugget_max", al.kriging.nugget_max},
        {"standardize_inputs", al.kriging.standardize_inputs},
        {"interpolation_tol", al.kriging.interpolation_tol}}},
      {"mcs",
       {{"n", mcs.n},
        {"batch", mcs.batch},
        {"max_cov", mcs.max_cov},
        {"auto_grow", mcs.auto_grow},
        {"cap", mcs.cap},
        {"threads", mcs.threads}}},
      {"runs", runs},
      {"base_seed", base_seed},
      {"trace", {{"mcs_n", trace_mcs_n}}},
  };
  if (reference) {
    json r;
    if (reference->pf) {
      r["pf"] = *reference->pf;
    } else {
      r["direct_mcs"] = {{"n", reference->mcs_n}, {"seed", reference->mcs_seed}};
    }
    r["per_run"] = reference->per_run;
    out["reference"] = r;
  }
  return out;
}

LsfHandle::Evaluator ProblemDefinition::evaluator() const {
  if (lsf.builtin == "example1") return bench::lsf_example1;
  if (lsf.builtin == "linear") return bench::lsf_linear;
  if (lsf.builtin == "coupled") {
    const double a = lsf.a;
    return [a](std::span<const double> x) { return bench::lsf_coupled(x, a); };
  }
  if (lsf.builtin == "truss") {
    std::filesystem::path file(lsf.truss_file);
    if (file.is_relative() && !base_dir.empty()) file = base_dir / file;
    std::shared_ptr<const bench::TrussModel> model;
    try {
      model = std::make_shared<const bench::TrussModel>(bench::TrussModel::from_file(file));
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), "lsf.file");
    }
    if (model->variable_count() > variables.size())
      throw ConfigError("truss references " + std::to_string(model->variable_count()) + " variables but " +
                            std::to_string(variables.size()) + " are defined",
                        "variables");
    const double limit = lsf.limit;
    return [model, limit](std::span<const double> x) { return bench::lsf_truss(*model, x, limit); };
  }
  throw ConfigError("unknown builtin limit state '" + lsf.builtin + "'", "lsf.builtin");
}

}  // namespace relhdmr
