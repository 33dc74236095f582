#include "relhdmr/examples.hpp"

#include "relhdmr/error.hpp"

namespace relhdmr {

using nlohmann::json;

namespace {

json var(const char* kind, double mean, double sd, std::size_t count = 1) {
  json v = {{"kind", kind}, {"mean", mean}, {"std", sd}};
  if (count > 1) v["count"] = count;
  return v;
}

json direct_reference(std::size_t n) { return {{"direct_mcs", {{"n", n}, {"seed", 20240}}}}; }

json truss_config(std::size_t n_vars) {
  const bool fine = n_vars == 30;
  json vars = json::array();
  if (fine) {
    vars.push_back(var("lognormal", 2e-3, 2e-4, 11));
    vars.push_back(var("lognormal", 1e-3, 1e-4, 12));
    vars.push_back(var("lognormal", 2.1e11, 2.1e10));
  } else {
    vars.push_back(var("lognormal", 2e-3, 2e-4));
    vars.push_back(var("lognormal", 1e-3, 1e-4));
    vars.push_back(var("lognormal", 2.1e11, 2.1e10, 2));
  }
  vars.push_back(var("lognormal", 5e4, 7.5e3, 6));
  return {{"name", fine ? "truss30" : "truss10"},
          {"variables", vars},
          {"lsf", {{"builtin", "truss"}, {"file", fine ? "truss23_30var.json" : "truss23_10var.json"}, {"limit", 0.11}}},
          {"al",
           {{"r_s", 2.8},
            {"r_c", 3.2},
            {"delta", fine ? 0.05 : 0.01},
            {"alpha", 0.01},
            {"du_init", 3.0},
            {"n_coupling", n_vars}}},
          {"mcs", {{"n", 1'000'000}}},
          {"reference", direct_reference(1'000'000)}};
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"example1", "linear", "coupled", "truss10", "truss30"};
  return names;
}

std::size_t default_dimension(const std::string& name) {
  if (name == "example1") return 3;
  if (name == "linear" || name == "coupled") return 20;
  if (name == "truss10") return 10;
  if (name == "truss30") return 30;
  throw ConfigError("unknown example '" + name + "' (expected example1, linear, coupled, truss10 or truss30)",
                    "example");
}

json example_config(const std::string& name, std::size_t nd) {
  const std::size_t fixed = default_dimension(name);
  if (name == "linear") {
    if (nd == 0) nd = fixed;
    return {{"name", "linear_nd" + std::to_string(nd)},
            {"variables", {var("normal", 0.0, 1.0, nd)}},
            {"lsf", {{"builtin", "linear"}}},
            {"al", {{"r_s", 2.8}, {"r_c", 3.5}, {"delta", 0.001}, {"alpha", 0.05}, {"first_order_only", true}}},
            {"mcs", {{"n", 2'000'000}}},
            {"reference", {{"pf", 2.3262907903552504e-4}}}};
  }
  if (name == "coupled") {
    if (nd == 0) nd = fixed;
    if (nd != 20 && nd != 60) throw ConfigError("the coupled example is defined for nd = 20 or 60", "nd");
    json pairs = json::array();
    for (std::size_t i = 1; i < nd; ++i) pairs.push_back({i, i + 1});
    return {{"name", "coupled_nd" + std::to_string(nd)},
            {"variables", {var("normal", 3.41, 0.2, nd)}},
            {"lsf", {{"builtin", "coupled"}, {"a", nd == 20 ? 95000.0 : 830000.0}}},
            {"al", {{"r_s", 2.8}, {"r_c", 3.5}, {"delta", 0.001}, {"alpha", 0.05}, {"pairs", pairs}}},
            {"mcs", {{"n", 1'000'000}}},
            {"reference", direct_reference(1'000'000)}};
  }
  if (nd != 0 && nd != fixed)
    throw ConfigError("example '" + name + "' has a fixed dimension of " + std::to_string(fixed), "nd");
  if (name == "example1") {
    return {{"name", "example1"},
            {"variables", {var("normal", 0.0, 1.0, 3)}},
            {"lsf", {{"builtin", "example1"}}},
            {"al", {{"r_s", 2.8}, {"r_c", 3.5}, {"delta", 0.001}, {"alpha", 0.01}, {"n_coupling", 2}}},
            {"mcs", {{"n", 1'000'000}}},
            {"reference", direct_reference(1'000'000)}};
  }
  return truss_config(fixed);
}

std::optional<PublishedRow> published_row(const std::string& name, std::size_t nd) {
  if (name == "example1") return PublishedRow{32, std::nullopt, 0.6834, std::nullopt, std::nullopt, std::nullopt};
  if (name == "linear") {
    switch (nd) {
      case 20: return PublishedRow{61.6, std::nullopt, 2.307e-4, 0.56, 4.658, std::nullopt};
      case 40: return PublishedRow{121.1, std::nullopt, 2.339e-4, 0.82, 4.606, std::nullopt};
      case 60: return PublishedRow{181.3, std::nullopt, 2.326e-4, 0.26, 4.638, std::nullopt};
      case 100: return PublishedRow{301.1, std::nullopt, 2.345e-4, 1.08, 4.620, std::nullopt};
      default: return std::nullopt;
    }
  }
  if (name == "coupled") {
    if (nd == 20) return PublishedRow{90.3, std::nullopt, 3.418e-2, 0.18, 0.53, 3.414e-2};
    if (nd == 60) return PublishedRow{270.7, std::nullopt, 9.80e-4, 1.81, 3.19, 9.63e-4};
    return std::nullopt;
  }
  if (name == "truss10") return PublishedRow{101.3, 45, 8.836e-3, 1.51, 1.06, 8.875e-3};
  if (name == "truss30") return PublishedRow{298.1, 435, 4.910e-3, 1.91, 1.42, 4.941e-3};
  return std::nullopt;
}

}  // namespace relhdmr
