#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "relhdmr/active_learning.hpp"
#include "relhdmr/distributions.hpp"
#include "relhdmr/lsf.hpp"
#include "relhdmr/mcs.hpp"

namespace relhdmr {

struct LsfSpec {
  /// "example1", "linear", "coupled" or "truss".
  std::string builtin;
  /// Constant a of the coupled function.
  double a = 0.0;
  /// Truss description, resolved against the config file's directory.
  std::string truss_file;
  /// Admissible mid-span deflection of the truss limit state.
  double limit = 0.11;
};

struct ReferenceSpec {
  /// A known failure probability.
  std::optional<double> pf;
  /// Otherwise direct Monte Carlo on the limit state with this population.
  std::size_t mcs_n = 1'000'000;
  std::uint64_t mcs_seed = 0;
  /// One direct estimate per run, drawn with the run's own Monte Carlo seed.
  bool per_run = false;
};

/// Everything a batch analysis needs, as loaded from a JSON problem file.
struct ProblemDefinition {
  std::string name;
  std::vector<Distribution> variables;
  LsfSpec lsf;
  AlParams al;
  McsConfig mcs;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
  std::optional<ReferenceSpec> reference;
  /// Population of the pf-versus-calls trace; 0 disables it.
  std::size_t trace_mcs_n = 0;
  /// Directory relative paths are resolved against.
  std::filesystem::path base_dir;

  /// Parses and validates. Errors carry the offending key path.
  static ProblemDefinition from_json(const nlohmann::json& doc, std::filesystem::path base_dir = {});
  static ProblemDefinition from_json_text(const std::string& text, std::filesystem::path base_dir = {});
  static ProblemDefinition from_file(const std::filesystem::path& path);

  void validate() const;

  /// The effective configuration with every default filled in.
  nlohmann::json to_json() const;

  /// X-space limit-state function; loads the truss file when needed.
  LsfHandle::Evaluator evaluator() const;

  AnalysisOptions analysis_options() const { return {mcs, trace_mcs_n}; }

  std::uint64_t run_seed(std::size_t k) const noexcept { return base_seed + k; }
};

/// Expected variable count of a builtin (0 when any count is accepted).
std::size_t builtin_dimension(const std::string& builtin);

}  // namespace relhdmr
