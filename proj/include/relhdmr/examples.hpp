#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace relhdmr {

/// example1, linear, coupled, truss10, truss30.
const std::vector<std::string>& example_names();

/// Problem document of a bundled benchmark. `nd` selects the dimension of
/// linear (any >= 1) and coupled (20 or 60) and must be 0 otherwise. Truss
/// files are referenced by name, relative to the data directory.
nlohmann::json example_config(const std::string& name, std::size_t nd = 0);

/// Published reference row for side-by-side comparison.
struct PublishedRow {
  double n_call;
  /// Extra calls spent on coupling identification, reported separately.
  std::optional<double> n_call_coupling;
  double pf;
  std::optional<double> rel_error_pct;
  std::optional<double> cov_pct;
  std::optional<double> mcs_pf;
};

std::optional<PublishedRow> published_row(const std::string& name, std::size_t nd);

/// Default dimension of an example (used when --nd is omitted).
std::size_t default_dimension(const std::string& name);

}  // namespace relhdmr
