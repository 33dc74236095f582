#pragma once

#include <span>
#include <string>
#include <vector>

#include "relhdmr/error.hpp"
#include "relhdmr/kriging.hpp"
#include "relhdmr/lsf.hpp"

namespace relhdmr {

/// A Kriging model of G restricted to a cut line (order 1) or cut plane
/// (order 2) through the cut point. Variable indices are 0-based.
struct SubSurrogate {
  std::vector<std::size_t> vars;
  KrigingModel model;

  SubSurrogate(std::vector<std::size_t> vars, KrigingModel model);

  std::size_t order() const noexcept { return vars.size(); }
  const DoeSet& doe() const noexcept { return model.doe(); }

  /// Stable report identifier: "G3", "G12", or "G4_11" once an index exceeds 9
  /// (indices are printed 1-based).
  std::string id() const;
};

/// Stable reference to a sub-model inside a composite.
struct SubModelRef {
  std::size_t order;
  std::size_t index;  // into first_order (order 1) or second_order (order 2)

  bool operator==(const SubModelRef&) const = default;
};

struct SigmaBar {
  double value;
  SubModelRef which;
};

/// Returns cut_point with the sub-model's variable slots replaced by coords.
std::vector<double> embed_point(const SubSurrogate& sub, std::span<const double> coords,
                                std::span<const double> cut_point);

/// Second-order Cut-HDMR composite:
///   G(u) ~ g0 + sum_i Gbar_i(u_i) + sum_{(i,j) in C} Gbar_ij(u_i, u_j).
class CompositeSurrogate {
 public:
  CompositeSurrogate(std::vector<double> cut_point, double g0, std::vector<SubSurrogate> first_order);

  std::size_t dim() const noexcept { return cut_point_.size(); }
  std::span<const double> cut_point() const noexcept { return cut_point_; }
  double g0() const noexcept { return g0_; }

  const std::vector<SubSurrogate>& first_order() const noexcept { return first_order_; }
  const std::vector<SubSurrogate>& second_order() const noexcept { return second_order_; }

  const SubSurrogate& submodel(SubModelRef ref) const;
  /// Swaps in a refitted model; the variable set must not change.
  void replace_model(SubModelRef ref, KrigingModel model);

  /// Inserts a pair sub-model keeping second_order sorted by (i, j).
  void add_pair(SubSurrogate sub);
  bool has_pair(std::size_t i, std::size_t j) const;

  /// Coordinates of u in the sub-model's own subspace.
  std::vector<double> project(SubModelRef ref, std::span<const double> u) const;

  double predict(std::span<const double> u) const;

  /// Largest Kriging standard deviation among all sub-models at the projections
  /// of u. Ties resolve to the lowest order, then the smallest variable indices.
  SigmaBar sigma_bar(std::span<const double> u) const;

  /// Every sub-model in sigma_bar's enumeration order.
  std::vector<SubModelRef> all_refs() const;

  /// Union of all sub-model DoE responses plus g0.
  double min_response() const;
  double max_response() const;

 private:
  std::vector<double> cut_point_;
  double g0_;
  std::vector<SubSurrogate> first_order_;
  std::vector<SubSurrogate> second_order_;
};

/// Which side of the cut point the coupling probe sits on.
enum class ProbeSign { Plus, Minus };

/// Relative discrepancy between the additive first-order prediction and the
/// true G at the probe cut_point + du (e_i + e_j). Costs one LSF call.
/// Throws DegenerateProbeError when |G(probe)| < 1e-12.
double coupling_index(LsfHandle& lsf, const CompositeSurrogate& cs, std::size_t i, std::size_t j, double du,
                      ProbeSign sign = ProbeSign::Plus);

class DegenerateProbeError : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

}  // namespace relhdmr
