#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace relhdmr::bench {

/// 0.75 x2 - 3 sin(x1) + 0.2 x1 - 0.1 (x3 - 3)^2 - 0.005 x1 x2 + 0.1 x2 x3 - 0.2
double lsf_example1(std::span<const double> x);

/// 3.5 sqrt(N) - sum x_i. Exact pf = Phi(-3.5) under standard normal inputs.
double lsf_linear(std::span<const double> x);

/// a - (x1 - 1)^2 - sum_{i=2..N} i (2 x_i^2 - x_{i-1})^2
double lsf_coupled(std::span<const double> x, double a);

/// A scalar truss input: either a constant or `scale * x[var]`.
struct Source {
  std::optional<std::size_t> var;  // 0-based
  double value = 0.0;
  double scale = 1.0;

  double resolve(std::span<const double> x) const { return var ? scale * x[*var] : value; }
};

struct TrussNode {
  int id;
  double x;
  double y;
};

struct TrussElement {
  int id;
  int a;
  int b;
  Source area;
  Source modulus;
};

struct TrussSupport {
  int node;
  bool fix_x;
  bool fix_y;
};

struct TrussLoad {
  int node;
  Source fx;
  Source fy;
};

/// Planar pin-jointed truss. Immutable after load.
class TrussModel {
 public:
  TrussModel(std::vector<TrussNode> nodes, std::vector<TrussElement> elements, std::vector<TrussSupport> supports,
             std::vector<TrussLoad> loads, int monitor_node);

  /// JSON document; variable indices in the file are 1-based.
  static TrussModel from_json_text(const std::string& text);
  static TrussModel from_file(const std::filesystem::path& path);

  const std::vector<TrussNode>& nodes() const noexcept { return nodes_; }
  const std::vector<TrussElement>& elements() const noexcept { return elements_; }
  const std::vector<TrussSupport>& supports() const noexcept { return supports_; }
  const std::vector<TrussLoad>& loads() const noexcept { return loads_; }
  int monitor_node() const noexcept { return monitor_node_; }

  /// 1 + the largest variable index referenced (0 when fully constant).
  std::size_t variable_count() const noexcept;
  /// Position of a node id in nodes().
  std::size_t node_index(int id) const;

 private:
  std::vector<TrussNode> nodes_;
  std::vector<TrussElement> elements_;
  std::vector<TrussSupport> supports_;
  std::vector<TrussLoad> loads_;
  int monitor_node_;
};

struct TrussSolution {
  /// (ux, uy) per node in nodes() order.
  Eigen::VectorXd displacements;
  /// External nodal load vector in the same layout.
  Eigen::VectorXd loads;
  /// Axial force per element (tension positive).
  Eigen::VectorXd axial_forces;
  /// Sum over elements of N^2 L / (2 E A).
  double strain_energy;
  double monitor_dy;
};

/// Linear direct-stiffness analysis. Throws ConfigError on non-positive E or A
/// and StructuralError when the reduced stiffness is singular.
TrussSolution truss_analyze(const TrussModel& model, std::span<const double> x);

/// Signed vertical displacement of the monitor node.
double truss_solve(const TrussModel& model, std::span<const double> x);

/// limit - |truss_solve(x)|, failure when the deflection exceeds `limit`.
double lsf_truss(const TrussModel& model, std::span<const double> x, double limit = 0.11);

}  // namespace relhdmr::bench
