#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "relhdmr/pso.hpp"

namespace relhdmr {

/// Design of experiments: m points in a d-dimensional subspace with their
/// limit-state responses. Rows are pairwise at least `kMinSeparation` apart.
class DoeSet {
 public:
  static constexpr double kMinSeparation = 1e-6;

  /// Validates m >= 2, finiteness and the duplicate guard.
  DoeSet(const Eigen::MatrixXd& points, const Eigen::VectorXd& responses);

  std::size_t size() const noexcept { return responses_.size(); }
  std::size_t dim() const noexcept { return dim_; }

  std::span<const double> point(std::size_t k) const noexcept { return {points_.data() + k * dim_, dim_}; }
  double response(std::size_t k) const noexcept { return responses_[k]; }
  std::span<const double> responses() const noexcept { return responses_; }
  /// Row-major m x d coordinates.
  std::span<const double> flat_points() const noexcept { return points_; }

  Eigen::MatrixXd points_matrix() const;

  double min_response() const;
  double max_response() const;

  /// True when some stored point lies closer than kMinSeparation to `p`.
  bool contains_near(std::span<const double> p) const;

  /// Appends a sample; throws ConfigError on a duplicate or non-finite value.
  void append(std::span<const double> p, double response);

 private:
  std::size_t dim_;
  std::vector<double> points_;
  std::vector<double> responses_;
};

/// Product Gaussian correlation prod_d exp(-theta_d (xi_d - xj_d)^2).
double correlation(std::span<const double> theta, std::span<const double> xi, std::span<const double> xj);

struct KrigingPrediction {
  double mean;
  double variance;
};

struct KrigingFitOptions {
  /// Search runs on log10(theta) over [log10_theta_lo, log10_theta_hi]^d.
  double log10_theta_lo = -2.5;
  double log10_theta_hi = 2.0;
  std::size_t search_swarm = 30;
  std::size_t search_iterations = 50;
  double nugget_start = 1e-10;
  double nugget_max = 1e-6;
  /// Measure distances in units of the DoE's per-coordinate standard
  /// deviation; theta then refers to the standardized coordinates.
  bool standardize_inputs = true;
  /// The search rejects theta whose nugget shifts the mean at a DoE point by
  /// more than this fraction of max |response|; 0 disables the check. When no
  /// theta in the box qualifies the unconstrained optimum is used.
  double interpolation_tol = 1e-10;
};

/// Ordinary Kriging (constant trend) over a DoeSet. Immutable once built;
/// prediction is safe to call concurrently.
class KrigingModel {
 public:
  /// Maximum-likelihood fit: theta minimizes det(R)^(1/m) * sigma2(theta).
  static KrigingModel fit(DoeSet doe, std::uint64_t seed, const KrigingFitOptions& options = {});

  /// Builds the predictor at a fixed theta (no search).
  static KrigingModel at_theta(DoeSet doe, std::vector<double> theta, const KrigingFitOptions& options = {});

  /// The concentrated-likelihood objective det(R)^(1/m) * sigma2 at theta;
  /// +inf when R cannot be factorized within the nugget budget or the
  /// interpolation tolerance is violated.
  static double likelihood_objective(const DoeSet& doe, std::span<const double> theta,
                                     const KrigingFitOptions& options = {});

  KrigingPrediction predict(std::span<const double> x) const;
  double predict_mean(std::span<const double> x) const;
  double predict_std(std::span<const double> x) const;

  const DoeSet& doe() const noexcept { return doe_; }
  std::size_t dim() const noexcept { return doe_.dim(); }
  /// Hyperparameters as searched (standardized coordinates when enabled).
  std::span<const double> theta() const noexcept { return theta_; }
  /// theta / scale^2: the decay applied to raw coordinate differences.
  std::span<const double> effective_theta() const noexcept { return eff_theta_; }
  /// Per-coordinate length unit of the standardization (1 when disabled).
  std::span<const double> input_scale() const noexcept { return scale_; }
  double beta() const noexcept { return beta_; }
  double sigma2() const noexcept { return sigma2_; }
  double nugget() const noexcept { return nugget_; }
  /// Lower Cholesky factor of R + nugget * I.
  Eigen::MatrixXd chol() const;

 private:
  explicit KrigingModel(DoeSet doe) : doe_(std::move(doe)) {}

  DoeSet doe_;
  std::vector<double> theta_;
  std::vector<double> eff_theta_;
  std::vector<double> scale_;
  double beta_ = 0.0;
  double sigma2_ = 0.0;
  double nugget_ = 0.0;
  std::vector<double> chol_;       // row-major m x m, lower
  std::vector<double> weights_;    // R^-1 (Y - beta 1)
  std::vector<double> rinv_one_;   // R^-1 1
  double one_rinv_one_ = 0.0;
};

}  // namespace relhdmr
