#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace relhdmr {

enum class DistributionKind { Normal, Lognormal };

std::string_view to_string(DistributionKind kind) noexcept;
DistributionKind distribution_kind_from_string(std::string_view name);

/// Independent marginal of one physical input, parameterized by the mean and
/// standard deviation of the physical variable itself.
class Distribution {
 public:
  /// Throws ConfigError if std <= 0, or mean <= 0 for a lognormal.
  Distribution(DistributionKind kind, double mean, double std);

  static Distribution normal(double mean, double std) { return {DistributionKind::Normal, mean, std}; }
  static Distribution lognormal(double mean, double std) { return {DistributionKind::Lognormal, mean, std}; }

  DistributionKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  double std() const noexcept { return std_; }

  /// Log-space parameters of a lognormal (sigma_L, mu_L). Zero for normals.
  double log_sigma() const noexcept { return log_sigma_; }
  double log_mu() const noexcept { return log_mu_; }

  double to_physical(double u) const noexcept;
  double to_standard(double x) const noexcept;

  bool operator==(const Distribution&) const = default;

 private:
  DistributionKind kind_;
  double mean_;
  double std_;
  double log_sigma_ = 0.0;
  double log_mu_ = 0.0;
};

/// Component-wise U -> X map for independent marginals.
std::vector<double> to_physical(std::span<const double> u, std::span<const Distribution> dists);
void to_physical(std::span<const double> u, std::span<const Distribution> dists, std::span<double> x);

/// Exact inverse of to_physical.
std::vector<double> to_standard(std::span<const double> x, std::span<const Distribution> dists);

/// n x dim matrix of i.i.d. standard normals. Row k equals the k-th Monte
/// Carlo sample drawn by estimate_pf under the same seed.
Eigen::MatrixXd sample_standard_normal(std::size_t n, std::size_t dim, std::uint64_t seed);

/// Standard normal CDF.
double normal_cdf(double z) noexcept;

}  // namespace relhdmr
