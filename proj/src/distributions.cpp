#include "relhdmr/distributions.hpp"

#include <cmath>
#include <string>

#include "relhdmr/error.hpp"
#include "relhdmr/rng.hpp"

namespace relhdmr {

std::string_view to_string(DistributionKind kind) noexcept {
  return kind == DistributionKind::Normal ? "normal" : "lognormal";
}

DistributionKind distribution_kind_from_string(std::string_view name) {
  if (name == "normal") return DistributionKind::Normal;
  if (name == "lognormal") return DistributionKind::Lognormal;
  throw ConfigError("unknown distribution kind '" + std::string(name) + "' (expected normal or lognormal)");
}

Distribution::Distribution(DistributionKind kind, double mean, double std) : kind_(kind), mean_(mean), std_(std) {
  if (!std::isfinite(mean) || !std::isfinite(std)) throw ConfigError("distribution parameters must be finite");
  if (!(std > 0.0)) throw ConfigError("distribution std must be > 0");
  if (kind == DistributionKind::Lognormal) {
    if (!(mean > 0.0)) throw ConfigError("lognormal mean must be > 0");
    const double cv = std / mean;
    log_sigma_ = std::sqrt(std::log1p(cv * cv));
    log_mu_ = std::log(mean) - 0.5 * log_sigma_ * log_sigma_;
  }
}

double Distribution::to_physical(double u) const noexcept {
  if (kind_ == DistributionKind::Normal) return mean_ + std_ * u;
  return std::exp(log_mu_ + log_sigma_ * u);
}

double Distribution::to_standard(double x) const noexcept {
  if (kind_ == DistributionKind::Normal) return (x - mean_) / std_;
  return (std::log(x) - log_mu_) / log_sigma_;
}

void to_physical(std::span<const double> u, std::span<const Distribution> dists, std::span<double> x) {
  if (u.size() != dists.size() || x.size() != dists.size())
    throw ConfigError("dimension mismatch: " + std::to_string(u.size()) + " coordinates for " +
                      std::to_string(dists.size()) + " distributions");
  for (std::size_t i = 0; i < u.size(); ++i) x[i] = dists[i].to_physical(u[i]);
}

std::vector<double> to_physical(std::span<const double> u, std::span<const Distribution> dists) {
  std::vector<double> x(u.size());
  to_physical(u, dists, x);
  return x;
}

std::vector<double> to_standard(std::span<const double> x, std::span<const Distribution> dists) {
  if (x.size() != dists.size())
    throw ConfigError("dimension mismatch: " + std::to_string(x.size()) + " coordinates for " +
                      std::to_string(dists.size()) + " distributions");
  std::vector<double> u(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) u[i] = dists[i].to_standard(x[i]);
  return u;
}

Eigen::MatrixXd sample_standard_normal(std::size_t n, std::size_t dim, std::uint64_t seed) {
  if (n == 0 || dim == 0) throw ConfigError("sample_standard_normal needs n >= 1 and dim >= 1");
  Eigen::MatrixXd out(n, dim);
  std::vector<double> row(dim);
  for (std::size_t k = 0; k < n; ++k) {
    standard_normal_sample(seed, k, row);
    for (std::size_t j = 0; j < dim; ++j) out(k, j) = row[j];
  }
  return out;
}

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace relhdmr
