#include "relhdmr/kriging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include <Eigen/Cholesky>

#include "relhdmr/error.hpp"

namespace relhdmr {

DoeSet::DoeSet(const Eigen::MatrixXd& points, const Eigen::VectorXd& responses)
    : dim_(static_cast<std::size_t>(points.cols())) {
  if (points.rows() != responses.size()) throw ConfigError("DoE points and responses differ in length");
  if (points.rows() < 2) throw ConfigError("a DoE needs at least 2 samples");
  if (dim_ == 0) throw ConfigError("DoE points must have at least one coordinate");
  points_.reserve(points.size());
  responses_.reserve(responses.size());
  std::vector<double> row(dim_);
  for (Eigen::Index k = 0; k < points.rows(); ++k) {
    for (std::size_t j = 0; j < dim_; ++j) row[j] = points(k, static_cast<Eigen::Index>(j));
    append(row, responses(k));
  }
}

Eigen::MatrixXd DoeSet::points_matrix() const {
  Eigen::MatrixXd out(size(), dim_);
  for (std::size_t k = 0; k < size(); ++k)
    for (std::size_t j = 0; j < dim_; ++j) out(k, j) = points_[k * dim_ + j];
  return out;
}

double DoeSet::min_response() const { return *std::min_element(responses_.begin(), responses_.end()); }
double DoeSet::max_response() const { return *std::max_element(responses_.begin(), responses_.end()); }

bool DoeSet::contains_near(std::span<const double> p) const {
  for (std::size_t k = 0; k < size(); ++k) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < dim_; ++j) {
      const double d = points_[k * dim_ + j] - p[j];
      d2 += d * d;
    }
    if (d2 < kMinSeparation * kMinSeparation) return true;
  }
  return false;
}

void DoeSet::append(std::span<const double> p, double response) {
  if (p.size() != dim_) throw ConfigError("DoE point has wrong dimension");
  for (double v : p)
    if (!std::isfinite(v)) throw ConfigError("DoE point has a non-finite coordinate");
  if (!std::isfinite(response)) throw ConfigError("DoE response is not finite");
  if (contains_near(p)) throw ConfigError("DoE point duplicates an existing sample");
  points_.insert(points_.end(), p.begin(), p.end());
  responses_.push_back(response);
}

double correlation(std::span<const double> theta, std::span<const double> xi, std::span<const double> xj) {
  if (theta.size() != xi.size() || xi.size() != xj.size())
    throw ConfigError("correlation: dimension mismatch");
  double s = 0.0;
  for (std::size_t d = 0; d < theta.size(); ++d) {
    const double diff = xi[d] - xj[d];
    s += theta[d] * diff * diff;
  }
  return std::exp(-s);
}

namespace {

struct Factorization {
  Eigen::MatrixXd r;  // without nugget
  Eigen::LLT<Eigen::MatrixXd> llt;
  double nugget;
};

std::optional<Factorization> factorize(const DoeSet& doe, std::span<const double> theta,
                                       const KrigingFitOptions& opt) {
  const auto m = static_cast<Eigen::Index>(doe.size());
  Eigen::MatrixXd r(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double c = correlation(theta, doe.point(i), doe.point(j));
      r(i, j) = c;
      r(j, i) = c;
    }
  }
  double nugget = opt.nugget_start;
  while (nugget <= opt.nugget_max * (1.0 + 1e-9)) {
    Eigen::MatrixXd a = r;
    a.diagonal().array() += nugget;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success && (llt.matrixLLT().diagonal().array() > 0.0).all())
      return Factorization{std::move(r), std::move(llt), nugget};
    nugget *= 10.0;
  }
  return std::nullopt;
}

struct Estimates {
  double beta;
  double sigma2;
  double log_det;
  Eigen::VectorXd weights;
  Eigen::VectorXd rinv_one;
  double one_rinv_one;
};

// Solves R x = b using the regularized factor as preconditioner, which
// removes the nugget's bias wherever R itself is well enough conditioned.
Eigen::VectorXd refined_solve(const Factorization& f, const Eigen::VectorXd& b) {
  constexpr int kMaxSteps = 30;
  Eigen::VectorXd x = f.llt.solve(b);
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kMaxSteps; ++k) {
    const Eigen::VectorXd res = b - f.r * x;
    const double norm = res.cwiseAbs().maxCoeff();
    if (!(norm < prev) || norm <= 1e-15 * b.cwiseAbs().maxCoeff()) break;
    prev = norm;
    x += f.llt.solve(res);
  }
  return x;
}

Estimates estimate(const Factorization& f, std::span<const double> responses) {
  const auto m = static_cast<Eigen::Index>(responses.size());
  const Eigen::Map<const Eigen::VectorXd> y(responses.data(), m);
  Estimates e;
  e.rinv_one = refined_solve(f, Eigen::VectorXd::Ones(m));
  e.one_rinv_one = e.rinv_one.sum();
  e.beta = e.rinv_one.dot(y) / e.one_rinv_one;
  const Eigen::VectorXd resid = y.array() - e.beta;
  e.weights = refined_solve(f, resid);
  e.sigma2 = std::max(0.0, resid.dot(e.weights) / static_cast<double>(m));
  e.log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();
  return e;
}

// Sample standard deviation per coordinate; 1 where it vanishes.
std::vector<double> standardizing_scale(const DoeSet& doe, bool enabled) {
  std::vector<double> scale(doe.dim(), 1.0);
  if (!enabled) return scale;
  const std::size_t m = doe.size();
  for (std::size_t j = 0; j < doe.dim(); ++j) {
    double mean = 0.0;
    for (std::size_t k = 0; k < m; ++k) mean += doe.point(k)[j];
    mean /= static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t k = 0; k < m; ++k) ss += (doe.point(k)[j] - mean) * (doe.point(k)[j] - mean);
    const double sd = std::sqrt(ss / static_cast<double>(m - 1));
    if (sd > 0.0) scale[j] = sd;
  }
  return scale;
}

std::vector<double> effective(std::span<const double> theta, std::span<const double> scale) {
  std::vector<double> out(theta.size());
  for (std::size_t j = 0; j < theta.size(); ++j) out[j] = theta[j] / (scale[j] * scale[j]);
  return out;
}

std::vector<double> to_theta(std::span<const double> log10_theta) {
  std::vector<double> theta(log10_theta.size());
  std::transform(log10_theta.begin(), log10_theta.end(), theta.begin(), [](double z) { return std::pow(10.0, z); });
  return theta;
}

// Largest mean error at the DoE points relative to max |response|.
bool interpolates(const Factorization& f, const Estimates& e, const DoeSet& doe, double tol) {
  if (tol <= 0.0) return true;
  const auto m = static_cast<Eigen::Index>(doe.size());
  const Eigen::Map<const Eigen::VectorXd> y(doe.responses().data(), m);
  const double scale = y.cwiseAbs().maxCoeff();
  const double err = (f.r * e.weights + Eigen::VectorXd::Constant(m, e.beta) - y).cwiseAbs().maxCoeff();
  return err <= tol * scale;
}

double psi(const DoeSet& doe, std::span<const double> eff_theta, const KrigingFitOptions& options) {
  const auto f = factorize(doe, eff_theta, options);
  if (!f) return std::numeric_limits<double>::infinity();
  const Estimates e = estimate(*f, doe.responses());
  if (!interpolates(*f, e, doe, options.interpolation_tol)) return std::numeric_limits<double>::infinity();
  if (e.sigma2 == 0.0) return 0.0;
  const double v = std::exp(e.log_det / static_cast<double>(doe.size())) * e.sigma2;
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

}  // namespace

double KrigingModel::likelihood_objective(const DoeSet& doe, std::span<const double> theta,
                                          const KrigingFitOptions& options) {
  return psi(doe, effective(theta, standardizing_scale(doe, options.standardize_inputs)), options);
}

KrigingModel KrigingModel::fit(DoeSet doe, std::uint64_t seed, const KrigingFitOptions& options) {
  const std::size_t d = doe.dim();
  pso::SwarmConfig search;
  search.n_swarm = options.search_swarm;
  search.n_iter = options.search_iterations;
  search.seed = seed;
  const auto bounds = pso::Bounds::box(d, options.log10_theta_lo, options.log10_theta_hi);
  const auto scale = standardizing_scale(doe, options.standardize_inputs);
  const auto search_with = [&](const KrigingFitOptions& o) {
    return pso::minimize([&](std::span<const double> z) { return psi(doe, effective(to_theta(z), scale), o); },
                         bounds, search);
  };
  auto result = search_with(options);
  if (!std::isfinite(result.f_best) && options.interpolation_tol > 0.0) {
    KrigingFitOptions relaxed = options;
    relaxed.interpolation_tol = 0.0;
    result = search_with(relaxed);
  }
  if (!std::isfinite(result.f_best))
    throw ModelFitError("Kriging fit failed: no theta in the search box gives a factorizable correlation matrix");
  return at_theta(std::move(doe), to_theta(result.x_best), options);
}

KrigingModel KrigingModel::at_theta(DoeSet doe, std::vector<double> theta, const KrigingFitOptions& options) {
  if (theta.size() != doe.dim()) throw ConfigError("theta has wrong dimension");
  for (double t : theta)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("theta components must be positive and finite");
  auto scale = standardizing_scale(doe, options.standardize_inputs);
  auto eff = effective(theta, scale);
  const auto f = factorize(doe, eff, options);
  if (!f)
    throw ModelFitError("correlation matrix is not positive definite with nugget up to " +
                        std::to_string(options.nugget_max));
  const Estimates e = estimate(*f, doe.responses());
  if (!std::isfinite(e.beta) || !std::isfinite(e.sigma2) || !std::isfinite(e.log_det))
    throw ModelFitError("non-finite Kriging likelihood estimates");

  KrigingModel model(std::move(doe));
  const std::size_t m = model.doe_.size();
  model.theta_ = std::move(theta);
  model.eff_theta_ = std::move(eff);
  model.scale_ = std::move(scale);
  model.beta_ = e.beta;
  model.sigma2_ = e.sigma2;
  model.nugget_ = f->nugget;
  model.weights_.assign(e.weights.data(), e.weights.data() + m);
  model.rinv_one_.assign(e.rinv_one.data(), e.rinv_one.data() + m);
  model.one_rinv_one_ = e.one_rinv_one;
  const Eigen::MatrixXd l = f->llt.matrixL();
  model.chol_.resize(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) model.chol_[i * m + j] = l(i, j);
  return model;
}

Eigen::MatrixXd KrigingModel::chol() const {
  const std::size_t m = doe_.size();
  Eigen::MatrixXd l(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) l(i, j) = chol_[i * m + j];
  return l;
}

double KrigingModel::predict_mean(std::span<const double> x) const {
  const std::size_t m = doe_.size();
  const std::size_t d = doe_.dim();
  const double* pts = doe_.flat_points().data();
  double mean = beta_;
  for (std::size_t k = 0; k < m; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - pts[k * d + j];
      s += eff_theta_[j] * diff * diff;
    }
    mean += weights_[k] * std::exp(-s);
  }
  return mean;
}

KrigingPrediction KrigingModel::predict(std::span<const double> x) const {
  const std::size_t m = doe_.size();
  const std::size_t d = doe_.dim();
  const double* pts = doe_.flat_points().data();
  // Small fixed-size scratch keeps the hot path allocation-free for typical DoEs.
  constexpr std::size_t kStack = 64;
  double stack_r[kStack];
  double stack_s[kStack];
  std::vector<double> heap;
  double* r = stack_r;
  double* s = stack_s;
  if (m > kStack) {
    heap.resize(2 * m);
    r = heap.data();
    s = heap.data() + m;
  }

  double mean = beta_;
  double u = -1.0;
  for (std::size_t k = 0; k < m; ++k) {
    double q = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = x[j] - pts[k * d + j];
      q += eff_theta_[j] * diff * diff;
    }
    r[k] = std::exp(-q);
    mean += weights_[k] * r[k];
    u += rinv_one_[k] * r[k];
  }
  // Forward substitution L s = r gives r^T R^-1 r = s^T s.
  double rr = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double acc = r[i];
    const double* row = chol_.data() + i * m;
    for (std::size_t j = 0; j < i; ++j) acc -= row[j] * s[j];
    s[i] = acc / row[i];
    rr += s[i] * s[i];
  }
  const double var = sigma2_ * (1.0 - rr + u * u / one_rinv_one_);
  return {mean, std::max(0.0, var)};
}

double KrigingModel::predict_std(std::span<const double> x) const { return std::sqrt(predict(x).variance); }

}  // namespace relhdmr
