#include "relhdmr/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "relhdmr/error.hpp"
#include "relhdmr/rng.hpp"

namespace relhdmr::pso {

void SwarmConfig::validate() const {
  if (n_swarm < 2) throw ConfigError("must be >= 2", "pso.n_swarm");
  if (n_iter < 1) throw ConfigError("must be >= 1", "pso.n_iter");
  if (!(omega > 0.0 && omega < 1.0)) throw ConfigError("must lie in (0, 1)", "pso.omega");
  if (!(v_max > 0.0)) throw ConfigError("must be > 0", "pso.v_max");
  if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw ConfigError("learning factors must be >= 0", "pso.c1");
  if (!(init_radius >= 0.0)) throw ConfigError("must be >= 0", "pso.init_radius");
}

Bounds Bounds::box(std::size_t dim, double lo, double hi) {
  return {std::vector<double>(dim, lo), std::vector<double>(dim, hi)};
}

void Bounds::validate() const {
  if (lo.empty() || lo.size() != hi.size()) throw ConfigError("bounds must be non-empty with matching lo/hi sizes");
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (!std::isfinite(lo[j]) || !std::isfinite(hi[j]) || !(lo[j] < hi[j]))
      throw ConfigError("invalid bounds in dimension " + std::to_string(j) + ": need finite lo < hi");
  }
}

namespace {

double evaluate(const Objective& f, std::span<const double> x) {
  const double v = f(x);
  return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
}

std::size_t best_index(std::span<const Particle> swarm) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < swarm.size(); ++i)
    if (swarm[i].pbest_value < swarm[best].pbest_value) best = i;
  return best;
}

}  // namespace

Result minimize(const Objective& objective, const Bounds& bounds, const SwarmConfig& config,
                const Observer& observer) {
  config.validate();
  bounds.validate();
  const std::size_t dim = bounds.dim();

  std::vector<double> vcap(dim);
  for (std::size_t j = 0; j < dim; ++j)
    vcap[j] = config.v_max_relative ? config.v_max * (bounds.hi[j] - bounds.lo[j]) : config.v_max;

  RandomStream rng(config.seed);
  std::vector<Particle> swarm(config.n_swarm);
  for (auto& p : swarm) {
    p.position.resize(dim);
    p.velocity.resize(dim);
    if (config.init_radius > 0.0) {
      // Uniform in the ball: Gaussian direction, radius r * U^(1/d).
      double norm2 = 0.0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double a = 1.0 - rng.uniform();
        const double b = rng.uniform();
        p.position[j] = std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * std::numbers::pi * b);
        norm2 += p.position[j] * p.position[j];
      }
      const double r = config.init_radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
      const double scale = norm2 > 0.0 ? r / std::sqrt(norm2) : 0.0;
      for (std::size_t j = 0; j < dim; ++j)
        p.position[j] = std::clamp(p.position[j] * scale, bounds.lo[j], bounds.hi[j]);
    } else {
      for (std::size_t j = 0; j < dim; ++j) p.position[j] = rng.uniform(bounds.lo[j], bounds.hi[j]);
    }
    for (std::size_t j = 0; j < dim; ++j) p.velocity[j] = rng.uniform(-vcap[j], vcap[j]);
  }
  for (auto& p : swarm) {
    p.pbest_position = p.position;
    p.pbest_value = evaluate(objective, p.position);
  }

  std::size_t g = best_index(swarm);
  std::vector<double> gbest = swarm[g].pbest_position;
  double gbest_value = swarm[g].pbest_value;

  Result result;
  result.trace.reserve(config.n_iter);
  for (std::size_t it = 0; it < config.n_iter; ++it) {
    // All random draws for this iteration happen here, before any evaluation.
    for (auto& p : swarm) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double r1 = rng.uniform();
        const double r2 = rng.uniform();
        double v = config.omega * p.velocity[j] + config.c1 * r1 * (p.pbest_position[j] - p.position[j]) +
                   config.c2 * r2 * (gbest[j] - p.position[j]);
        v = std::clamp(v, -vcap[j], vcap[j]);
        double x = p.position[j] + v;
        if (x < bounds.lo[j] || x > bounds.hi[j]) {
          x = std::clamp(x, bounds.lo[j], bounds.hi[j]);
          v = 0.0;
        }
        p.position[j] = x;
        p.velocity[j] = v;
      }
    }
    for (auto& p : swarm) {
      const double f = evaluate(objective, p.position);
      if (f < p.pbest_value) {
        p.pbest_value = f;
        p.pbest_position = p.position;
      }
    }
    g = best_index(swarm);
    if (swarm[g].pbest_value < gbest_value) {
      gbest = swarm[g].pbest_position;
      gbest_value = swarm[g].pbest_value;
    }
    result.trace.push_back(gbest_value);
    if (observer) observer(it, swarm, gbest, gbest_value);
  }

  result.x_best = std::move(gbest);
  result.f_best = gbest_value;
  return result;
}

}  // namespace relhdmr::pso
