#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace relhdmr::pso {

struct SwarmConfig {
  std::size_t n_swarm = 50;
  std::size_t n_iter = 50;
  double omega = 0.729;
  double c1 = 2.0;
  double c2 = 2.0;
  /// Per-component speed cap, in coordinate units.
  double v_max = 0.3;
  /// Read v_max as a fraction of each dimension's box width instead.
  bool v_max_relative = false;
  /// Fitness regularizer of F_fit = 1 / (F_obj + delta0). Minimizing F_obj
  /// ranks candidates identically, so the value is carried but unused.
  double delta0 = 1e-8;
  /// When > 0, initial positions are drawn uniformly in the ball of this
  /// radius about the origin (clipped to the bounds) instead of the box.
  double init_radius = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Bounds {
  std::vector<double> lo;
  std::vector<double> hi;

  static Bounds box(std::size_t dim, double lo, double hi);
  std::size_t dim() const noexcept { return lo.size(); }
  void validate() const;
};

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> pbest_position;
  double pbest_value;
};

struct Result {
  std::vector<double> x_best;
  double f_best;
  /// Best objective after each iteration; size == n_iter.
  std::vector<double> trace;
};

using Objective = std::function<double(std::span<const double>)>;

/// Called after every iteration with the swarm and the global best record.
using Observer = std::function<void(std::size_t iteration, std::span<const Particle> swarm,
                                    std::span<const double> gbest, double gbest_value)>;

/// Bounded global minimization. Non-finite objective values rank as +inf.
Result minimize(const Objective& objective, const Bounds& bounds, const SwarmConfig& config,
                const Observer& observer = {});

}  // namespace relhdmr::pso
