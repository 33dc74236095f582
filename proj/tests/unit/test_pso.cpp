#include <cmath>
#include <vector>

#include "doctest.h"
#include "relhdmr/error.hpp"
#include "relhdmr/pso.hpp"

using namespace relhdmr;

namespace {

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

}  // namespace

TEST_CASE("sphere in [-6, 6]^2 converges in at least 99 of 100 seeded trials") {
  int passing = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    pso::SwarmConfig cfg;
    cfg.seed = seed;
    const auto r = pso::minimize(sphere, pso::Bounds::box(2, -6.0, 6.0), cfg);
    if (r.f_best < 1e-3) ++passing;
  }
  CHECK(passing >= 99);
}

TEST_CASE("flat objective") {
  pso::SwarmConfig cfg;
  cfg.seed = 3;
  const auto b = pso::Bounds::box(3, -1.0, 2.0);
  const auto r = pso::minimize([](std::span<const double>) { return 5.0; }, b, cfg);
  CHECK(r.f_best == 5.0);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(r.x_best[j] >= b.lo[j]);
    CHECK(r.x_best[j] <= b.hi[j]);
  }
}

TEST_CASE("same seed gives identical results") {
  pso::SwarmConfig cfg;
  cfg.seed = 12;
  const auto f = [](std::span<const double> x) { return std::sin(3.0 * x[0]) + std::cos(2.0 * x[1]) + 0.1 * x[2]; };
  const auto b = pso::Bounds::box(3, -6.0, 6.0);
  const auto a = pso::minimize(f, b, cfg);
  const auto c = pso::minimize(f, b, cfg);
  CHECK(a.x_best == c.x_best);
  CHECK(a.f_best == c.f_best);
  CHECK(a.trace == c.trace);
}

TEST_CASE("trace, feasibility and global best by enumeration") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (double init_radius : {0.0, 2.5}) {
      pso::SwarmConfig cfg;
      cfg.seed = seed;
      cfg.n_swarm = 15;
      cfg.n_iter = 40;
      cfg.init_radius = init_radius;
      pso::Bounds b{{-1.0, -6.0, 0.0, -3.0}, {4.0, 6.0, 0.5, 3.0}};
      const auto f = [](std::span<const double> x) {
        return std::abs(x[0] - 3.0) + std::pow(x[1] + 5.0, 2) + std::cos(7.0 * x[2]) + std::abs(x[3] * x[0]);
      };
      bool feasible = true, gbest_ok = true;
      const auto r = pso::minimize(f, b, cfg,
                                   [&](std::size_t, std::span<const pso::Particle> swarm,
                                       std::span<const double> gbest, double gbest_value) {
                                     double best = swarm[0].pbest_value;
                                     for (const auto& p : swarm) {
                                       best = std::min(best, p.pbest_value);
                                       for (std::size_t j = 0; j < b.dim(); ++j)
                                         feasible = feasible && p.position[j] >= b.lo[j] && p.position[j] <= b.hi[j];
                                     }
                                     gbest_ok = gbest_ok && gbest_value == best && f(gbest) == gbest_value;
                                   });
      CHECK(feasible);
      CHECK(gbest_ok);
      REQUIRE(r.trace.size() == cfg.n_iter);
      for (std::size_t k = 1; k < r.trace.size(); ++k) CHECK(r.trace[k] <= r.trace[k - 1]);
      CHECK(r.f_best == r.trace.back());
    }
  }
}

TEST_CASE("non-finite objective values rank last") {
  pso::SwarmConfig cfg;
  cfg.seed = 1;
  const auto r = pso::minimize(
      [](std::span<const double> x) { return x[0] < 0.0 ? std::nan("") : x[0]; }, pso::Bounds::box(1, -6.0, 6.0), cfg);
  CHECK(std::isfinite(r.f_best));
  CHECK(r.x_best[0] >= 0.0);
}

TEST_CASE("configuration validation") {
  pso::SwarmConfig cfg;
  cfg.n_swarm = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.v_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  pso::Bounds b{{0.0}, {0.0}};
  CHECK_THROWS_AS(b.validate(), ConfigError);
}
