#include <cmath>
#include <functional>
#include <vector>

#include "doctest.h"
#include "relhdmr/benchmarks.hpp"
#include "relhdmr/hdmr.hpp"
#include "relhdmr/rng.hpp"

using namespace relhdmr;

namespace {

using Fn = std::function<double(std::span<const double>)>;

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int k = 0; k < n; ++k) g.push_back(lo + (hi - lo) * k / (n - 1));
  return g;
}

// Kriging model of f restricted to the cut line/plane of `vars`, sampled on a tensor grid.
SubSurrogate fit_sub(const Fn& f, std::vector<std::size_t> vars, const std::vector<double>& cut,
                     const std::vector<double>& nodes, std::uint64_t seed) {
  const std::size_t m = vars.size() == 1 ? nodes.size() : nodes.size() * nodes.size();
  Eigen::MatrixXd x(m, vars.size());
  Eigen::VectorXd y(m);
  std::size_t r = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = 0; b < (vars.size() == 1 ? 1 : nodes.size()); ++b, ++r) {
      std::vector<double> full = cut;
      full[vars[0]] = x(r, 0) = nodes[a];
      if (vars.size() == 2) full[vars[1]] = x(r, 1) = nodes[b];
      y(r) = f(full);
    }
  }
  return SubSurrogate(vars, KrigingModel::fit(DoeSet(x, y), seed));
}

CompositeSurrogate first_order_composite(const Fn& f, std::size_t n, const std::vector<double>& nodes) {
  const std::vector<double> cut(n, 0.0);
  std::vector<SubSurrogate> lines;
  for (std::size_t i = 0; i < n; ++i) lines.push_back(fit_sub(f, {i}, cut, nodes, 10 + i));
  return CompositeSurrogate(cut, f(cut), std::move(lines));
}

}  // namespace

TEST_CASE("embed_point substitutes the sub-model slots") {
  const std::vector<double> cut{0.0, 0.0, 0.0};
  const auto line = fit_sub([](std::span<const double> u) { return u[1]; }, {1}, cut, grid(-6, 6, 3), 1);
  CHECK(embed_point(line, std::vector<double>{5.0}, cut) == std::vector<double>{0.0, 5.0, 0.0});
  const auto plane = fit_sub([](std::span<const double> u) { return u[0] + u[2]; }, {0, 2}, cut, grid(-6, 6, 3), 1);
  CHECK(embed_point(plane, std::vector<double>{1.5, -2.0}, cut) == std::vector<double>{1.5, 0.0, -2.0});
  const std::vector<double> c2{0.3, -0.4, 2.0};
  CHECK(embed_point(plane, std::vector<double>{0.3, 2.0}, c2) == c2);
}

TEST_CASE("sub-model identifiers") {
  const std::vector<double> cut(12, 0.0);
  const Fn f = [](std::span<const double> u) { return u[0]; };
  CHECK(fit_sub(f, {2}, cut, grid(-6, 6, 3), 1).id() == "G3");
  CHECK(fit_sub(f, {0, 1}, cut, grid(-6, 6, 3), 1).id() == "G12");
  CHECK(fit_sub(f, {3, 10}, cut, grid(-6, 6, 3), 1).id() == "G4_11");
}

TEST_CASE("composite equals g0 at the cut point") {
  const Fn f = [](std::span<const double> u) { return bench::lsf_example1(u); };
  auto cs = first_order_composite(f, 3, grid(-6, 6, 7));
  const std::vector<double> cut{0.0, 0.0, 0.0};
  cs.add_pair(fit_sub(f, {0, 1}, cut, grid(-6, 6, 5), 3));
  cs.add_pair(fit_sub(f, {1, 2}, cut, grid(-6, 6, 5), 4));
  CHECK(std::abs(cs.predict(cut) - cs.g0()) <= 1e-8);
  CHECK(cs.g0() == doctest::Approx(-1.1).epsilon(1e-14));
}

TEST_CASE("additive functions are reproduced at first order") {
  const Fn f = [](std::span<const double> u) {
    return 2.0 + 0.5 * u[0] - 1.5 * u[1] + 0.25 * u[2] * u[2] + std::sin(u[3]);
  };
  const auto nodes = grid(-6, 6, 13);
  const auto cs = first_order_composite(f, 4, nodes);
  RandomStream rng(8);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> u(4);
    for (auto& v : u) v = rng.uniform(-6.0, 6.0);
    REQUIRE(std::abs(cs.predict(u) - f(u)) < 1e-3);
  }
  // At grid nodes every projection is a DoE point, so agreement is to rounding.
  for (int k = 0; k < 200; ++k) {
    std::vector<double> u(4);
    for (auto& v : u) v = nodes[static_cast<std::size_t>(rng.uniform() * nodes.size())];
    REQUIRE(std::abs(cs.predict(u) - f(u)) < 1e-7);
  }
}

TEST_CASE("second-order composite is exact for a bivariate polynomial") {
  const Fn f = [](std::span<const double> u) {
    return 1.0 + 2.0 * u[0] - u[1] * u[1] + 0.5 * u[0] * u[1] + 0.3 * u[0] * u[0] * u[1] + 0.7 * u[2];
  };
  const auto nodes = grid(-3, 3, 7);
  auto cs = first_order_composite(f, 3, nodes);
  cs.add_pair(fit_sub(f, {0, 1}, {0.0, 0.0, 0.0}, nodes, 21));
  for (double a : nodes)
    for (double b : nodes)
      for (double c : nodes) {
        const std::vector<double> u{a, b, c};
        REQUIRE(std::abs(cs.predict(u) - f(u)) < 1e-7);
      }
}

TEST_CASE("sigma_bar is the enumerated maximum") {
  const Fn f = [](std::span<const double> u) { return std::cos(u[0]) * u[1] + u[2] * u[2] - u[3]; };
  const std::vector<double> cut(4, 0.0);
  auto cs = first_order_composite(f, 4, grid(-6, 6, 4));
  cs.add_pair(fit_sub(f, {0, 1}, cut, grid(-6, 6, 3), 5));
  cs.add_pair(fit_sub(f, {2, 3}, cut, grid(-6, 6, 3), 6));
  RandomStream rng(31);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> u(4);
    for (auto& v : u) v = rng.uniform(-6.0, 6.0);
    double best = -1.0;
    SubModelRef which{0, 0};
    for (const auto& ref : cs.all_refs()) {
      const double s = cs.submodel(ref).model.predict_std(cs.project(ref, u));
      if (s > best) {
        best = s;
        which = ref;
      }
    }
    const auto sb = cs.sigma_bar(u);
    REQUIRE(sb.value == best);
    REQUIRE(sb.which == which);
  }
  // Every projection on a DoE point: each variance is at nugget level.
  const std::vector<double> on{-6.0, 6.0, -6.0, 6.0};
  double bound = 0.0;
  for (const auto& ref : cs.all_refs()) {
    const auto& m = cs.submodel(ref).model;
    bound = std::max(bound, std::sqrt(10.0 * m.nugget() * m.sigma2()));
  }
  CHECK(cs.sigma_bar(on).value <= bound);
}

TEST_CASE("sigma_bar of a single sub-model is that model's std") {
  const Fn f = [](std::span<const double> u) { return u[0] * u[0]; };
  const auto cs = first_order_composite(f, 1, grid(-6, 6, 4));
  for (double v = -6.0; v <= 6.0; v += 0.5) {
    const std::vector<double> u{v};
    CHECK(cs.sigma_bar(u).value == cs.first_order()[0].model.predict_std(u));
  }
}

TEST_CASE("coupling index") {
  SUBCASE("vanishes for additive functions") {
    const Fn f = [](std::span<const double> u) { return 3.5 + u[0] + 0.5 * u[1] - 0.2 * u[2]; };
    const auto cs = first_order_composite(f, 3, grid(-6, 6, 13));
    LsfHandle lsf([&](std::span<const double> x) { return f(x); },
                  std::vector<Distribution>(3, Distribution::normal(0.0, 1.0)));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = i + 1; j < 3; ++j) {
        CHECK(std::abs(coupling_index(lsf, cs, i, j, 2.0)) < 1e-3);
        CHECK(std::abs(coupling_index(lsf, cs, i, j, 2.0, ProbeSign::Minus)) < 1e-3);
      }
    CHECK(lsf.calls() == 6);
  }
  SUBCASE("adjacent pairs dominate for the chained function") {
    const std::size_t n = 6;
    const Fn f = [](std::span<const double> u) {
      std::vector<double> x(u.size());
      for (std::size_t k = 0; k < u.size(); ++k) x[k] = 3.41 + 0.2 * u[k];
      return bench::lsf_coupled(x, 95000.0);
    };
    const auto cs = first_order_composite(f, n, grid(-6, 6, 25));
    LsfHandle lsf([&](std::span<const double> x) { return f(x); },
                  std::vector<Distribution>(n, Distribution::normal(0.0, 1.0)));
    double min_adjacent = 1e300, max_other = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = std::abs(coupling_index(lsf, cs, i, j, 2.0));
        if (j == i + 1) min_adjacent = std::min(min_adjacent, c);
        else max_other = std::max(max_other, c);
      }
    CHECK(min_adjacent > max_other);
  }
}
