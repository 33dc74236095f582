#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "doctest.h"
#include "relhdmr/benchmarks.hpp"
#include "relhdmr/error.hpp"
#include "relhdmr/rng.hpp"

using namespace relhdmr;
using namespace relhdmr::bench;

namespace {

std::string data_file(const char* name) { return std::string(RELHDMR_SOURCE_DIR) + "/data/" + name; }

std::vector<double> truss10_means() { return {2e-3, 1e-3, 2.1e11, 2.1e11, 5e4, 5e4, 5e4, 5e4, 5e4, 5e4}; }

std::vector<double> truss30_means() {
  std::vector<double> x(11, 2e-3);
  x.insert(x.end(), 12, 1e-3);
  x.push_back(2.1e11);
  x.insert(x.end(), 6, 5e4);
  return x;
}

}  // namespace

TEST_CASE("three-variable function by direct arithmetic") {
  CHECK(lsf_example1(std::vector<double>{0, 0, 0}) == doctest::Approx(-1.1).epsilon(1e-15));
  CHECK(lsf_example1(std::vector<double>{0, 2, 0}) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(lsf_example1(std::vector<double>{std::numbers::pi / 2, 0, 3}) ==
        doctest::Approx(-3.0 + 0.2 * std::numbers::pi / 2 - 0.2).epsilon(1e-14));
  CHECK(lsf_example1(std::vector<double>{std::numbers::pi / 2, 0, 3}) == doctest::Approx(-2.8858).epsilon(1e-4));
}

TEST_CASE("linear function") {
  CHECK(lsf_linear(std::vector<double>(20, 0.0)) == doctest::Approx(15.6525).epsilon(1e-5));
  std::vector<double> x(20, 3.5 * std::sqrt(20.0) / 20.0);
  CHECK(std::abs(lsf_linear(x)) < 1e-12);
}

TEST_CASE("coupled function") {
  CHECK(lsf_coupled(std::vector<double>{1.0, std::sqrt(0.5)}, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(lsf_coupled(std::vector<double>(20, 3.41), 95000.0) > 0.0);
  // Larger residual |2 x_k^2 - x_{k-1}| lowers the value.
  std::vector<double> x(5, 1.0);
  const double base = lsf_coupled(x, 100.0);
  x[3] = 1.5;
  const double bigger = lsf_coupled(x, 100.0);
  CHECK(bigger < base);
}

TEST_CASE("explicit functions match independently coded expressions") {
  RandomStream rng(77);
  for (int k = 0; k < 500; ++k) {
    std::vector<double> x(6);
    for (auto& v : x) v = rng.uniform(-4.0, 4.0);
    const std::vector<double> x3(x.begin(), x.begin() + 3);
    const double e1 = 0.75 * x3[1] - 3.0 * std::sin(x3[0]) + 0.2 * x3[0] - 0.1 * (x3[2] - 3.0) * (x3[2] - 3.0) -
                      0.005 * x3[0] * x3[1] + 0.1 * x3[1] * x3[2] - 0.2;
    REQUIRE(lsf_example1(x3) == doctest::Approx(e1).epsilon(1e-12));
    double s = 0.0;
    for (double v : x) s += v;
    REQUIRE(lsf_linear(x) == doctest::Approx(3.5 * std::sqrt(6.0) - s).epsilon(1e-12));
    double c = 50.0 - (x[0] - 1.0) * (x[0] - 1.0);
    for (std::size_t i = 1; i < x.size(); ++i) c -= (i + 1.0) * std::pow(2.0 * x[i] * x[i] - x[i - 1], 2);
    REQUIRE(lsf_coupled(x, 50.0) == doctest::Approx(c).epsilon(1e-12));
  }
}

TEST_CASE("two-bar truss against the closed form") {
  // Apex at (0, h), supports at (+-b, 0): delta = P L / (2 E A sin^2 a).
  const double b = 3.0, h = 4.0, L = 5.0, sin_a = h / L, E = 2e11, A = 1e-3, P = 1e5;
  TrussModel m({{1, -b, 0.0}, {2, b, 0.0}, {3, 0.0, h}},
               {{1, 1, 3, Source{std::nullopt, A}, Source{std::nullopt, E}},
                {2, 2, 3, Source{std::nullopt, A}, Source{std::nullopt, E}}},
               {{1, true, true}, {2, true, true}}, {{3, Source{}, Source{std::nullopt, -P}}}, 3);
  const double expected = -P * L / (2.0 * E * A * sin_a * sin_a);
  CHECK(truss_solve(m, {}) == doctest::Approx(expected).epsilon(1e-12));
  const auto sol = truss_analyze(m, {});
  CHECK(sol.axial_forces[0] == doctest::Approx(-P / (2.0 * sin_a)).epsilon(1e-12));
}

TEST_CASE("bundled truss files") {
  const auto m10 = TrussModel::from_file(data_file("truss23_10var.json"));
  const auto m30 = TrussModel::from_file(data_file("truss23_30var.json"));
  CHECK(m10.elements().size() == 23);
  CHECK(m10.variable_count() == 10);
  CHECK(m30.variable_count() == 30);

  SUBCASE("mean-point deflection matches an independent stiffness solve") {
    const double anchor = -0.07783611624891222;
    CHECK(truss_solve(m10, truss10_means()) == doctest::Approx(anchor).epsilon(1e-10));
    CHECK(truss_solve(m30, truss30_means()) == doctest::Approx(anchor).epsilon(1e-10));
    CHECK(lsf_truss(m10, truss10_means()) > 0.0);
  }
  SUBCASE("symmetric loads give mirror-symmetric deflections") {
    const auto sol = truss_analyze(m10, truss10_means());
    for (auto [left, right] : {std::pair{2, 6}, std::pair{3, 5}, std::pair{8, 13}, std::pair{9, 12}}) {
      const double a = sol.displacements[2 * m10.node_index(left) + 1];
      const double c = sol.displacements[2 * m10.node_index(right) + 1];
      CHECK(std::abs(a - c) <= 1e-10 * std::abs(a));
    }
  }
  SUBCASE("linearity, scaling and energy") {
    RandomStream rng(5);
    for (int k = 0; k < 50; ++k) {
      auto x = truss30_means();
      for (auto& v : x) v *= rng.uniform(0.7, 1.3);
      const double d = truss_solve(m30, x);
      auto loads2 = x;
      for (std::size_t j = 24; j < 30; ++j) loads2[j] *= 2.0;
      CHECK(truss_solve(m30, loads2) == doctest::Approx(2.0 * d).epsilon(1e-12));
      auto e2 = x;
      e2[23] *= 2.0;
      CHECK(truss_solve(m30, e2) == doctest::Approx(0.5 * d).epsilon(1e-12));
      auto a2 = x;
      for (std::size_t j = 0; j < 23; ++j) a2[j] *= 2.0;
      CHECK(truss_solve(m30, a2) == doctest::Approx(0.5 * d).epsilon(1e-12));
      const auto sol = truss_analyze(m30, x);
      const double work = 0.5 * sol.loads.dot(sol.displacements);
      CHECK(std::abs(work - sol.strain_energy) <= 1e-8 * std::abs(sol.strain_energy));
    }
  }
}

TEST_CASE("truss input errors") {
  CHECK_THROWS_AS(TrussModel::from_json_text("{"), ConfigError);
  CHECK_THROWS_AS(TrussModel::from_file(data_file("missing.json")), ConfigError);
  // A mechanism: a single bar with one pin and no restraint on the free end.
  const std::string mech = R"({"nodes":[{"id":1,"x":0,"y":0},{"id":2,"x":1,"y":0}],
    "elements":[{"id":1,"a":1,"b":2,"area":{"const":1},"modulus":{"const":1}}],
    "supports":[{"node":1,"fix_x":true,"fix_y":true}],
    "loads":[{"node":2,"fy":{"const":-1}}],"monitor_node":2})";
  CHECK_THROWS_AS(truss_solve(TrussModel::from_json_text(mech), {}), StructuralError);
  const auto m = TrussModel::from_file(data_file("truss23_10var.json"));
  auto x = truss10_means();
  x[0] = -1.0;
  CHECK_THROWS_AS(truss_solve(m, x), ConfigError);
}
