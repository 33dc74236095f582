#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relhdmr/benchmarks.hpp"
#include "relhdmr/error.hpp"
#include "relhdmr/examples.hpp"
#include "relhdmr/kriging.hpp"
#include "relhdmr/mcs.hpp"
#include "relhdmr/report.hpp"

namespace py = pybind11;
using namespace relhdmr;

namespace {

std::string run_text(const std::string& config, const std::string& base_dir) {
  BatchReport report;
  {
    py::gil_scoped_release release;
    report = run_batch(ProblemDefinition::from_json_text(config, base_dir));
  }
  return report_json(report).dump();
}

Distribution make_distribution(const std::string& kind, double mean, double sd) {
  return Distribution(distribution_kind_from_string(kind), mean, sd);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = RELHDMR_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def("data_dir", [] { return std::string(RELHDMR_DATA_DIR); });
  m.def("example_config", [](const std::string& name, std::size_t nd) { return example_config(name, nd).dump(); },
        py::arg("name"), py::arg("nd") = 0);
  m.def("run", &run_text, py::arg("config"), py::arg("base_dir") = "");

  m.def("lsf_example1", [](std::vector<double> x) { return bench::lsf_example1(x); });
  m.def("lsf_linear", [](std::vector<double> x) { return bench::lsf_linear(x); });
  m.def("lsf_coupled", [](std::vector<double> x, double a) { return bench::lsf_coupled(x, a); });

  m.def(
      "to_physical",
      [](std::vector<double> u, const std::vector<std::tuple<std::string, double, double>>& specs) {
        std::vector<Distribution> dists;
        for (const auto& [kind, mean, sd] : specs) dists.push_back(make_distribution(kind, mean, sd));
        if (u.size() != dists.size()) throw ConfigError("u and distributions differ in length");
        return to_physical(u, dists);
      },
      py::arg("u"), py::arg("distributions"), "Maps a standard normal point through (kind, mean, std) marginals.");

  m.def(
      "estimate_pf",
      [](const std::function<double(std::vector<double>)>& g, std::size_t dim, std::uint64_t seed, std::size_t n) {
        McsConfig cfg;
        cfg.n = n;
        cfg.batch = n;
        cfg.threads = 1;
        const auto r = estimate_pf([&](std::span<const double> u) { return g({u.begin(), u.end()}); }, dim, seed, cfg);
        return py::dict(py::arg("pf") = r.pf, py::arg("n_mc") = r.n_mc, py::arg("n_fail") = r.n_fail,
                        py::arg("cov") = r.cov);
      },
      py::arg("g"), py::arg("dim"), py::arg("seed"), py::arg("n"),
      "Crude Monte Carlo on a U-space function (single-threaded).");

  py::class_<KrigingModel>(m, "Kriging")
      .def(py::init([](const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::uint64_t seed) {
             return KrigingModel::fit(DoeSet(x, y), seed);
           }),
           py::arg("x"), py::arg("y"), py::arg("seed") = 0)
      .def("predict",
           [](const KrigingModel& k, std::vector<double> x) {
             const auto p = k.predict(x);
             return py::make_tuple(p.mean, p.variance);
           })
      .def_property_readonly("theta", [](const KrigingModel& k) {
        return std::vector<double>(k.theta().begin(), k.theta().end());
      });
}
