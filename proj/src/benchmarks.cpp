#include "relhdmr/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <Eigen/Cholesky>

#include "json.hpp"
#include "relhdmr/error.hpp"

namespace relhdmr::bench {

double lsf_example1(std::span<const double> x) {
  if (x.size() != 3) throw ConfigError("example1 limit state needs exactly 3 variables");
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  return 0.75 * x2 - 3.0 * std::sin(x1) + 0.2 * x1 - 0.1 * (x3 - 3.0) * (x3 - 3.0) - 0.005 * x1 * x2 +
         0.1 * x2 * x3 - 0.2;
}

double lsf_linear(std::span<const double> x) {
  if (x.empty()) throw ConfigError("linear limit state needs at least 1 variable");
  double s = 0.0;
  for (double v : x) s += v;
  return 3.5 * std::sqrt(static_cast<double>(x.size())) - s;
}

double lsf_coupled(std::span<const double> x, double a) {
  if (x.size() < 2) throw ConfigError("coupled limit state needs at least 2 variables");
  double g = a - (x[0] - 1.0) * (x[0] - 1.0);
  for (std::size_t k = 1; k < x.size(); ++k) {
    const double r = 2.0 * x[k] * x[k] - x[k - 1];
    g -= static_cast<double>(k + 1) * r * r;
  }
  return g;
}

TrussModel::TrussModel(std::vector<TrussNode> nodes, std::vector<TrussElement> elements,
                       std::vector<TrussSupport> supports, std::vector<TrussLoad> loads, int monitor_node)
    : nodes_(std::move(nodes)),
      elements_(std::move(elements)),
      supports_(std::move(supports)),
      loads_(std::move(loads)),
      monitor_node_(monitor_node) {
  if (nodes_.size() < 2) throw ConfigError("a truss needs at least two nodes", "nodes");
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (nodes_[i].id == nodes_[j].id) throw ConfigError("duplicate node id " + std::to_string(nodes_[i].id), "nodes");
  if (elements_.empty()) throw ConfigError("a truss needs at least one element", "elements");
  for (const auto& e : elements_) {
    const auto& a = nodes_[node_index(e.a)];
    const auto& b = nodes_[node_index(e.b)];
    if (std::hypot(b.x - a.x, b.y - a.y) <= 0.0)
      throw ConfigError("element " + std::to_string(e.id) + " has zero length", "elements");
  }
  for (const auto& s : supports_) node_index(s.node);
  for (const auto& l : loads_) node_index(l.node);
  node_index(monitor_node_);
}

std::size_t TrussModel::node_index(int id) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].id == id) return i;
  throw ConfigError("unknown node id " + std::to_string(id));
}

std::size_t TrussModel::variable_count() const noexcept {
  std::size_t n = 0;
  auto see = [&](const Source& s) {
    if (s.var) n = std::max(n, *s.var + 1);
  };
  for (const auto& e : elements_) {
    see(e.area);
    see(e.modulus);
  }
  for (const auto& l : loads_) {
    see(l.fx);
    see(l.fy);
  }
  return n;
}

namespace {

using nlohmann::json;

Source parse_source(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError("expected {\"var\": k} or {\"const\": v}", path);
  Source s;
  if (j.contains("var")) {
    const auto k = j.at("var").get<long>();
    if (k < 1) throw ConfigError("variable indices are 1-based", path + ".var");
    s.var = static_cast<std::size_t>(k - 1);
  } else if (j.contains("const")) {
    s.value = j.at("const").get<double>();
  } else {
    throw ConfigError("expected a \"var\" or \"const\" key", path);
  }
  if (j.contains("scale")) s.scale = j.at("scale").get<double>();
  return s;
}

}  // namespace

TrussModel TrussModel::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed truss JSON: ") + e.what());
  }
  try {
    std::vector<TrussNode> nodes;
    for (const auto& n : doc.at("nodes")) nodes.push_back({n.at("id").get<int>(), n.at("x").get<double>(), n.at("y").get<double>()});
    std::vector<TrussElement> elements;
    for (std::size_t k = 0; k < doc.at("elements").size(); ++k) {
      const auto& e = doc.at("elements")[k];
      const std::string path = "elements[" + std::to_string(k) + "]";
      elements.push_back({e.at("id").get<int>(), e.at("a").get<int>(), e.at("b").get<int>(),
                          parse_source(e.at("area"), path + ".area"), parse_source(e.at("modulus"), path + ".modulus")});
    }
    std::vector<TrussSupport> supports;
    for (const auto& s : doc.at("supports"))
      supports.push_back({s.at("node").get<int>(), s.value("fix_x", false), s.value("fix_y", false)});
    std::vector<TrussLoad> loads;
    for (std::size_t k = 0; k < doc.at("loads").size(); ++k) {
      const auto& l = doc.at("loads")[k];
      const std::string path = "loads[" + std::to_string(k) + "]";
      TrussLoad load{l.at("node").get<int>(), Source{}, Source{}};
      if (l.contains("fx")) load.fx = parse_source(l.at("fx"), path + ".fx");
      if (l.contains("fy")) load.fy = parse_source(l.at("fy"), path + ".fy");
      loads.push_back(load);
    }
    return TrussModel(std::move(nodes), std::move(elements), std::move(supports), std::move(loads),
                      doc.at("monitor_node").get<int>());
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid truss description: ") + e.what());
  }
}

TrussModel TrussModel::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open truss file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

TrussSolution truss_analyze(const TrussModel& model, std::span<const double> x) {
  if (x.size() < model.variable_count())
    throw ConfigError("truss references " + std::to_string(model.variable_count()) + " variables but got " +
                      std::to_string(x.size()));
  const auto& nodes = model.nodes();
  const auto& elements = model.elements();
  const auto ndof = static_cast<Eigen::Index>(2 * nodes.size());

  struct Geometry {
    Eigen::Index ia, ib;
    double length, c, s, ea;
  };
  std::vector<Geometry> geo;
  geo.reserve(elements.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(ndof, ndof);
  for (const auto& e : elements) {
    const double area = e.area.resolve(x);
    const double modulus = e.modulus.resolve(x);
    if (!(area > 0.0) || !(modulus > 0.0))
      throw ConfigError("element " + std::to_string(e.id) + " needs positive area and modulus");
    const auto ia = static_cast<Eigen::Index>(model.node_index(e.a));
    const auto ib = static_cast<Eigen::Index>(model.node_index(e.b));
    const double dx = nodes[ib].x - nodes[ia].x;
    const double dy = nodes[ib].y - nodes[ia].y;
    const double length = std::hypot(dx, dy);
    const Geometry g{ia, ib, length, dx / length, dy / length, area * modulus};
    geo.push_back(g);
    const double stiff = g.ea / length;
    const double t[4] = {-g.c, -g.s, g.c, g.s};
    const Eigen::Index dof[4] = {2 * ia, 2 * ia + 1, 2 * ib, 2 * ib + 1};
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q) k(dof[p], dof[q]) += stiff * t[p] * t[q];
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(ndof);
  for (const auto& l : model.loads()) {
    const auto i = static_cast<Eigen::Index>(model.node_index(l.node));
    f(2 * i) += l.fx.resolve(x);
    f(2 * i + 1) += l.fy.resolve(x);
  }

  std::vector<bool> fixed(ndof, false);
  for (const auto& s : model.supports()) {
    const auto i = model.node_index(s.node);
    if (s.fix_x) fixed[2 * i] = true;
    if (s.fix_y) fixed[2 * i + 1] = true;
  }
  std::vector<Eigen::Index> free;
  for (Eigen::Index d = 0; d < ndof; ++d)
    if (!fixed[d]) free.push_back(d);
  const auto nf = static_cast<Eigen::Index>(free.size());
  Eigen::MatrixXd kff(nf, nf);
  Eigen::VectorXd ff(nf);
  for (Eigen::Index p = 0; p < nf; ++p) {
    ff(p) = f(free[p]);
    for (Eigen::Index q = 0; q < nf; ++q) kff(p, q) = k(free[p], free[q]);
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(kff);
  const double scale = nf > 0 ? kff.diagonal().maxCoeff() : 1.0;
  if (llt.info() != Eigen::Success ||
      (nf > 0 && llt.matrixLLT().diagonal().array().square().minCoeff() < 1e-12 * scale))
    throw StructuralError("reduced stiffness matrix is singular: the truss is not statically stable");
  const Eigen::VectorXd df = llt.solve(ff);

  TrussSolution sol;
  sol.displacements = Eigen::VectorXd::Zero(ndof);
  for (Eigen::Index p = 0; p < nf; ++p) sol.displacements(free[p]) = df(p);
  sol.loads = f;
  sol.axial_forces.resize(static_cast<Eigen::Index>(elements.size()));
  sol.strain_energy = 0.0;
  for (std::size_t e = 0; e < geo.size(); ++e) {
    const auto& g = geo[e];
    const double elong = g.c * (sol.displacements(2 * g.ib) - sol.displacements(2 * g.ia)) +
                         g.s * (sol.displacements(2 * g.ib + 1) - sol.displacements(2 * g.ia + 1));
    const double n = g.ea / g.length * elong;
    sol.axial_forces(static_cast<Eigen::Index>(e)) = n;
    sol.strain_energy += 0.5 * n * elong;
  }
  sol.monitor_dy = sol.displacements(2 * static_cast<Eigen::Index>(model.node_index(model.monitor_node())) + 1);
  return sol;
}

double truss_solve(const TrussModel& model, std::span<const double> x) { return truss_analyze(model, x).monitor_dy; }

double lsf_truss(const TrussModel& model, std::span<const double> x, double limit) {
  return limit - std::abs(truss_solve(model, x));
}

}  // namespace relhdmr::bench
