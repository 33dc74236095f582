#include "relhdmr/hdmr.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace relhdmr {

SubSurrogate::SubSurrogate(std::vector<std::size_t> vars_, KrigingModel model_)
    : vars(std::move(vars_)), model(std::move(model_)) {
  if (vars.empty() || vars.size() > 2) throw ConfigError("sub-surrogates are first or second order");
  if (model.dim() != vars.size()) throw ConfigError("sub-surrogate model dimension differs from its order");
  if (vars.size() == 2 && !(vars[0] < vars[1])) throw ConfigError("pair indices must be strictly increasing");
}

std::string SubSurrogate::id() const {
  std::string s = "G";
  const bool wide = std::any_of(vars.begin(), vars.end(), [](std::size_t v) { return v + 1 > 9; });
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (k > 0 && wide) s += '_';
    s += std::to_string(vars[k] + 1);
  }
  return s;
}

std::vector<double> embed_point(const SubSurrogate& sub, std::span<const double> coords,
                                std::span<const double> cut_point) {
  if (coords.size() != sub.order()) throw ConfigError("embed_point: coordinate count differs from sub-model order");
  std::vector<double> u(cut_point.begin(), cut_point.end());
  for (std::size_t k = 0; k < sub.vars.size(); ++k) {
    if (sub.vars[k] >= u.size()) throw Error("embed_point: variable index out of range");
    u[sub.vars[k]] = coords[k];
  }
  return u;
}

CompositeSurrogate::CompositeSurrogate(std::vector<double> cut_point, double g0,
                                       std::vector<SubSurrogate> first_order)
    : cut_point_(std::move(cut_point)), g0_(g0), first_order_(std::move(first_order)) {
  if (first_order_.size() != cut_point_.size())
    throw ConfigError("composite needs exactly one first-order model per variable");
  for (std::size_t i = 0; i < first_order_.size(); ++i) {
    if (first_order_[i].order() != 1 || first_order_[i].vars[0] != i)
      throw ConfigError("first-order model " + std::to_string(i) + " is not attached to variable " +
                        std::to_string(i + 1));
  }
}

const SubSurrogate& CompositeSurrogate::submodel(SubModelRef ref) const {
  return ref.order == 1 ? first_order_.at(ref.index) : second_order_.at(ref.index);
}

void CompositeSurrogate::replace_model(SubModelRef ref, KrigingModel model) {
  SubSurrogate& sub = ref.order == 1 ? first_order_.at(ref.index) : second_order_.at(ref.index);
  if (model.dim() != sub.order()) throw ConfigError("replacement model has the wrong dimension");
  sub.model = std::move(model);
}

bool CompositeSurrogate::has_pair(std::size_t i, std::size_t j) const {
  return std::any_of(second_order_.begin(), second_order_.end(),
                     [&](const SubSurrogate& s) { return s.vars[0] == i && s.vars[1] == j; });
}

void CompositeSurrogate::add_pair(SubSurrogate sub) {
  if (sub.order() != 2) throw ConfigError("add_pair expects a second-order sub-model");
  if (sub.vars[1] >= dim()) throw ConfigError("pair index out of range");
  if (has_pair(sub.vars[0], sub.vars[1])) throw ConfigError("duplicate pair " + sub.id());
  const auto pos = std::lower_bound(second_order_.begin(), second_order_.end(), sub,
                                    [](const SubSurrogate& a, const SubSurrogate& b) { return a.vars < b.vars; });
  second_order_.insert(pos, std::move(sub));
}

std::vector<double> CompositeSurrogate::project(SubModelRef ref, std::span<const double> u) const {
  const SubSurrogate& sub = submodel(ref);
  std::vector<double> coords(sub.order());
  for (std::size_t k = 0; k < sub.order(); ++k) coords[k] = u[sub.vars[k]];
  return coords;
}

double CompositeSurrogate::predict(std::span<const double> u) const {
  if (u.size() != dim()) throw ConfigError("composite predict: dimension mismatch");
  thread_local std::vector<double> deviation;
  deviation.resize(first_order_.size());
  double total = g0_;
  for (std::size_t i = 0; i < first_order_.size(); ++i) {
    deviation[i] = first_order_[i].model.predict_mean(u.subspan(i, 1)) - g0_;
    total += deviation[i];
  }
  for (const auto& s : second_order_) {
    const std::array<double, 2> c{u[s.vars[0]], u[s.vars[1]]};
    total += s.model.predict_mean(c) - deviation[s.vars[0]] - deviation[s.vars[1]] - g0_;
  }
  return total;
}

SigmaBar CompositeSurrogate::sigma_bar(std::span<const double> u) const {
  if (u.size() != dim()) throw ConfigError("sigma_bar: dimension mismatch");
  SigmaBar best{-1.0, {1, 0}};
  for (std::size_t i = 0; i < first_order_.size(); ++i) {
    const double s = first_order_[i].model.predict_std(u.subspan(i, 1));
    if (s > best.value) best = {s, {1, i}};
  }
  for (std::size_t k = 0; k < second_order_.size(); ++k) {
    const auto& sub = second_order_[k];
    const std::array<double, 2> c{u[sub.vars[0]], u[sub.vars[1]]};
    const double s = sub.model.predict_std(c);
    if (s > best.value) best = {s, {2, k}};
  }
  return best;
}

std::vector<SubModelRef> CompositeSurrogate::all_refs() const {
  std::vector<SubModelRef> refs;
  refs.reserve(first_order_.size() + second_order_.size());
  for (std::size_t i = 0; i < first_order_.size(); ++i) refs.push_back({1, i});
  for (std::size_t k = 0; k < second_order_.size(); ++k) refs.push_back({2, k});
  return refs;
}

double CompositeSurrogate::min_response() const {
  double lo = g0_;
  for (const auto& s : first_order_) lo = std::min(lo, s.doe().min_response());
  for (const auto& s : second_order_) lo = std::min(lo, s.doe().min_response());
  return lo;
}

double CompositeSurrogate::max_response() const {
  double hi = g0_;
  for (const auto& s : first_order_) hi = std::max(hi, s.doe().max_response());
  for (const auto& s : second_order_) hi = std::max(hi, s.doe().max_response());
  return hi;
}

double coupling_index(LsfHandle& lsf, const CompositeSurrogate& cs, std::size_t i, std::size_t j, double du,
                      ProbeSign sign) {
  if (!(i < j) || j >= cs.dim()) throw ConfigError("coupling_index needs 0 <= i < j < N_D");
  if (!(du > 0.0)) throw ConfigError("coupling probe offset must be > 0");
  const auto cut = cs.cut_point();
  std::vector<double> probe(cut.begin(), cut.end());
  const double step = sign == ProbeSign::Plus ? du : -du;
  probe[i] += step;
  probe[j] += step;
  const double g = lsf(probe);
  if (std::abs(g) < 1e-12)
    throw DegenerateProbeError("coupling probe for pair (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                               ") lies on the limit state (|G| < 1e-12)");
  const double ui = cut[i] + step;
  const double uj = cut[j] + step;
  const double additive = cs.first_order()[i].model.predict_mean(std::span<const double>(&ui, 1)) +
                          cs.first_order()[j].model.predict_mean(std::span<const double>(&uj, 1)) - cs.g0();
  return (g - additive) / g;
}

}  // namespace relhdmr
