#include "relhdmr/lsf.hpp"

#include <cmath>
#include <sstream>

#include "relhdmr/error.hpp"

namespace relhdmr {

LsfHandle::LsfHandle(Evaluator evaluator, std::vector<Distribution> dists)
    : evaluator_(std::move(evaluator)), dists_(std::move(dists)) {
  if (!evaluator_) throw ConfigError("limit-state evaluator is empty");
  if (dists_.empty()) throw ConfigError("limit-state function needs at least one variable");
}

double LsfHandle::operator()(std::span<const double> u) {
  const std::vector<double> x = to_physical(u, dists_);
  calls_.fetch_add(1, std::memory_order_relaxed);
  const double g = evaluator_(x);
  if (!std::isfinite(g)) {
    std::ostringstream msg;
    msg << "limit-state function returned " << g << " at u = (";
    for (std::size_t i = 0; i < u.size(); ++i) msg << (i ? ", " : "") << u[i];
    msg << ")";
    throw EvaluationError(msg.str());
  }
  return g;
}

}  // namespace relhdmr
