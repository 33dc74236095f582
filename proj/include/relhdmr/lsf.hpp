#pragma once

#include <atomic>
#include <functional>
#include <span>
#include <vector>

#include "relhdmr/distributions.hpp"

namespace relhdmr {

/// A limit-state function in physical space, evaluated through the U -> X map,
/// with an exact call counter.
class LsfHandle {
 public:
  using Evaluator = std::function<double(std::span<const double> x)>;

  LsfHandle(Evaluator evaluator, std::vector<Distribution> dists);

  LsfHandle(const LsfHandle&) = delete;
  LsfHandle& operator=(const LsfHandle&) = delete;

  /// G(T(u)). Counts one call; throws EvaluationError if the value is not finite.
  double operator()(std::span<const double> u);

  std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
  std::size_t dim() const noexcept { return dists_.size(); }
  const std::vector<Distribution>& dists() const noexcept { return dists_; }
  const Evaluator& evaluator() const noexcept { return evaluator_; }

 private:
  Evaluator evaluator_;
  std::vector<Distribution> dists_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace relhdmr
