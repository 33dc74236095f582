#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace relhdmr {

/// Philox4x32-10 counter-based generator (Salmon et al., Random123). A block is
/// a pure function of (counter, key), so any sample of any stream can be
/// produced independently of how the work is partitioned.
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) noexcept;
};

/// Mixes a base seed with a list of tags (run index, stage, variable, ...)
/// into an independent 64-bit seed. SplitMix64 finalizer chain.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept;

/// Sequential view over one Philox stream. Models UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed, std::uint32_t stream = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform double in [0, 1).
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_;
  std::uint64_t counter_ = 0;
  Philox4x32::Counter buffer_{};
  int used_ = 4;
};

/// Fills `out` with the standard-normal coordinates of Monte Carlo sample
/// `sample` under `seed`. Entry j depends only on (seed, sample, j).
void standard_normal_sample(std::uint64_t seed, std::uint64_t sample, std::span<double> out) noexcept;

}  // namespace relhdmr
