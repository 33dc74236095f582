#include "relhdmr/rng.hpp"

#include <cmath>
#include <numbers>

namespace relhdmr {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

// Counter word 3 separates the sequential streams from the Monte Carlo sample
// lattice so the two never share a block.
constexpr std::uint32_t kSequentialDomain = 1u;
constexpr std::uint32_t kSampleDomain = 0u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline Philox4x32::Key key_of(std::uint64_t seed) noexcept {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

// 53-bit uniform in (0, 1]; never zero so it is safe under log().
inline double open_left_unit(std::uint32_t hi, std::uint32_t lo) noexcept {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::block(Counter ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t t : tags) h = splitmix64(h ^ splitmix64(t + 0x632BE59BD9B4E019ull));
  return h;
}

RandomStream::RandomStream(std::uint64_t seed, std::uint32_t stream) noexcept
    : key_(key_of(seed)), stream_(stream) {}

RandomStream::result_type RandomStream::operator()() noexcept {
  if (used_ >= 4) {
    buffer_ = Philox4x32::block({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                 stream_, kSequentialDomain},
                                key_);
    ++counter_;
    used_ = 0;
  }
  const std::uint64_t hi = buffer_[used_];
  const std::uint64_t lo = buffer_[used_ + 1];
  used_ += 2;
  return (hi << 32) | lo;
}

double RandomStream::uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

void standard_normal_sample(std::uint64_t seed, std::uint64_t sample, std::span<double> out) noexcept {
  const auto key = key_of(seed);
  const auto lo = static_cast<std::uint32_t>(sample);
  const auto hi = static_cast<std::uint32_t>(sample >> 32);
  const std::size_t n = out.size();
  for (std::size_t j = 0; j < n; j += 2) {
    const auto b = Philox4x32::block({lo, hi, static_cast<std::uint32_t>(j / 2), kSampleDomain}, key);
    // Box-Muller: one block gives two independent normals.
    const double r = std::sqrt(-2.0 * std::log(open_left_unit(b[0], b[1])));
    const double phi = 2.0 * std::numbers::pi * open_left_unit(b[2], b[3]);
    out[j] = r * std::cos(phi);
    if (j + 1 < n) out[j + 1] = r * std::sin(phi);
  }
}

}  // namespace relhdmr
