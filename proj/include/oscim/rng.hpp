#pragma once

// Counter-based random number generation (Philox 4x32-10).
//
// Every draw is a pure function of (seed, step, lane, stream), so simulations
// produce bit-identical results no matter how the work is scheduled across
// threads, and individual streams can be replayed without generator state.

#include <array>
#include <cmath>
#include <cstdint>

namespace oscim::rng {

using Block = std::array<std::uint32_t, 4>;

namespace detail {

constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;

inline void mul_hi_lo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                      std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace detail

/// One Philox 4x32 block: 10 rounds of multiply/xor mixing of `ctr` under
/// `key`. Bijective in the counter for a fixed key.
inline Block philox4x32(Block ctr, std::uint64_t key) {
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    detail::mul_hi_lo(detail::kMul0, ctr[0], hi0, lo0);
    detail::mul_hi_lo(detail::kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += detail::kWeyl0;
    k1 += detail::kWeyl1;
  }
  return ctr;
}

// Independent draw purposes. Keeping them in the counter's fourth word means
// e.g. noise draws can never collide with initial-condition draws.
enum class Stream : std::uint32_t {
  noise = 0,
  init_phase = 1,
  detuning = 2,
  network = 3,
};

inline Block block_at(std::uint64_t seed, std::uint64_t step, std::uint32_t lane,
                      Stream stream) {
  return philox4x32({static_cast<std::uint32_t>(step),
                     static_cast<std::uint32_t>(step >> 32), lane,
                     static_cast<std::uint32_t>(stream)},
                    seed);
}

namespace detail {

// 53-bit mantissa from two 32-bit words.
inline std::uint64_t bits53(std::uint32_t hi, std::uint32_t lo) {
  return (static_cast<std::uint64_t>(hi) << 21) | (lo >> 11);
}

}  // namespace detail

/// Uniform draw in [0, 1).
inline double uniform(std::uint64_t seed, std::uint64_t step, std::uint32_t lane,
                      Stream stream) {
  const Block b = block_at(seed, step, lane, stream);
  return static_cast<double>(detail::bits53(b[0], b[1])) * 0x1.0p-53;
}

/// Standard normal draw (Box-Muller; the first of the pair).
inline double normal(std::uint64_t seed, std::uint64_t step, std::uint32_t lane,
                     Stream stream) {
  const Block b = block_at(seed, step, lane, stream);
  const double u1 =
      static_cast<double>(detail::bits53(b[0], b[1]) + 1) * 0x1.0p-53;  // (0,1]
  const double u2 = static_cast<double>(detail::bits53(b[2], b[3])) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for an independent child stream (e.g. one restart of a multi-run
/// ensemble). Distinct indices give uncorrelated Philox keys.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

}  // namespace oscim::rng
