#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>

namespace arrowlab::core {

/// Philox4x32-10 block cipher (Salmon et al., Random123).
/// Maps (counter, key) to four pseudo-random 32-bit words.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// Draw i of stream (seed, stream_id) is philox(counter = stream_id || i,
/// key = seed), so any draw is addressable without replaying the others and
/// streams with distinct ids never share a counter.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t draws() const { return counter_; }

  /// 64 random bits; advances the draw counter by one.
  std::uint64_t next_u64();
  /// Uniform real in [0, 1) with 53 random bits.
  double uniform();
  /// Index i with probability weights[i] / sum(weights). Weights must be
  /// nonnegative with a positive sum.
  std::size_t categorical(std::span<const double> weights);
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  // UniformRandomBitGenerator interface.
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_ = 0;
};

/// Convenience constructor matching the library's stream contract.
inline RngStream rng_stream(std::uint64_t seed, std::uint64_t stream_id) { return {seed, stream_id}; }

/// Seed of member `index` of an ensemble rooted at `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace arrowlab::core
