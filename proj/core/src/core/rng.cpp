#include "arrowlab/core/rng.hpp"

#include <numeric>

#include "arrowlab/core/error.hpp"

namespace arrowlab::core {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// Stream ids reserved for seed derivation, far from any scenario stream.
constexpr std::uint64_t kSeedDerivationStream = 0xA770'5EED'0000'0000ULL;

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t i = counter_++;
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32), static_cast<std::uint32_t>(stream_id_),
       static_cast<std::uint32_t>(stream_id_ >> 32)},
      {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double RngStream::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t RngStream::below(std::uint64_t n) {
  if (n == 0) throw DomainError("RngStream::below: empty range");
  // Rejection sampling keeps the result exactly uniform.
  const std::uint64_t limit = max() - max() % n;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r < limit) return r % n;
  }
}

std::size_t RngStream::categorical(std::span<const double> weights) {
  if (weights.empty()) throw DomainError("categorical: empty probability vector");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("categorical: negative or NaN weight");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("categorical: weights sum to zero");
  const double target = uniform() * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;  // rounding in the running sum
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  const auto out = philox4x32(
      {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
       static_cast<std::uint32_t>(kSeedDerivationStream), static_cast<std::uint32_t>(kSeedDerivationStream >> 32)},
      {static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32)});
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace arrowlab::core
