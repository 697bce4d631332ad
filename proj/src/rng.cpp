#include "boed/rng.hpp"

#include <cmath>
#include <numbers>

#include "boed/errors.hpp"

namespace boed {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// SplitMix64 finalizer.
std::uint64_t finalize(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Order-sensitive combine: child(a).child(b) != child(b).child(a).
std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
  return finalize(h ^ (v + kGolden + (h << 6) + (h >> 2)));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : RngStream(seed, 0) {}

RngStream::RngStream(std::uint64_t seed, std::uint64_t path)
    : seed_(seed), path_(path) {
  reset_state();
}

void RngStream::reset_state() {
  // Expand (seed, path) into xoshiro256++ state via a SplitMix64 chain.
  std::uint64_t x = combine(finalize(seed_ + kGolden), path_);
  for (auto& word : s_) {
    x += kGolden;
    word = finalize(x);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

RngStream RngStream::child(std::uint64_t id) const {
  return RngStream(seed_, combine(path_, id));
}

std::uint64_t RngStream::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RngStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform_pos() {
  return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

double RngStream::normal() {
  const double u1 = uniform_pos();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RngStream::uniform_index(std::size_t n) {
  if (n == 0) throw UsageError("uniform_index: n must be positive");
  // Lemire's unbiased bounded generation.
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto lo = static_cast<std::uint64_t>(m);
  if (lo < n) {
    const std::uint64_t threshold = (-n) % n;
    while (lo < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      lo = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

}  // namespace boed
