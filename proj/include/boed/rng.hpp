#pragma once

#include <cstddef>
#include <cstdint>

namespace boed {

// Splittable deterministic random stream.
//
// A stream is identified by (seed, path). Child streams derive from that
// identity only, never from the parent's draw position, so sibling streams
// are reproducible regardless of how much any of them has drawn. All draw
// algorithms are spelled out here (xoshiro256++ core, 53-bit uniforms,
// Box-Muller normals, Lemire bounded integers) so sequences are identical
// across standard libraries.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Stream for sub-task `id`, independent of this stream's draw position.
  [[nodiscard]] RngStream child(std::uint64_t id) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();
  // Uniform on (0, 1]; safe as a log() argument.
  double uniform_pos();
  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();
  // Uniform on {0, ..., n-1}, unbiased. n must be positive.
  std::size_t uniform_index(std::size_t n);

 private:
  RngStream(std::uint64_t seed, std::uint64_t path);
  void reset_state();

  std::uint64_t seed_;
  std::uint64_t path_;
  std::uint64_t s_[4];
};

}  // namespace boed
