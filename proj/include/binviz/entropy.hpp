#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "binviz/errors.hpp"
#include "binviz/ingest.hpp"

namespace binviz {

enum class EntropyMode { block, sliding };

struct EntropyParams {
  EntropyMode mode = EntropyMode::sliding;
  std::size_t window = 64;   // sliding mode
  std::size_t block = 256;   // block mode
  std::size_t stride = 1;

  void validate() const;
};

// One normalized entropy value per byte position of the source stream.
struct EntropyProfile {
  std::vector<double> values;
  EntropyParams params;
};

// Shannon entropy in bits over the byte-value distribution of `block`,
// -sum p_i log2 p_i with 0 log2 0 := 0. Range [0, 8].
double shannon_entropy(std::span<const std::uint8_t> block);

// Shared kernel: entropy of a 256-bin histogram with `total` samples. Fixed
// bin iteration order, so identical histograms give bit-identical results.
double entropy_from_histogram(const std::array<std::uint32_t, 256>& hist, std::size_t total);

// Normalized profile (entropy / 8) over `stream`.
//   block mode:   every byte of block k gets the entropy of block k; the final
//                 partial block is computed over its actual bytes.
//   sliding mode: window centered at each evaluated position, clamped to the
//                 stream bounds (never padded). Centers advance by `stride`;
//                 positions between centers take the preceding center's value.
//                 The histogram is maintained incrementally, O(n) for stride 1.
EntropyProfile entropy_profile(const ByteStream& stream, const EntropyParams& params);

// Window bounds used by sliding mode; exposed so oracles can mirror them.
inline std::pair<std::size_t, std::size_t> sliding_window_bounds(std::size_t center,
                                                                 std::size_t window,
                                                                 std::size_t n) {
  const std::size_t half_lo = window / 2;
  const std::size_t lo = center > half_lo ? center - half_lo : 0;
  std::size_t hi = center + (window - half_lo);
  if (hi > n) hi = n;
  return {lo, hi};
}

}  // namespace binviz
