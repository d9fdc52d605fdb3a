#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "binviz/errors.hpp"

namespace binviz {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  bool operator==(const Rgb&) const = default;
};

// 2D Hilbert curve, order k covers a 2^k x 2^k grid. Iterative quadrant
// rotate/flip construction. Valid orders: 1..16.
std::pair<std::uint32_t, std::uint32_t> hilbert2d_d2xy(unsigned order, std::uint64_t d);
std::uint64_t hilbert2d_xy2d(unsigned order, std::uint32_t x, std::uint32_t y);

// 3D Hilbert curve point for index d, order k covers a (2^k)^3 cube. Uses the
// Gray-code/transpose construction (Skilling): the index bits are distributed
// round-robin across the axes MSB-first, Gray-decoded, then the per-level
// exchanges are undone. Consecutive indices differ in exactly one coordinate
// by +-1. Valid orders: 1..8.
std::array<std::uint32_t, 3> hilbert3d_point(unsigned order, std::uint64_t d);

// Colors byte values by walking the first 256 cells of the order-3 3D Hilbert
// curve through the RGB cube; each coordinate in [0,7] scales to [0,255], so
// adjacent byte values differ in a single channel by 36 or 37.
Rgb byte_to_rgb_hilbert(std::uint8_t v);

}  // namespace binviz
