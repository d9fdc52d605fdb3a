#include "binviz/hilbert.hpp"

#include <cmath>
#include <utility>

namespace binviz {

namespace {

constexpr unsigned kMaxOrder2d = 16;
constexpr unsigned kMaxOrder3d = 8;

void check_order_2d(unsigned order) {
  if (order < 1 || order > kMaxOrder2d) throw BadConfig("2D Hilbert order must be in 1..16");
}

void check_order_3d(unsigned order) {
  if (order < 1 || order > kMaxOrder3d) throw BadConfig("3D Hilbert order must be in 1..8");
}

// Rotate/flip a quadrant of side s.
void rot2d(std::uint32_t s, std::uint32_t& x, std::uint32_t& y, std::uint32_t rx,
           std::uint32_t ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = s - 1 - x;
      y = s - 1 - y;
    }
    std::swap(x, y);
  }
}

}  // namespace

std::pair<std::uint32_t, std::uint32_t> hilbert2d_d2xy(unsigned order, std::uint64_t d) {
  check_order_2d(order);
  const std::uint64_t cells = std::uint64_t{1} << (2 * order);
  if (d >= cells) throw IndexOutOfRange("hilbert2d index out of range");

  const std::uint32_t side = std::uint32_t{1} << order;
  std::uint32_t x = 0, y = 0;
  std::uint64_t t = d;
  for (std::uint32_t s = 1; s < side; s <<= 1) {
    const auto rx = static_cast<std::uint32_t>(1 & (t / 2));
    const auto ry = static_cast<std::uint32_t>(1 & (t ^ rx));
    rot2d(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
  return {x, y};
}

std::uint64_t hilbert2d_xy2d(unsigned order, std::uint32_t x, std::uint32_t y) {
  check_order_2d(order);
  const std::uint32_t side = std::uint32_t{1} << order;
  if (x >= side || y >= side) throw CoordOutOfRange("hilbert2d coordinate out of range");

  std::uint64_t d = 0;
  for (std::uint32_t s = side / 2; s > 0; s >>= 1) {
    const std::uint32_t rx = (x & s) ? 1 : 0;
    const std::uint32_t ry = (y & s) ? 1 : 0;
    d += static_cast<std::uint64_t>(s) * s * ((3 * rx) ^ ry);
    rot2d(side, x, y, rx, ry);
  }
  return d;
}

std::array<std::uint32_t, 3> hilbert3d_point(unsigned order, std::uint64_t d) {
  check_order_3d(order);
  const std::uint64_t cells = std::uint64_t{1} << (3 * order);
  if (d >= cells) throw IndexOutOfRange("hilbert3d index out of range");

  // Distribute index bits across the axes, MSB first: axis 0 owns the most
  // significant bit of each 3-bit group.
  std::array<std::uint32_t, 3> x{0, 0, 0};
  for (unsigned level = 0; level < order; ++level) {
    for (unsigned axis = 0; axis < 3; ++axis) {
      const unsigned src = 3 * order - 1 - (level * 3 + axis);
      const auto bit = static_cast<std::uint32_t>((d >> src) & 1u);
      x[axis] |= bit << (order - 1 - level);
    }
  }

  // Skilling transpose-to-axes: Gray decode, then undo the per-level exchanges.
  const std::uint32_t top = std::uint32_t{1} << order;
  std::uint32_t t = x[2] >> 1;
  for (unsigned i = 2; i > 0; --i) x[i] ^= x[i - 1];
  x[0] ^= t;
  for (std::uint32_t q = 2; q != top; q <<= 1) {
    const std::uint32_t p = q - 1;
    for (int i = 2; i >= 0; --i) {
      if (x[static_cast<unsigned>(i)] & q) {
        x[0] ^= p;
      } else {
        t = (x[0] ^ x[static_cast<unsigned>(i)]) & p;
        x[0] ^= t;
        x[static_cast<unsigned>(i)] ^= t;
      }
    }
  }
  return x;
}

Rgb byte_to_rgb_hilbert(std::uint8_t v) {
  const auto p = hilbert3d_point(3, v);
  const auto level = [](std::uint32_t c) {
    return static_cast<std::uint8_t>(std::lround(static_cast<double>(c) * 255.0 / 7.0));
  };
  return Rgb{level(p[0]), level(p[1]), level(p[2])};
}

}  // namespace binviz
