#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "binviz/colorize.hpp"
#include "binviz/errors.hpp"

namespace binviz {

// Row-major, channel-interleaved image with values in [0,1].
struct ImageTensor {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t channels = 0;
  std::vector<double> data;

  static ImageTensor zeros(std::size_t width, std::size_t height, std::size_t channels) {
    return ImageTensor{width, height, channels,
                       std::vector<double>(width * height * channels, 0.0)};
  }

  double& at(std::size_t row, std::size_t col, std::size_t ch) {
    return data[(row * width + col) * channels + ch];
  }
  const double& at(std::size_t row, std::size_t col, std::size_t ch) const {
    return data[(row * width + col) * channels + ch];
  }
};

enum class LayoutMode { horizontal, vertical, hilbert };

LayoutMode parse_layout(const std::string& name);

struct LayoutSpec {
  LayoutMode mode = LayoutMode::horizontal;
  std::size_t target = 64;  // post-layout resize side: 32, 64 or 128

  void validate() const;
};

// Arranges pixels on a square canvas, black-padded.
//   horizontal: row-major on a ceil(sqrt(n)) square
//   vertical:   column-major on the same square
//   hilbert:    pixel d at hilbert2d_d2xy(k, d), k minimal with 4^k >= n
ImageTensor layout(const PixelSequence& pixels, const LayoutSpec& spec);

// Nearest neighbour: source index floor(dst * src_side / target).
ImageTensor resize_nearest(const ImageTensor& img, std::size_t target);

ImageTensor mean_image(const std::vector<ImageTensor>& images);

// 8-bit non-interlaced PNG, RGB for 3 channels or grayscale for 1. The encoder
// emits stored (uncompressed) deflate blocks; channel byte = round(value*255).
std::vector<std::uint8_t> encode_png(const ImageTensor& img);
void write_png(const ImageTensor& img, const std::string& path);

}  // namespace binviz
