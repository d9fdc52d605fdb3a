#pragma once

#include <cstdint>
#include <vector>

#include "binviz/errors.hpp"
#include "binviz/imaging.hpp"

namespace binviz {

// Quadrature pair of spatial Gabor kernels, square support of side `size`.
struct GaborFilter {
  int size = 0;  // odd
  std::vector<double> even;
  std::vector<double> odd;
  double frequency = 0.0;    // cycles/pixel
  double orientation = 0.0;  // radians in [0, pi)
};

struct GaborBank {
  std::vector<GaborFilter> filters;  // scale-major, then orientation
  int scales = 0;
  int orientations = 0;
  int image_size = 0;
};

// Center frequencies halve per scale starting at 0.25 cycles/pixel;
// orientations are evenly spaced over [0, pi). Kernels are zero-mean and
// L2-normalized; support is +-3 sigma truncated to the image half-side.
GaborBank build_gabor_bank(int scales, int orientations, int size);

// Grid-averaged Gabor response magnitudes of the luminance image
// (0.299 r + 0.587 g + 0.114 b). Convolution is same-size with reflect
// padding. Output is filter-major then cell-major, length |filters|*grid^2.
std::vector<double> gist_descriptor(const ImageTensor& img, const GaborBank& bank, int grid = 4);

}  // namespace binviz
