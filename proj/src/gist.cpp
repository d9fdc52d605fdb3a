#include "binviz/gist.hpp"

#include <cmath>
#include <numbers>

namespace binviz {

namespace {

// Symmetric (edge-inclusive) reflection; kernels never exceed the half-side,
// so one fold is enough.
inline int reflect(int i, int n) {
  if (i < 0) i = -i - 1;
  if (i >= n) i = 2 * n - 1 - i;
  return i;
}

std::vector<double> luminance(const ImageTensor& img) {
  std::vector<double> lum(img.width * img.height);
  if (img.channels == 1) {
    lum = img.data;
  } else if (img.channels == 3) {
    for (std::size_t i = 0; i < lum.size(); ++i)
      lum[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] +
               0.114 * img.data[3 * i + 2];
  } else {
    throw ShapeMismatch("luminance expects 1 or 3 channels");
  }
  return lum;
}

}  // namespace

GaborBank build_gabor_bank(int scales, int orientations, int size) {
  if (scales < 1 || orientations < 1) throw BadConfig("scales and orientations must be >= 1");
  if (size < 4) throw BadConfig("image size too small for a Gabor bank");

  GaborBank bank;
  bank.scales = scales;
  bank.orientations = orientations;
  bank.image_size = size;

  // One-octave bandwidth: sigma * f ~= 0.56.
  constexpr double sigma_per_wavelength = 0.5622;
  const int max_radius = size / 2 - 1;

  for (int s = 0; s < scales; ++s) {
    const double freq = 0.25 / std::pow(2.0, s);
    const double sigma = sigma_per_wavelength / freq;
    const int radius = std::min(static_cast<int>(std::ceil(3.0 * sigma)), max_radius);
    const int ksize = 2 * radius + 1;

    for (int o = 0; o < orientations; ++o) {
      const double theta = std::numbers::pi * o / orientations;
      const double ct = std::cos(theta), st = std::sin(theta);

      GaborFilter filter;
      filter.size = ksize;
      filter.frequency = freq;
      filter.orientation = theta;
      filter.even.resize(static_cast<std::size_t>(ksize) * ksize);
      filter.odd.resize(static_cast<std::size_t>(ksize) * ksize);

      double env_sum = 0.0, even_sum = 0.0, odd_sum = 0.0;
      std::vector<double> envelope(filter.even.size());
      for (int y = -radius; y <= radius; ++y) {
        for (int x = -radius; x <= radius; ++x) {
          const std::size_t idx =
              static_cast<std::size_t>(y + radius) * ksize + static_cast<std::size_t>(x + radius);
          const double xr = x * ct + y * st;
          const double env = std::exp(-(static_cast<double>(x) * x + static_cast<double>(y) * y) /
                                      (2.0 * sigma * sigma));
          const double phase = 2.0 * std::numbers::pi * freq * xr;
          envelope[idx] = env;
          filter.even[idx] = env * std::cos(phase);
          filter.odd[idx] = env * std::sin(phase);
          env_sum += env;
          even_sum += filter.even[idx];
          odd_sum += filter.odd[idx];
        }
      }

      // Remove the DC response so constant images map to zero.
      const double even_dc = even_sum / env_sum;
      const double odd_dc = odd_sum / env_sum;
      double norm = 0.0;
      for (std::size_t i = 0; i < filter.even.size(); ++i) {
        filter.even[i] -= even_dc * envelope[i];
        filter.odd[i] -= odd_dc * envelope[i];
        norm += filter.even[i] * filter.even[i] + filter.odd[i] * filter.odd[i];
      }
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < filter.even.size(); ++i) {
        filter.even[i] /= norm;
        filter.odd[i] /= norm;
      }
      bank.filters.push_back(std::move(filter));
    }
  }
  return bank;
}

std::vector<double> gist_descriptor(const ImageTensor& img, const GaborBank& bank, int grid) {
  if (img.width != img.height) throw ShapeMismatch("gist expects a square image");
  if (static_cast<int>(img.width) != bank.image_size)
    throw ShapeMismatch("image size does not match the bank");
  if (grid < 1 || static_cast<std::size_t>(grid) > img.width)
    throw BadConfig("bad gist grid");

  const int n = static_cast<int>(img.width);
  const std::vector<double> lum = luminance(img);
  std::vector<double> descriptor;
  descriptor.reserve(bank.filters.size() * static_cast<std::size_t>(grid) * grid);

  std::vector<double> magnitude(static_cast<std::size_t>(n) * n);
  for (const auto& filter : bank.filters) {
    const int radius = (filter.size - 1) / 2;
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        double re = 0.0, im = 0.0;
        for (int dy = -radius; dy <= radius; ++dy) {
          const int sy = reflect(y + dy, n);
          const std::size_t krow =
              static_cast<std::size_t>(dy + radius) * filter.size + radius;
          const std::size_t irow = static_cast<std::size_t>(sy) * n;
          for (int dx = -radius; dx <= radius; ++dx) {
            const double pixel = lum[irow + static_cast<std::size_t>(reflect(x + dx, n))];
            re += filter.even[krow + dx] * pixel;
            im += filter.odd[krow + dx] * pixel;
          }
        }
        magnitude[static_cast<std::size_t>(y) * n + x] = std::sqrt(re * re + im * im);
      }
    }

    // grid x grid cell averages, row-major cells
    for (int cy = 0; cy < grid; ++cy) {
      const int y0 = cy * n / grid, y1 = (cy + 1) * n / grid;
      for (int cx = 0; cx < grid; ++cx) {
        const int x0 = cx * n / grid, x1 = (cx + 1) * n / grid;
        double sum = 0.0;
        for (int y = y0; y < y1; ++y)
          for (int x = x0; x < x1; ++x) sum += magnitude[static_cast<std::size_t>(y) * n + x];
        descriptor.push_back(sum / (static_cast<double>(y1 - y0) * (x1 - x0)));
      }
    }
  }
  return descriptor;
}

}  // namespace binviz
