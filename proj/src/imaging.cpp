#include "binviz/imaging.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>

#include "binviz/hilbert.hpp"

namespace binviz {

LayoutMode parse_layout(const std::string& name) {
  if (name == "horizontal") return LayoutMode::horizontal;
  if (name == "vertical") return LayoutMode::vertical;
  if (name == "hilbert") return LayoutMode::hilbert;
  throw BadConfig("unknown layout: " + name);
}

void LayoutSpec::validate() const {
  if (target != 32 && target != 64 && target != 128)
    throw BadConfig("layout target must be 32, 64 or 128");
}

ImageTensor layout(const PixelSequence& pixels, const LayoutSpec& spec) {
  const std::size_t n = pixels.size();
  if (n == 0) throw EmptySequence();

  const auto put = [](ImageTensor& img, std::size_t row, std::size_t col, const Rgb& px) {
    img.at(row, col, 0) = px.r / 255.0;
    img.at(row, col, 1) = px.g / 255.0;
    img.at(row, col, 2) = px.b / 255.0;
  };

  if (spec.mode == LayoutMode::hilbert) {
    unsigned order = 1;
    while (order < 16 && (std::uint64_t{1} << (2 * order)) < n) ++order;
    if ((std::uint64_t{1} << (2 * order)) < n)
      throw BadConfig("stream too large for a hilbert layout (max 4^16 pixels)");
    const std::size_t side = std::size_t{1} << order;
    ImageTensor img = ImageTensor::zeros(side, side, 3);
    for (std::size_t d = 0; d < n; ++d) {
      const auto [x, y] = hilbert2d_d2xy(order, d);
      put(img, y, x, pixels.pixels[d]);
    }
    return img;
  }

  const auto side =
      static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  ImageTensor img = ImageTensor::zeros(side, side, 3);
  for (std::size_t d = 0; d < n; ++d) {
    const std::size_t row = spec.mode == LayoutMode::horizontal ? d / side : d % side;
    const std::size_t col = spec.mode == LayoutMode::horizontal ? d % side : d / side;
    put(img, row, col, pixels.pixels[d]);
  }
  return img;
}

ImageTensor resize_nearest(const ImageTensor& img, std::size_t target) {
  if (target == 0) throw BadConfig("resize target must be positive");
  if (img.width == target && img.height == target) return img;
  ImageTensor out = ImageTensor::zeros(target, target, img.channels);
  for (std::size_t row = 0; row < target; ++row) {
    const std::size_t src_row = row * img.height / target;
    for (std::size_t col = 0; col < target; ++col) {
      const std::size_t src_col = col * img.width / target;
      for (std::size_t ch = 0; ch < img.channels; ++ch)
        out.at(row, col, ch) = img.at(src_row, src_col, ch);
    }
  }
  return out;
}

ImageTensor mean_image(const std::vector<ImageTensor>& images) {
  if (images.empty()) throw EmptyList();
  const ImageTensor& first = images.front();
  ImageTensor out = ImageTensor::zeros(first.width, first.height, first.channels);
  for (const auto& img : images) {
    if (img.width != first.width || img.height != first.height ||
        img.channels != first.channels)
      throw ShapeMismatch("mean_image inputs differ in shape");
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += img.data[i];
  }
  const double inv = 1.0 / static_cast<double>(images.size());
  for (auto& v : out.data) v *= inv;
  return out;
}

// ---- PNG ---------------------------------------------------------------

namespace {

std::uint32_t crc32_update(std::uint32_t crc, const std::uint8_t* data, std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  for (std::size_t i = 0; i < len; ++i) crc = table[(crc ^ data[i]) & 0xFF] ^ (crc >> 8);
  return crc;
}

std::uint32_t adler32(const std::vector<std::uint8_t>& data) {
  std::uint32_t a = 1, b = 0;
  for (const auto byte : data) {
    a = (a + byte) % 65521;
    b = (b + a) % 65521;
  }
  return (b << 16) | a;
}

void push_u32be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void push_chunk(std::vector<std::uint8_t>& out, const char type[4],
                const std::vector<std::uint8_t>& payload) {
  push_u32be(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const std::uint32_t crc =
      crc32_update(0xFFFFFFFFu, out.data() + crc_start, out.size() - crc_start) ^ 0xFFFFFFFFu;
  push_u32be(out, crc);
}

// zlib stream with stored (uncompressed) deflate blocks.
std::vector<std::uint8_t> zlib_stored(const std::vector<std::uint8_t>& raw) {
  std::vector<std::uint8_t> out;
  out.push_back(0x78);
  out.push_back(0x01);
  std::size_t pos = 0;
  do {
    const std::size_t len = std::min<std::size_t>(raw.size() - pos, 65535);
    const bool final_block = pos + len == raw.size();
    out.push_back(final_block ? 0x01 : 0x00);
    out.push_back(static_cast<std::uint8_t>(len & 0xFF));
    out.push_back(static_cast<std::uint8_t>(len >> 8));
    out.push_back(static_cast<std::uint8_t>(~len & 0xFF));
    out.push_back(static_cast<std::uint8_t>((~len >> 8) & 0xFF));
    out.insert(out.end(), raw.begin() + static_cast<std::ptrdiff_t>(pos),
               raw.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  } while (pos < raw.size());
  push_u32be(out, adler32(raw));
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_png(const ImageTensor& img) {
  if (img.channels != 1 && img.channels != 3)
    throw ShapeMismatch("PNG output supports 1 or 3 channels");
  if (img.width == 0 || img.height == 0) throw ShapeMismatch("empty image");

  std::vector<std::uint8_t> raw;
  raw.reserve(img.height * (1 + img.width * img.channels));
  for (std::size_t row = 0; row < img.height; ++row) {
    raw.push_back(0);  // filter: none
    for (std::size_t col = 0; col < img.width; ++col)
      for (std::size_t ch = 0; ch < img.channels; ++ch) {
        const double v = std::clamp(img.at(row, col, ch), 0.0, 1.0);
        raw.push_back(static_cast<std::uint8_t>(std::lround(v * 255.0)));
      }
  }

  std::vector<std::uint8_t> png = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};
  std::vector<std::uint8_t> ihdr;
  push_u32be(ihdr, static_cast<std::uint32_t>(img.width));
  push_u32be(ihdr, static_cast<std::uint32_t>(img.height));
  ihdr.push_back(8);                                // bit depth
  ihdr.push_back(img.channels == 3 ? 2 : 0);        // color type
  ihdr.push_back(0);                                // compression
  ihdr.push_back(0);                                // filter method
  ihdr.push_back(0);                                // non-interlaced
  push_chunk(png, "IHDR", ihdr);
  push_chunk(png, "IDAT", zlib_stored(raw));
  push_chunk(png, "IEND", {});
  return png;
}

void write_png(const ImageTensor& img, const std::string& path) {
  const auto png = encode_png(img);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
  if (!out) throw IoError("short write: " + path);
}

}  // namespace binviz
