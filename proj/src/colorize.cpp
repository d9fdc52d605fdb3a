#include "binviz/colorize.hpp"

#include <algorithm>
#include <bitset>
#include <cmath>

namespace binviz {

SchemeTag parse_scheme(const std::string& name) {
  if (name == "gray") return SchemeTag::gray;
  if (name == "byteclass") return SchemeTag::byteclass;
  if (name == "gradient") return SchemeTag::gradient;
  if (name == "hilbert") return SchemeTag::hilbert;
  if (name == "entropy") return SchemeTag::entropy;
  if (name == "hit") return SchemeTag::hit;
  throw BadConfig("unknown scheme: " + name);
}

std::string scheme_name(SchemeTag tag) {
  switch (tag) {
    case SchemeTag::gray: return "gray";
    case SchemeTag::byteclass: return "byteclass";
    case SchemeTag::gradient: return "gradient";
    case SchemeTag::hilbert: return "hilbert";
    case SchemeTag::entropy: return "entropy";
    case SchemeTag::hit: return "hit";
  }
  throw BadConfig("unknown scheme tag");
}

int PartitionTable::distinct_classes() const {
  std::bitset<256> seen;
  for (const auto id : class_id) seen.set(id);
  return static_cast<int>(seen.count());
}

namespace {

bool is_lower(int v, bool strict) { return v >= 'a' && v <= (strict ? 'w' : 'z'); }
bool is_upper(int v, bool strict) { return v >= 'A' && v <= (strict ? 'W' : 'Z'); }
bool is_digit(int v) { return v >= '0' && v <= '9'; }
bool is_whitespace_ctl(int v) { return v == 0x09 || v == 0x0A || v == 0x0D; }
struct ClassSpec {
  std::uint8_t id;
  std::uint8_t green;
};

// Byte categories at the finest granularity used by any cut.
enum Category {
  cat_zero,
  cat_max,
  cat_lower_am,
  cat_lower_nz,
  cat_upper_am,
  cat_upper_nz,
  cat_digit_lo,
  cat_digit_hi,
  cat_space,
  cat_punct,
  cat_whitespace,
  cat_ctl_lo,
  cat_ctl_hi,
  cat_del,
  cat_high_lo,
  cat_high_hi,
};

Category categorize(int v, bool strict) {
  if (v == 0x00) return cat_zero;
  if (v == 0xFF) return cat_max;
  if (is_lower(v, strict)) return v <= 'm' ? cat_lower_am : cat_lower_nz;
  if (is_upper(v, strict)) return v <= 'M' ? cat_upper_am : cat_upper_nz;
  if (is_digit(v)) return v <= '4' ? cat_digit_lo : cat_digit_hi;
  if (v == 0x20) return cat_space;
  if (is_whitespace_ctl(v)) return cat_whitespace;
  if (v >= 0x20 && v <= 0x7E) return cat_punct;  // includes x..z/X..Z when strict
  if (v == 0x7F) return cat_del;
  if (v >= 0x80 && v <= 0xBF) return cat_high_lo;
  if (v >= 0xC0) return cat_high_hi;
  return v <= 0x0F ? cat_ctl_lo : cat_ctl_hi;
}

}  // namespace

PartitionTable build_partition_table(int cut, bool strict) {
  if (cut != 4 && cut != 8 && cut != 16) throw UnsupportedCut(cut);

  // Category -> (class id, green level) per cut. The 8-range levels follow
  // the published mapping (0, 255, 126, 64, 32, 16) completed with 8 and 4
  // down the 2^n ladder; cut 16 keeps every 8-range level and refines each
  // multi-byte class, giving whitespace and DEL their own classes.
  ClassSpec table8[16] = {
      {0, 0},   {1, 255}, {2, 126}, {2, 126}, {3, 64}, {3, 64}, {4, 32}, {4, 32},
      {5, 16},  {5, 16},  {5, 16},  {6, 8},   {6, 8},  {6, 8},  {7, 4},  {7, 4},
  };
  ClassSpec table4[16] = {
      {0, 0},   {1, 255}, {2, 126}, {2, 126}, {2, 126}, {2, 126}, {2, 126}, {2, 126},
      {2, 126}, {2, 126}, {2, 126}, {3, 16},  {3, 16},  {3, 16},  {3, 16},  {3, 16},
  };
  ClassSpec table16[16] = {
      {0, 0},  {1, 255}, {2, 126}, {3, 110}, {4, 64}, {5, 48}, {6, 32},  {7, 24},
      {8, 20}, {9, 16},  {10, 12}, {11, 8},  {12, 6}, {13, 5}, {14, 4},  {15, 2},
  };

  const ClassSpec* table = cut == 4 ? table4 : cut == 8 ? table8 : table16;
  PartitionTable result;
  result.cut = cut;
  for (int v = 0; v < 256; ++v) {
    const ClassSpec spec = table[categorize(v, strict)];
    result.class_id[static_cast<std::size_t>(v)] = spec.id;
    result.green_level[static_cast<std::size_t>(v)] = spec.green;
  }
  return result;
}

Rgb hsv_to_rgb(double h, double s, double v) {
  h = std::fmod(h, 360.0);
  if (h < 0) h += 360.0;
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1)      { r = c; g = x; }
  else if (hp < 2) { r = x; g = c; }
  else if (hp < 3) { g = c; b = x; }
  else if (hp < 4) { g = x; b = c; }
  else if (hp < 5) { r = x; b = c; }
  else             { r = c; b = x; }
  const double m = v - c;
  const auto to_byte = [](double t) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
  };
  return Rgb{to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

namespace {

Rgb byteclass_color(std::uint8_t v) {
  if (v == 0x00) return Rgb{0, 0, 0};
  if (v == 0xFF) return Rgb{255, 255, 255};
  if ((v >= 0x20 && v <= 0x7E) || v == 0x09 || v == 0x0A || v == 0x0D)
    return Rgb{55, 126, 184};
  return Rgb{228, 26, 28};
}

std::uint8_t entropy_byte(double h) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(h, 0.0, 1.0) * 255.0));
}

}  // namespace

PixelSequence encode(const ByteStream& stream, const Scheme& scheme,
                     const EntropyProfile* profile) {
  if (stream.length() == 0) throw EmptyStream();
  if (scheme.needs_entropy()) {
    if (profile == nullptr) throw ProfileMismatch("scheme requires an entropy profile");
    if (profile->values.size() != stream.length())
      throw ProfileMismatch("entropy profile length does not match the stream");
  }

  PixelSequence seq;
  seq.scheme = scheme;
  seq.pixels.reserve(stream.length());

  switch (scheme.tag) {
    case SchemeTag::gray:
      for (const auto v : stream.bytes) seq.pixels.push_back(Rgb{v, v, v});
      break;
    case SchemeTag::byteclass:
      for (const auto v : stream.bytes) seq.pixels.push_back(byteclass_color(v));
      break;
    case SchemeTag::gradient:
      for (const auto v : stream.bytes)
        seq.pixels.push_back(hsv_to_rgb(static_cast<double>(v) / 255.0 * 240.0, 1.0, 1.0));
      break;
    case SchemeTag::hilbert:
      for (const auto v : stream.bytes) seq.pixels.push_back(byte_to_rgb_hilbert(v));
      break;
    case SchemeTag::entropy:
      for (std::size_t i = 0; i < stream.length(); ++i) {
        const std::uint8_t e = entropy_byte(profile->values[i]);
        seq.pixels.push_back(Rgb{e, 0, e});
      }
      break;
    case SchemeTag::hit: {
      const PartitionTable table = build_partition_table(scheme.cut, scheme.strict_table);
      for (std::size_t i = 0; i < stream.length(); ++i) {
        const std::uint8_t e = entropy_byte(profile->values[i]);
        seq.pixels.push_back(Rgb{e, table.green_level[stream.bytes[i]], e});
      }
      break;
    }
  }
  return seq;
}

}  // namespace binviz
