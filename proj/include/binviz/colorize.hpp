#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "binviz/entropy.hpp"
#include "binviz/errors.hpp"
#include "binviz/hilbert.hpp"
#include "binviz/ingest.hpp"

namespace binviz {

enum class SchemeTag { gray, byteclass, gradient, hilbert, entropy, hit };

struct Scheme {
  SchemeTag tag = SchemeTag::gray;
  int cut = 8;                // HIT only; one of 4, 8, 16
  bool strict_table = false;  // literal a-w / A-W letter ranges of the published table

  bool needs_entropy() const { return tag == SchemeTag::entropy || tag == SchemeTag::hit; }
};

SchemeTag parse_scheme(const std::string& name);
std::string scheme_name(SchemeTag tag);

// Byte value -> green level and class id. `cut` classes partition 0..255.
struct PartitionTable {
  std::array<std::uint8_t, 256> green_level{};
  std::array<std::uint8_t, 256> class_id{};
  int cut = 8;

  int distinct_classes() const;
};

PartitionTable build_partition_table(int cut, bool strict = false);

struct PixelSequence {
  std::vector<Rgb> pixels;
  Scheme scheme;

  std::size_t size() const { return pixels.size(); }
};

// One pixel per source byte under the selected scheme. Entropy and HIT require
// a profile whose length matches the stream.
PixelSequence encode(const ByteStream& stream, const Scheme& scheme,
                     const EntropyProfile* profile = nullptr);

// h in degrees [0,360), s and v in [0,1].
Rgb hsv_to_rgb(double h, double s, double v);

}  // namespace binviz
