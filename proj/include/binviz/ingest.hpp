#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "binviz/errors.hpp"

namespace binviz {

// Raw file contents plus provenance. Encoders reject empty streams.
struct ByteStream {
  std::vector<std::uint8_t> bytes;
  std::string source_path;

  std::size_t length() const { return bytes.size(); }
};

struct ManifestEntry {
  std::string path;
  int label = 0;  // 0 = benign, 1 = malicious
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::string name;

  std::size_t size() const { return entries.size(); }
};

struct SplitSpec {
  double train_fraction = 0.8;
  std::uint64_t seed = 0;
};

// Parses a CSV manifest of `path,label` lines. Labels accept 0|1|benign|malicious.
// Relative paths are resolved against the manifest's directory.
DatasetManifest load_manifest(const std::string& path);

void write_manifest(const DatasetManifest& manifest, const std::string& path);

// Deterministic stratified split. The shuffle is keyed by spec.seed; the train
// total is round(train_fraction * |m|) with per-class counts apportioned by
// largest remainder so each class stays within one sample of proportionality.
std::pair<DatasetManifest, DatasetManifest> split_dataset(const DatasetManifest& manifest,
                                                          const SplitSpec& spec);

ByteStream read_bytes(const std::string& path);

}  // namespace binviz
