#include "binviz/synth.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "binviz/errors.hpp"
#include "binviz/rng.hpp"

namespace binviz {

namespace fs = std::filesystem;

namespace {

const char* kWords[] = {
    "the",    "quick",   "system",  "binary",  "header",  "process", "windows", "library",
    "value",  "static",  "update",  "version", "config",  "report",  "service", "object",
    "kernel", "module",  "buffer",  "string",  "offset",  "import",  "export",  "table",
    "index",  "memory",  "handle",  "thread",  "result",  "status",  "format",  "record",
    "client", "server",  "socket",  "packet",  "stream",  "output",  "input",   "cache",
};
constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);

// Dictionary text: low byte-entropy, dominated by lowercase letters.
void append_text(std::vector<std::uint8_t>& out, std::size_t target, Rng& rng) {
  std::size_t column = 0;
  while (out.size() < target) {
    const char* word = kWords[rng.below(kWordCount)];
    for (const char* p = word; *p && out.size() < target; ++p) out.push_back(static_cast<std::uint8_t>(*p));
    column += 8;
    if (out.size() < target) out.push_back(column >= 64 ? '\n' : ' ');
    if (column >= 64) column = 0;
  }
}

void append_zeros(std::vector<std::uint8_t>& out, std::size_t count, std::size_t target) {
  for (std::size_t i = 0; i < count && out.size() < target; ++i) out.push_back(0x00);
}

void append_random(std::vector<std::uint8_t>& out, std::size_t count, std::size_t target,
                   Rng& rng) {
  for (std::size_t i = 0; i < count && out.size() < target; ++i) out.push_back(rng.next_byte());
}

std::vector<std::uint8_t> benign_bytes(std::size_t size, Rng& rng) {
  std::vector<std::uint8_t> out;
  out.reserve(size);
  while (out.size() < size) {
    append_text(out, std::min(size, out.size() + 400 + rng.below(1200)), rng);
    append_zeros(out, 200 + rng.below(800), size);
  }
  return out;
}

std::vector<std::uint8_t> malicious_bytes(std::size_t size, Rng& rng) {
  std::vector<std::uint8_t> out;
  out.reserve(size);
  while (out.size() < size) {
    append_random(out, 800 + rng.below(2400), size, rng);
    // sparse printable strings, like leftover metadata in a packed sample
    append_text(out, std::min(size, out.size() + 16 + rng.below(64)), rng);
  }
  return out;
}

}  // namespace

DatasetManifest gen_synthetic_corpus(const SyntheticCorpusSpec& spec) {
  if (spec.n_per_class < 1) throw BadConfig("n_per_class must be >= 1");
  if (spec.min_size < 1 || spec.max_size < spec.min_size) throw BadConfig("bad size range");

  std::error_code ec;
  fs::create_directories(spec.out_dir, ec);
  if (ec) throw IoError("cannot create directory: " + spec.out_dir);

  Rng rng(spec.seed);
  DatasetManifest manifest;
  manifest.name = "synthetic";

  const auto emit = [&](int label, std::size_t index) {
    const std::size_t size =
        spec.min_size + rng.below(static_cast<std::uint32_t>(spec.max_size - spec.min_size + 1));
    const std::vector<std::uint8_t> bytes =
        label == 0 ? benign_bytes(size, rng) : malicious_bytes(size, rng);

    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04zu.bin", label == 0 ? "benign" : "malicious", index);
    const fs::path path = fs::path(spec.out_dir) / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write: " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write: " + path.string());
    manifest.entries.push_back({path.string(), label});
  };

  for (std::size_t i = 0; i < spec.n_per_class; ++i) emit(0, i);
  for (std::size_t i = 0; i < spec.n_per_class; ++i) emit(1, i);

  write_manifest(manifest, (fs::path(spec.out_dir) / "manifest.csv").string());
  return manifest;
}

}  // namespace binviz
