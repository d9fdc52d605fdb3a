#include "binviz/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "binviz/rng.hpp"

namespace binviz {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

int parse_label(const std::string& token) {
  if (token == "0" || token == "benign") return 0;
  if (token == "1" || token == "malicious") return 1;
  return -1;
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
  if (!fs::exists(path) || fs::is_directory(path)) throw MissingFile(path);
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path);

  const fs::path base = fs::path(path).parent_path();
  DatasetManifest manifest;
  manifest.name = fs::path(path).stem().string();

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto comma = stripped.rfind(',');
    if (comma == std::string::npos) throw ParseError(line_no, "expected `path,label`");
    const std::string raw_path = trim(stripped.substr(0, comma));
    const int label = parse_label(trim(stripped.substr(comma + 1)));
    if (raw_path.empty()) throw ParseError(line_no, "empty path");
    if (label < 0) throw ParseError(line_no, "label must be 0|1|benign|malicious");
    fs::path p(raw_path);
    if (p.is_relative()) p = base / p;
    manifest.entries.push_back({p.string(), label});
  }
  return manifest;
}

void write_manifest(const DatasetManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write manifest: " + path);
  const fs::path base = fs::path(path).parent_path();
  for (const auto& e : manifest.entries) {
    fs::path p(e.path);
    // keep entries relative to the manifest when they live beneath it
    std::error_code ec;
    const fs::path rel = fs::relative(p, base.empty() ? "." : base, ec);
    const std::string written =
        (!ec && !rel.empty() && rel.native().compare(0, 2, "..") != 0) ? rel.string() : p.string();
    out << written << ',' << e.label << '\n';
  }
  if (!out) throw IoError("short write: " + path);
}

std::pair<DatasetManifest, DatasetManifest> split_dataset(const DatasetManifest& manifest,
                                                          const SplitSpec& spec) {
  if (manifest.entries.empty()) throw EmptyManifest();
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    throw BadConfig("train_fraction must lie in (0,1)");

  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < manifest.entries.size(); ++i)
    by_class[manifest.entries[i].label == 1 ? 1 : 0].push_back(i);

  // Largest-remainder apportionment: total is round(f*n) exactly, each class
  // within one sample of f*n_c.
  const auto total_train = static_cast<std::size_t>(
      std::lround(spec.train_fraction * static_cast<double>(manifest.entries.size())));
  std::size_t take[2];
  double remainder[2];
  std::size_t base_sum = 0;
  for (int c = 0; c < 2; ++c) {
    const double quota = spec.train_fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<std::size_t>(std::floor(quota));
    remainder[c] = quota - static_cast<double>(take[c]);
    base_sum += take[c];
  }
  for (std::size_t extra = base_sum; extra < total_train; ++extra) {
    const int c = (remainder[1] > remainder[0]) ? 1 : 0;
    if (take[c] < by_class[c].size()) {
      ++take[c];
      remainder[c] = -1.0;
    } else {
      ++take[1 - c];
      remainder[1 - c] = -1.0;
    }
  }

  Rng rng(spec.seed);
  rng.shuffle(by_class[0]);
  rng.shuffle(by_class[1]);

  DatasetManifest train{{}, manifest.name + ".train"};
  DatasetManifest val{{}, manifest.name + ".val"};
  for (int c = 0; c < 2; ++c) {
    for (std::size_t i = 0; i < by_class[c].size(); ++i) {
      auto& dst = i < take[c] ? train : val;
      dst.entries.push_back(manifest.entries[by_class[c][i]]);
    }
  }
  return {std::move(train), std::move(val)};
}

ByteStream read_bytes(const std::string& path) {
  if (!fs::exists(path)) throw MissingFile(path);
  if (!fs::is_regular_file(path)) throw IoError("not a regular file: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  ByteStream stream;
  stream.source_path = path;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw IoError("cannot stat: " + path);
  in.seekg(0, std::ios::beg);
  stream.bytes.resize(static_cast<std::size_t>(size));
  if (size > 0) {
    in.read(reinterpret_cast<char*>(stream.bytes.data()), size);
    if (!in) throw IoError("short read: " + path);
  }
  return stream;
}

}  // namespace binviz
