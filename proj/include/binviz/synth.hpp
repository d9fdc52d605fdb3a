#pragma once

#include <cstdint>
#include <string>

#include "binviz/ingest.hpp"

namespace binviz {

// Stand-in corpus for experiments: benign files interleave dictionary text
// with zero runs (low sliding entropy), malicious files interleave uniform
// random sections with short printable strings (high sliding entropy).
struct SyntheticCorpusSpec {
  std::size_t n_per_class = 100;
  std::uint64_t seed = 42;
  std::size_t min_size = 8192;
  std::size_t max_size = 24576;
  std::string out_dir;
};

// Writes 2*n_per_class files plus manifest.csv under spec.out_dir and returns
// the manifest. Byte-deterministic for a fixed spec.
DatasetManifest gen_synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace binviz
