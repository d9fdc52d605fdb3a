#include <doctest.h>

#include <fstream>

#include "binviz/experiment.hpp"
#include "binviz/synth.hpp"
#include "support/oracles.hpp"
#include "support/png_reader.hpp"

using namespace binviz;

namespace {

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

ExperimentConfig tiny_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.split = {0.75, seed};
  cfg.train.epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.seed = seed;
  cfg.svm.seed = seed;
  cfg.raw_dim = 512;
  return cfg;
}

}  // namespace

TEST_CASE("synthetic corpus determinism and balance") {
  oracles::TempDir dir_a("corpus_a"), dir_b("corpus_b");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 4;
  spec.seed = 1;
  spec.min_size = 4096;
  spec.max_size = 8192;

  spec.out_dir = dir_a.str();
  const auto m1 = gen_synthetic_corpus(spec);
  spec.out_dir = dir_b.str();
  const auto m2 = gen_synthetic_corpus(spec);

  REQUIRE(m1.size() == 8);
  std::size_t benign = 0;
  for (const auto& e : m1.entries) benign += e.label == 0 ? 1 : 0;
  CHECK(benign == 4);

  for (std::size_t i = 0; i < m1.size(); ++i)
    CHECK(slurp(m1.entries[i].path) == slurp(m2.entries[i].path));

  // the manifest on disk loads back to the same entries
  const auto loaded = load_manifest(dir_a.file("manifest.csv"));
  REQUIRE(loaded.size() == m1.size());
  for (std::size_t i = 0; i < m1.size(); ++i) {
    CHECK(loaded.entries[i].path == m1.entries[i].path);
    CHECK(loaded.entries[i].label == m1.entries[i].label);
  }
}

TEST_CASE("benign files carry less sliding entropy than malicious ones") {
  oracles::TempDir dir("corpus_entropy");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 3;
  spec.seed = 9;
  spec.min_size = 8192;
  spec.max_size = 16384;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  // window 256: a 64-byte window cannot exceed 6 of 8 bits by pigeonhole,
  // so the corpus gates are checked at a window wide enough to saturate
  EntropyParams params{EntropyMode::sliding, 256, 256, 1};
  const auto mean_entropy = [&](const std::string& path) {
    const auto stream = read_bytes(path);
    const auto profile = entropy_profile(stream, params);
    double total = 0.0;
    for (const double v : profile.values) total += v;
    return total / static_cast<double>(profile.values.size());
  };

  for (std::size_t i = 0; i < spec.n_per_class; ++i) {
    const double benign = mean_entropy(manifest.entries[i].path);
    const double malicious = mean_entropy(manifest.entries[spec.n_per_class + i].path);
    CHECK(benign < 0.6);
    CHECK(malicious > 0.8);
    CHECK(benign < malicious);
  }
}

TEST_CASE("render pipeline is deterministic end to end") {
  oracles::TempDir dir("render");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 1;
  spec.seed = 3;
  spec.min_size = 4096;
  spec.max_size = 4096;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  RenderConfig cfg;
  cfg.scheme = Scheme{SchemeTag::hit, 8};
  const auto a = render_file(manifest.entries[0].path, cfg);
  const auto b = render_file(manifest.entries[0].path, cfg);
  CHECK(a.width == 64);
  CHECK(a.channels == 3);
  CHECK(a.data == b.data);
  for (const double v : a.data) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
}

TEST_CASE("comparison harness emits sane, reproducible reports") {
  oracles::TempDir dir("compare");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 8;
  spec.seed = 21;
  spec.min_size = 2048;
  spec.max_size = 6144;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  const std::vector<Scheme> schemes{{SchemeTag::gray}, {SchemeTag::hit, 8}};
  const std::vector<std::string> features{"cnn", "svm-raw"};
  const auto cfg = tiny_config(33);

  const auto report = run_comparison(manifest, schemes, features, cfg);
  REQUIRE(report.rows.size() == 3);  // 2 cnn rows + 1 shared svm-raw row
  for (const auto& row : report.rows) {
    CHECK(row.train_acc >= 0.0);
    CHECK(row.train_acc <= 1.0);
    CHECK(row.val_acc >= 0.0);
    CHECK(row.val_acc <= 1.0);
  }
  CHECK(report.rows[0].feature == "cnn");
  CHECK(report.rows.back().feature == "svm-raw");
  CHECK(report.rows.back().scheme == "raw");

  const auto again = run_comparison(manifest, schemes, features, cfg);
  CHECK(report_to_json(report) == report_to_json(again));

  const auto table = report_table(report);
  CHECK(table.find("gray") != std::string::npos);
  CHECK(table.find("cnn") != std::string::npos);
}

TEST_CASE("cut sweep returns one row per cut, deterministically") {
  oracles::TempDir dir("sweep");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 6;
  spec.seed = 50;
  spec.min_size = 2048;
  spec.max_size = 4096;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  const auto cfg = tiny_config(60);
  const auto rows = sweep_cut(manifest, {4, 8, 16}, cfg);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].first == 4);
  CHECK(rows[1].first == 8);
  CHECK(rows[2].first == 16);
  for (const auto& [cut, acc] : rows) {
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
  }
  const auto again = sweep_cut(manifest, {4, 8, 16}, cfg);
  CHECK(sweep_to_csv(rows) == sweep_to_csv(again));
  CHECK(sweep_to_csv(rows).rfind("cut,val_acc\n", 0) == 0);
}

TEST_CASE("mean images contrast benign green against malicious red") {
  oracles::TempDir dir("meanviz");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 4;
  spec.seed = 77;
  spec.min_size = 4096;
  spec.max_size = 8192;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  RenderConfig cfg;
  cfg.scheme = Scheme{SchemeTag::hit, 8};
  const auto [benign_path, malicious_path] = mean_viz(manifest, cfg, dir.file("viz"));

  const auto benign = pngtest::decode_png(slurp(benign_path));
  const auto malicious = pngtest::decode_png(slurp(malicious_path));
  REQUIRE(benign.channels == 3);

  const auto channel_mean = [](const pngtest::DecodedPng& png, int ch) {
    double total = 0.0;
    for (std::size_t i = static_cast<std::size_t>(ch); i < png.pixels.size(); i += 3)
      total += png.pixels[i];
    return total / (static_cast<double>(png.pixels.size()) / 3.0);
  };
  CHECK(channel_mean(benign, 1) > channel_mean(malicious, 1));    // green
  CHECK(channel_mean(malicious, 0) > channel_mean(benign, 0));    // red
}

TEST_CASE("mean_viz identity on one file per class and the missing-class error") {
  oracles::TempDir dir("meanviz_single");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 1;
  spec.seed = 123;
  spec.min_size = 2048;
  spec.max_size = 2048;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  RenderConfig cfg;
  cfg.scheme = Scheme{SchemeTag::gray};
  const auto [benign_path, malicious_path] = mean_viz(manifest, cfg, dir.file("viz"));

  const auto direct = render_file(manifest.entries[0].path, cfg);
  const auto decoded = pngtest::decode_png(slurp(benign_path));
  REQUIRE(decoded.pixels.size() == direct.data.size());
  for (std::size_t i = 0; i < direct.data.size(); ++i)
    CHECK(decoded.pixels[i] == static_cast<std::uint8_t>(std::lround(direct.data[i] * 255.0)));

  DatasetManifest one_class;
  one_class.entries = {manifest.entries[0]};
  CHECK_THROWS_AS(mean_viz(one_class, cfg, dir.file("viz2")), MissingClass);
}
