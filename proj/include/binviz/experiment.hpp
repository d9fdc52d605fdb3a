#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "binviz/baselines.hpp"
#include "binviz/colorize.hpp"
#include "binviz/entropy.hpp"
#include "binviz/gist.hpp"
#include "binviz/imaging.hpp"
#include "binviz/ingest.hpp"
#include "binviz/nn.hpp"

namespace binviz {

struct RenderConfig {
  Scheme scheme;
  LayoutSpec layout;
  EntropyParams entropy;
};

// read -> entropy (if needed) -> encode -> layout -> resize.
ImageTensor render_stream(const ByteStream& stream, const RenderConfig& cfg);
ImageTensor render_file(const std::string& path, const RenderConfig& cfg);

struct ExperimentConfig {
  SplitSpec split;
  TrainConfig train;
  LayoutSpec layout;
  EntropyParams entropy;
  int knn_k = 3;
  int gist_grid = 4;
  int gist_scales = 4;
  int gist_orientations = 8;
  SvmHyper svm;
  std::size_t raw_dim = 4096;
};

struct ReportRow {
  std::string scheme;
  std::string feature;  // gist+knn | cnn | svm-raw
  double train_acc = 0.0;
  double val_acc = 0.0;
  std::array<std::array<std::size_t, 2>, 2> confusion{};  // validation, [actual][predicted]
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::uint64_t seed = 0;
  std::string config_summary;
};

// Runs every (scheme, feature) cell on one shared split. The svm-raw baseline
// consumes the pre-image byte vector, so it is emitted once under scheme "raw".
ExperimentReport run_comparison(const DatasetManifest& manifest,
                                const std::vector<Scheme>& schemes,
                                const std::vector<std::string>& features,
                                const ExperimentConfig& cfg);

std::string report_to_json(const ExperimentReport& report);
std::string report_table(const ExperimentReport& report);

// HIT+CNN validation accuracy per cut on the shared split.
std::vector<std::pair<int, double>> sweep_cut(const DatasetManifest& manifest,
                                              const std::vector<int>& cuts,
                                              const ExperimentConfig& cfg);
std::string sweep_to_csv(const std::vector<std::pair<int, double>>& rows);

// Renders every file, averages per class, writes benign_mean.png and
// malicious_mean.png under out_dir; returns the two paths.
std::pair<std::string, std::string> mean_viz(const DatasetManifest& manifest,
                                             const RenderConfig& cfg,
                                             const std::string& out_dir);

}  // namespace binviz
