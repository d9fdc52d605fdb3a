#include "binviz/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace binviz {

namespace fs = std::filesystem;
using nlohmann::json;

ImageTensor render_stream(const ByteStream& stream, const RenderConfig& cfg) {
  cfg.layout.validate();
  EntropyProfile profile;
  const EntropyProfile* profile_ptr = nullptr;
  if (cfg.scheme.needs_entropy()) {
    profile = entropy_profile(stream, cfg.entropy);
    profile_ptr = &profile;
  }
  const PixelSequence pixels = encode(stream, cfg.scheme, profile_ptr);
  return resize_nearest(layout(pixels, cfg.layout), cfg.layout.target);
}

ImageTensor render_file(const std::string& path, const RenderConfig& cfg) {
  return render_stream(read_bytes(path), cfg);
}

namespace {

LabeledImages render_manifest(const DatasetManifest& manifest, const RenderConfig& cfg) {
  LabeledImages out;
  out.images.reserve(manifest.size());
  out.labels.reserve(manifest.size());
  for (const auto& entry : manifest.entries) {
    out.images.push_back(render_file(entry.path, cfg));
    out.labels.push_back(entry.label);
  }
  return out;
}

double knn_accuracy(const FeatureSet& train, const FeatureSet& queries, int k) {
  std::size_t correct = 0;
  for (const auto& row : queries.rows)
    if (knn_predict(train, row.values, k) == row.label) ++correct;
  return static_cast<double>(correct) / static_cast<double>(queries.rows.size());
}

std::array<std::array<std::size_t, 2>, 2> knn_confusion(const FeatureSet& train,
                                                        const FeatureSet& queries, int k) {
  std::array<std::array<std::size_t, 2>, 2> cm{};
  for (const auto& row : queries.rows)
    ++cm[static_cast<std::size_t>(row.label)]
        [static_cast<std::size_t>(knn_predict(train, row.values, k))];
  return cm;
}

FeatureSet gist_features(const DatasetManifest& manifest, const LabeledImages& rendered,
                         const GaborBank& bank, int grid) {
  FeatureSet set;
  for (std::size_t i = 0; i < rendered.images.size(); ++i) {
    FeatureRow row;
    row.id = manifest.entries[i].path;
    row.values = gist_descriptor(rendered.images[i], bank, grid);
    row.label = rendered.labels[i];
    if (set.rows.empty()) set.dim = row.values.size();
    set.rows.push_back(std::move(row));
  }
  return set;
}

FeatureSet raw_features(const DatasetManifest& manifest, std::size_t dim) {
  FeatureSet set;
  set.dim = dim;
  for (const auto& entry : manifest.entries) {
    FeatureRow row;
    row.id = entry.path;
    row.values = raw_vector(read_bytes(entry.path), dim);
    row.label = entry.label;
    set.rows.push_back(std::move(row));
  }
  return set;
}

}  // namespace

ExperimentReport run_comparison(const DatasetManifest& manifest,
                                const std::vector<Scheme>& schemes,
                                const std::vector<std::string>& features,
                                const ExperimentConfig& cfg) {
  const auto [train_split, val_split] = split_dataset(manifest, cfg.split);

  ExperimentReport report;
  report.seed = cfg.split.seed;
  {
    std::ostringstream summary;
    summary << "split=" << cfg.split.train_fraction << " seed=" << cfg.split.seed
            << " epochs=" << cfg.train.epochs << " lr=" << cfg.train.learning_rate
            << " batch=" << cfg.train.batch_size << " size=" << cfg.layout.target
            << " window=" << cfg.entropy.window << " k=" << cfg.knn_k;
    report.config_summary = summary.str();
  }

  const bool want_cnn = std::find(features.begin(), features.end(), "cnn") != features.end();
  const bool want_gist =
      std::find(features.begin(), features.end(), "gist+knn") != features.end();
  const bool want_svm =
      std::find(features.begin(), features.end(), "svm-raw") != features.end();

  GaborBank bank;
  if (want_gist)
    bank = build_gabor_bank(cfg.gist_scales, cfg.gist_orientations,
                            static_cast<int>(cfg.layout.target));

  for (const Scheme& scheme : schemes) {
    RenderConfig render_cfg{scheme, cfg.layout, cfg.entropy};
    const LabeledImages train_images = render_manifest(train_split, render_cfg);
    const LabeledImages val_images = render_manifest(val_split, render_cfg);

    if (want_gist) {
      const FeatureSet train_set = gist_features(train_split, train_images, bank, cfg.gist_grid);
      const FeatureSet val_set = gist_features(val_split, val_images, bank, cfg.gist_grid);
      ReportRow row;
      row.scheme = scheme_name(scheme.tag);
      row.feature = "gist+knn";
      row.train_acc = knn_accuracy(train_set, train_set, cfg.knn_k);
      row.val_acc = knn_accuracy(train_set, val_set, cfg.knn_k);
      row.confusion = knn_confusion(train_set, val_set, cfg.knn_k);
      report.rows.push_back(std::move(row));
    }

    if (want_cnn) {
      TrainConfig train_cfg = cfg.train;
      auto [model, history] = train_ctn(train_images, train_cfg);
      const Metrics train_metrics = evaluate(model, train_images);
      const Metrics val_metrics = evaluate(model, val_images);
      ReportRow row;
      row.scheme = scheme_name(scheme.tag);
      row.feature = "cnn";
      row.train_acc = train_metrics.accuracy;
      row.val_acc = val_metrics.accuracy;
      row.confusion = val_metrics.confusion;
      report.rows.push_back(std::move(row));
    }
  }

  if (want_svm) {
    const FeatureSet train_set = raw_features(train_split, cfg.raw_dim);
    const FeatureSet val_set = raw_features(val_split, cfg.raw_dim);
    const SvmModel model = svm_train(train_set, cfg.svm);
    const auto accuracy = [&](const FeatureSet& set) {
      std::size_t correct = 0;
      for (const auto& row : set.rows)
        if (svm_predict(model, row.values) == row.label) ++correct;
      return static_cast<double>(correct) / static_cast<double>(set.rows.size());
    };
    ReportRow row;
    row.scheme = "raw";
    row.feature = "svm-raw";
    row.train_acc = accuracy(train_set);
    row.val_acc = accuracy(val_set);
    for (const auto& r : val_set.rows)
      ++row.confusion[static_cast<std::size_t>(r.label)]
          [static_cast<std::size_t>(svm_predict(model, r.values))];
    report.rows.push_back(std::move(row));
  }

  return report;
}

std::string report_to_json(const ExperimentReport& report) {
  json doc;
  doc["seed"] = report.seed;
  doc["config"] = report.config_summary;
  doc["rows"] = json::array();
  for (const auto& row : report.rows) {
    doc["rows"].push_back({{"scheme", row.scheme},
                           {"feature", row.feature},
                           {"train_acc", row.train_acc},
                           {"val_acc", row.val_acc},
                           {"confusion", row.confusion}});
  }
  return doc.dump(2);
}

std::string report_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << "scheme      feature     train_acc  val_acc\n";
  out << "----------  ----------  ---------  -------\n";
  char line[96];
  for (const auto& row : report.rows) {
    std::snprintf(line, sizeof(line), "%-10s  %-10s  %9.4f  %7.4f\n", row.scheme.c_str(),
                  row.feature.c_str(), row.train_acc, row.val_acc);
    out << line;
  }
  return out.str();
}

std::vector<std::pair<int, double>> sweep_cut(const DatasetManifest& manifest,
                                              const std::vector<int>& cuts,
                                              const ExperimentConfig& cfg) {
  const auto [train_split, val_split] = split_dataset(manifest, cfg.split);
  std::vector<std::pair<int, double>> rows;
  for (const int cut : cuts) {
    RenderConfig render_cfg{Scheme{SchemeTag::hit, cut}, cfg.layout, cfg.entropy};
    const LabeledImages train_images = render_manifest(train_split, render_cfg);
    const LabeledImages val_images = render_manifest(val_split, render_cfg);
    auto [model, history] = train_ctn(train_images, cfg.train);
    rows.emplace_back(cut, evaluate(model, val_images).accuracy);
  }
  return rows;
}

std::string sweep_to_csv(const std::vector<std::pair<int, double>>& rows) {
  std::ostringstream out;
  out << "cut,val_acc\n";
  out.precision(17);
  for (const auto& [cut, acc] : rows) out << cut << ',' << acc << '\n';
  return out.str();
}

std::pair<std::string, std::string> mean_viz(const DatasetManifest& manifest,
                                             const RenderConfig& cfg,
                                             const std::string& out_dir) {
  std::vector<ImageTensor> per_class[2];
  for (const auto& entry : manifest.entries)
    per_class[entry.label == 1 ? 1 : 0].push_back(render_file(entry.path, cfg));
  if (per_class[0].empty() || per_class[1].empty())
    throw MissingClass("mean_viz needs at least one file of each class");

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  const std::string benign_path = (fs::path(out_dir) / "benign_mean.png").string();
  const std::string malicious_path = (fs::path(out_dir) / "malicious_mean.png").string();
  write_png(mean_image(per_class[0]), benign_path);
  write_png(mean_image(per_class[1]), malicious_path);
  return {benign_path, malicious_path};
}

}  // namespace binviz
