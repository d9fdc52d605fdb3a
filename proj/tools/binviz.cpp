// binviz: render binaries as semantically colored images and classify them.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "binviz/experiment.hpp"
#include "binviz/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string scheme = "hit";
  int cut = 8;
  bool strict_table = false;
  std::string layout = "horizontal";
  std::size_t size = 64;
  std::string entropy_mode = "sliding";
  std::size_t window = 64;
  std::size_t block = 256;
  std::size_t stride = 1;
  std::uint64_t seed = 0;
};

void add_render_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--scheme", flags.scheme, "gray|byteclass|gradient|hilbert|entropy|hit")
      ->check(CLI::IsMember({"gray", "byteclass", "gradient", "hilbert", "entropy", "hit"}));
  cmd->add_option("--cut", flags.cut, "HIT partition count")->check(CLI::IsMember({4, 8, 16}));
  cmd->add_flag("--strict-table", flags.strict_table,
                "use the literal a-w/A-W letter ranges of the published table");
  cmd->add_option("--layout", flags.layout, "horizontal|vertical|hilbert")
      ->check(CLI::IsMember({"horizontal", "vertical", "hilbert"}));
  cmd->add_option("--size", flags.size, "output side length")->check(CLI::IsMember({32, 64, 128}));
  cmd->add_option("--entropy-mode", flags.entropy_mode, "block|sliding")
      ->check(CLI::IsMember({"block", "sliding"}));
  cmd->add_option("--window", flags.window, "sliding entropy window (bytes)");
  cmd->add_option("--block", flags.block, "block entropy size (bytes)");
  cmd->add_option("--stride", flags.stride, "entropy stride (bytes)");
}

binviz::RenderConfig to_render_config(const CommonFlags& flags) {
  binviz::RenderConfig cfg;
  cfg.scheme.tag = binviz::parse_scheme(flags.scheme);
  cfg.scheme.cut = flags.cut;
  cfg.scheme.strict_table = flags.strict_table;
  cfg.layout.mode = binviz::parse_layout(flags.layout);
  cfg.layout.target = flags.size;
  cfg.entropy.mode =
      flags.entropy_mode == "block" ? binviz::EntropyMode::block : binviz::EntropyMode::sliding;
  cfg.entropy.window = flags.window;
  cfg.entropy.block = flags.block;
  cfg.entropy.stride = flags.stride;
  return cfg;
}

std::vector<binviz::Scheme> parse_schemes(const std::vector<std::string>& names,
                                          const CommonFlags& flags) {
  std::vector<binviz::Scheme> schemes;
  for (const auto& name : names)
    schemes.push_back(
        binviz::Scheme{binviz::parse_scheme(name), flags.cut, flags.strict_table});
  return schemes;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw binviz::IoError("cannot write: " + path);
  out << content;
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

json metrics_json(const binviz::Metrics& m) {
  return json{{"accuracy", m.accuracy},
              {"per_class", m.per_class},
              {"confusion", m.confusion}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"binary visualization and malware classification toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  app.add_option("--seed", flags.seed, "deterministic seed");

  // gen-corpus
  auto* gen = app.add_subcommand("gen-corpus", "generate a synthetic benign/malicious corpus");
  std::string gen_out;
  std::size_t gen_n = 100, gen_min = 8192, gen_max = 24576;
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--n-per-class", gen_n, "files per class");
  gen->add_option("--min-size", gen_min, "minimum file size");
  gen->add_option("--max-size", gen_max, "maximum file size");

  // render
  auto* render = app.add_subcommand("render", "render files to PNG images");
  std::string render_manifest, render_input, render_out;
  render->add_option("--manifest", render_manifest, "dataset manifest CSV");
  render->add_option("--input", render_input, "single input file");
  render->add_option("--out", render_out, "output directory")->required();
  add_render_flags(render, flags);

  // featurize
  auto* featurize = app.add_subcommand("featurize", "emit feature CSV rows per input");
  std::string feat_manifest, feat_kind = "gist", feat_out;
  std::size_t feat_dim = 4096;
  int feat_grid = 4, feat_scales = 4, feat_orients = 8;
  featurize->add_option("--manifest", feat_manifest, "dataset manifest CSV")->required();
  featurize->add_option("--feature", feat_kind, "gist|raw")
      ->check(CLI::IsMember({"gist", "raw"}));
  featurize->add_option("--out", feat_out, "output CSV path")->required();
  featurize->add_option("--dim", feat_dim, "raw vector dimension");
  featurize->add_option("--grid", feat_grid, "gist grid side");
  featurize->add_option("--scales", feat_scales, "gabor scales");
  featurize->add_option("--orientations", feat_orients, "gabor orientations");
  add_render_flags(featurize, flags);

  // train
  auto* train = app.add_subcommand("train", "train the CNN on a manifest");
  std::string train_manifest, train_out, train_metrics_path;
  double train_lr = 0.01, train_momentum = 0.9, train_fraction = 0.8;
  std::size_t train_epochs = 30, train_batch = 32;
  train->add_option("--manifest", train_manifest, "dataset manifest CSV")->required();
  train->add_option("--out", train_out, "model output path")->required();
  train->add_option("--metrics", train_metrics_path, "metrics JSON output path");
  train->add_option("--epochs", train_epochs, "training epochs");
  train->add_option("--lr", train_lr, "learning rate");
  train->add_option("--momentum", train_momentum, "SGD momentum");
  train->add_option("--batch", train_batch, "minibatch size");
  train->add_option("--train-fraction", train_fraction, "train split fraction");
  add_render_flags(train, flags);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate a model kind");
  std::string eval_model = "cnn", eval_model_file, eval_manifest;
  std::string eval_train_features, eval_test_features;
  int eval_k = 3;
  double eval_lambda = 1e-3, eval_lr = 0.1;
  std::size_t eval_epochs = 100;
  eval->add_option("--model", eval_model, "knn|svm|cnn")
      ->check(CLI::IsMember({"knn", "svm", "cnn"}));
  eval->add_option("--model-file", eval_model_file, "CTN model file (cnn)");
  eval->add_option("--manifest", eval_manifest, "manifest to evaluate (cnn)");
  eval->add_option("--train-features", eval_train_features, "training feature CSV (knn/svm)");
  eval->add_option("--test-features", eval_test_features, "test feature CSV (knn/svm)");
  eval->add_option("--k", eval_k, "kNN neighbour count");
  eval->add_option("--lambda", eval_lambda, "SVM L2 strength");
  eval->add_option("--lr", eval_lr, "SVM learning rate");
  eval->add_option("--epochs", eval_epochs, "SVM epochs");
  add_render_flags(eval, flags);

  // compare
  auto* compare = app.add_subcommand("compare", "scheme x feature comparison table");
  std::string cmp_manifest, cmp_out;
  std::vector<std::string> cmp_schemes = {"gray", "byteclass", "gradient",
                                          "hilbert", "entropy", "hit"};
  std::vector<std::string> cmp_features = {"gist+knn", "cnn"};
  double cmp_fraction = 0.8, cmp_lr = 0.01;
  std::size_t cmp_epochs = 10, cmp_batch = 32;
  compare->add_option("--manifest", cmp_manifest, "dataset manifest CSV")->required();
  compare->add_option("--out", cmp_out, "report JSON output path");
  compare->add_option("--schemes", cmp_schemes, "schemes to compare")->delimiter(',');
  compare->add_option("--features", cmp_features, "features: gist+knn,cnn,svm-raw")
      ->delimiter(',');
  compare->add_option("--train-fraction", cmp_fraction, "train split fraction");
  compare->add_option("--epochs", cmp_epochs, "CNN epochs");
  compare->add_option("--lr", cmp_lr, "CNN learning rate");
  compare->add_option("--batch", cmp_batch, "CNN batch size");
  add_render_flags(compare, flags);

  // sweep-cut
  auto* sweep = app.add_subcommand("sweep-cut", "HIT+CNN validation accuracy per cut point");
  std::string sweep_manifest, sweep_out;
  std::vector<int> sweep_cuts = {4, 8, 16};
  double sweep_fraction = 0.8, sweep_lr = 0.01;
  std::size_t sweep_epochs = 10, sweep_batch = 32;
  sweep->add_option("--manifest", sweep_manifest, "dataset manifest CSV")->required();
  sweep->add_option("--out", sweep_out, "plot-ready CSV output path");
  sweep->add_option("--cuts", sweep_cuts, "cut points")->delimiter(',');
  sweep->add_option("--train-fraction", sweep_fraction, "train split fraction");
  sweep->add_option("--epochs", sweep_epochs, "CNN epochs");
  sweep->add_option("--lr", sweep_lr, "CNN learning rate");
  sweep->add_option("--batch", sweep_batch, "CNN batch size");
  add_render_flags(sweep, flags);

  // mean-viz
  auto* mean = app.add_subcommand("mean-viz", "per-class mean images");
  std::string mean_manifest, mean_out;
  mean->add_option("--manifest", mean_manifest, "dataset manifest CSV")->required();
  mean->add_option("--out", mean_out, "output directory")->required();
  add_render_flags(mean, flags);

  // global flags like --seed are accepted after the subcommand too
  for (auto* sub : {gen, render, featurize, train, eval, compare, sweep, mean})
    sub->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      binviz::SyntheticCorpusSpec spec;
      spec.out_dir = gen_out;
      spec.n_per_class = gen_n;
      spec.seed = flags.seed;
      spec.min_size = gen_min;
      spec.max_size = gen_max;
      const auto manifest = binviz::gen_synthetic_corpus(spec);
      std::cout << "wrote " << manifest.size() << " files under " << gen_out << "\n";
    } else if (*render) {
      const auto cfg = to_render_config(flags);
      fs::create_directories(render_out);
      std::vector<binviz::ManifestEntry> inputs;
      if (!render_manifest.empty())
        inputs = binviz::load_manifest(render_manifest).entries;
      else if (!render_input.empty())
        inputs.push_back({render_input, 0});
      else
        throw binviz::BadConfig("render needs --manifest or --input");
      for (const auto& entry : inputs) {
        const auto img = binviz::render_file(entry.path, cfg);
        const auto out_path =
            (fs::path(render_out) / (stem_of(entry.path) + "." + flags.scheme + ".png")).string();
        binviz::write_png(img, out_path);
      }
      std::cout << "rendered " << inputs.size() << " image(s) to " << render_out << "\n";
    } else if (*featurize) {
      const auto manifest = binviz::load_manifest(feat_manifest);
      binviz::FeatureSet set;
      if (feat_kind == "raw") {
        set.dim = feat_dim;
        for (const auto& entry : manifest.entries)
          set.rows.push_back(
              {entry.path, binviz::raw_vector(binviz::read_bytes(entry.path), feat_dim),
               entry.label});
      } else {
        const auto cfg = to_render_config(flags);
        const auto bank =
            binviz::build_gabor_bank(feat_scales, feat_orients, static_cast<int>(flags.size));
        for (const auto& entry : manifest.entries) {
          const auto img = binviz::render_file(entry.path, cfg);
          binviz::FeatureRow row{entry.path, binviz::gist_descriptor(img, bank, feat_grid),
                                 entry.label};
          if (set.rows.empty()) set.dim = row.values.size();
          set.rows.push_back(std::move(row));
        }
      }
      binviz::write_features_csv(set, feat_out);
      std::cout << "wrote " << set.rows.size() << " rows of dim " << set.dim << " to " << feat_out
                << "\n";
    } else if (*train) {
      const auto manifest = binviz::load_manifest(train_manifest);
      const auto [train_split, val_split] =
          binviz::split_dataset(manifest, {train_fraction, flags.seed});
      const auto cfg = to_render_config(flags);

      binviz::LabeledImages train_data, val_data;
      for (const auto& e : train_split.entries) {
        train_data.images.push_back(binviz::render_file(e.path, cfg));
        train_data.labels.push_back(e.label);
      }
      for (const auto& e : val_split.entries) {
        val_data.images.push_back(binviz::render_file(e.path, cfg));
        val_data.labels.push_back(e.label);
      }

      binviz::TrainConfig train_cfg;
      train_cfg.learning_rate = train_lr;
      train_cfg.momentum = train_momentum;
      train_cfg.batch_size = train_batch;
      train_cfg.epochs = train_epochs;
      train_cfg.seed = flags.seed;
      auto [model, history] = binviz::train_ctn(train_data, train_cfg);
      binviz::save_model(model, train_out);

      const auto train_metrics = binviz::evaluate(model, train_data);
      const auto val_metrics = binviz::evaluate(model, val_data);
      json doc{{"scheme", flags.scheme},
               {"feature", "cnn"},
               {"train_acc", train_metrics.accuracy},
               {"val_acc", val_metrics.accuracy},
               {"confusion", val_metrics.confusion}};
      const std::string text = doc.dump(2);
      if (!train_metrics_path.empty()) write_text(train_metrics_path, text + "\n");
      std::cout << text << "\n";
    } else if (*eval) {
      json doc;
      if (eval_model == "cnn") {
        if (eval_model_file.empty() || eval_manifest.empty())
          throw binviz::BadConfig("eval --model cnn needs --model-file and --manifest");
        const auto model = binviz::load_model(eval_model_file);
        const auto manifest = binviz::load_manifest(eval_manifest);
        const auto cfg = to_render_config(flags);
        binviz::LabeledImages data;
        for (const auto& e : manifest.entries) {
          data.images.push_back(binviz::render_file(e.path, cfg));
          data.labels.push_back(e.label);
        }
        doc = metrics_json(binviz::evaluate(model, data));
        doc["model"] = "cnn";
      } else {
        if (eval_train_features.empty() || eval_test_features.empty())
          throw binviz::BadConfig("eval --model knn|svm needs --train-features and --test-features");
        const auto train_set = binviz::load_features_csv(eval_train_features);
        const auto test_set = binviz::load_features_csv(eval_test_features);
        std::array<std::array<std::size_t, 2>, 2> cm{};
        if (eval_model == "knn") {
          for (const auto& row : test_set.rows)
            ++cm[static_cast<std::size_t>(row.label)][static_cast<std::size_t>(
                binviz::knn_predict(train_set, row.values, eval_k))];
        } else {
          const auto svm = binviz::svm_train(
              train_set, binviz::SvmHyper{eval_lambda, eval_epochs, eval_lr, flags.seed});
          for (const auto& row : test_set.rows)
            ++cm[static_cast<std::size_t>(row.label)]
                [static_cast<std::size_t>(binviz::svm_predict(svm, row.values))];
        }
        const auto total = cm[0][0] + cm[0][1] + cm[1][0] + cm[1][1];
        doc["model"] = eval_model;
        doc["accuracy"] = static_cast<double>(cm[0][0] + cm[1][1]) / static_cast<double>(total);
        doc["confusion"] = cm;
      }
      std::cout << doc.dump(2) << "\n";
    } else if (*compare) {
      const auto manifest = binviz::load_manifest(cmp_manifest);
      binviz::ExperimentConfig cfg;
      cfg.split = {cmp_fraction, flags.seed};
      cfg.train.epochs = cmp_epochs;
      cfg.train.learning_rate = cmp_lr;
      cfg.train.batch_size = cmp_batch;
      cfg.train.seed = flags.seed;
      cfg.layout = to_render_config(flags).layout;
      cfg.entropy = to_render_config(flags).entropy;
      cfg.svm.seed = flags.seed;
      const auto report =
          binviz::run_comparison(manifest, parse_schemes(cmp_schemes, flags), cmp_features, cfg);
      const std::string text = binviz::report_to_json(report);
      if (!cmp_out.empty()) write_text(cmp_out, text + "\n");
      std::cout << binviz::report_table(report);
    } else if (*sweep) {
      const auto manifest = binviz::load_manifest(sweep_manifest);
      binviz::ExperimentConfig cfg;
      cfg.split = {sweep_fraction, flags.seed};
      cfg.train.epochs = sweep_epochs;
      cfg.train.learning_rate = sweep_lr;
      cfg.train.batch_size = sweep_batch;
      cfg.train.seed = flags.seed;
      cfg.layout = to_render_config(flags).layout;
      cfg.entropy = to_render_config(flags).entropy;
      const auto rows = binviz::sweep_cut(manifest, sweep_cuts, cfg);
      const std::string csv = binviz::sweep_to_csv(rows);
      if (!sweep_out.empty()) write_text(sweep_out, csv);
      std::cout << csv;
    } else if (*mean) {
      const auto manifest = binviz::load_manifest(mean_manifest);
      const auto cfg = to_render_config(flags);
      const auto [benign_path, malicious_path] = binviz::mean_viz(manifest, cfg, mean_out);
      std::cout << benign_path << "\n" << malicious_path << "\n";
    }
  } catch (const binviz::Error& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}}.dump() << "\n";
    return 2;
  }
  return 0;
}
