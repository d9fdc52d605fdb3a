// Acceptance suite: each criterion prints one line and the binary exits
// nonzero if any fails. Thresholds are pinned here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "binviz/experiment.hpp"
#include "binviz/synth.hpp"
#include "support/oracles.hpp"
#include "support/png_reader.hpp"

using namespace binviz;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool ok, double seconds) {
  std::printf("[%s] %2d %-38s (%.1fs)\n", ok ? "PASS" : "FAIL", id, name.c_str(), seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void run(int id, const std::string& name, const std::function<bool()>& body) {
  const auto start = Clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    std::printf("       criterion %d threw: %s\n", id, e.what());
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  report(id, name, ok, seconds);
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::vector<std::uint8_t>((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
}

// ---- 1: incremental sliding profile equals naive recomputation ----------

bool entropy_oracle_equivalence() {
  Rng sizes(1001);
  for (int i = 0; i < 100; ++i) {
    const std::size_t size = 1 + sizes.below(65536);
    const auto stream = oracles::random_stream(2000 + static_cast<std::uint64_t>(i), size);
    const EntropyParams params{EntropyMode::sliding, 64, 256, 1};
    const auto profile = entropy_profile(stream, params);
    const auto expected = oracles::naive_sliding_profile(stream, params);
    if (profile.values.size() != expected.size()) return false;
    for (std::size_t j = 0; j < expected.size(); ++j)
      if (profile.values[j] != expected[j]) return false;
  }
  return true;
}

// ---- 2: entropy bounds, exact --------------------------------------------

bool entropy_bounds() {
  std::vector<std::uint8_t> constant(256, 0x41);
  if (shannon_entropy(constant) != 0.0) return false;

  std::vector<std::uint8_t> uniform(256);
  std::iota(uniform.begin(), uniform.end(), 0);
  if (shannon_entropy(uniform) / 8.0 != 1.0) return false;

  std::vector<std::uint8_t> two = {0x00, 0xFF, 0x00, 0xFF};
  if (shannon_entropy(two) / 8.0 != 0.125) return false;

  // same values through the block profile
  ByteStream stream;
  stream.bytes = uniform;
  const auto profile = entropy_profile(stream, EntropyParams{EntropyMode::block, 64, 256, 1});
  for (const double v : profile.values)
    if (v != 1.0) return false;
  return true;
}

// ---- 3: hilbert correctness ------------------------------------------------

bool hilbert_correctness() {
  for (unsigned k = 1; k <= 6; ++k) {
    const std::uint64_t cells = std::uint64_t{1} << (2 * k);
    std::vector<bool> hit(cells, false);
    for (std::uint64_t d = 0; d < cells; ++d) {
      const auto [x, y] = hilbert2d_d2xy(k, d);
      if (hilbert2d_xy2d(k, x, y) != d) return false;
      const std::size_t cell = (static_cast<std::size_t>(y) << k) | x;
      if (hit[cell]) return false;
      hit[cell] = true;
    }
  }

  for (unsigned k = 1; k <= 3; ++k) {
    const std::uint64_t cells = std::uint64_t{1} << (3 * k);
    std::set<std::array<std::uint32_t, 3>> seen;
    std::array<std::uint32_t, 3> prev{};
    for (std::uint64_t d = 0; d < cells; ++d) {
      const auto p = hilbert3d_point(k, d);
      if (d > 0) {
        int dist = 0;
        for (int axis = 0; axis < 3; ++axis)
          dist += std::abs(static_cast<int>(p[axis]) - static_cast<int>(prev[axis]));
        if (dist != 1) return false;
      }
      seen.insert(p);
      prev = p;
    }
    if (seen.size() != cells) return false;
  }

  std::set<std::array<int, 3>> colors;
  for (int v = 0; v < 256; ++v) {
    const Rgb c = byte_to_rgb_hilbert(static_cast<std::uint8_t>(v));
    colors.insert({c.r, c.g, c.b});
  }
  return colors.size() == 256;
}

// ---- 4: HIT with green zeroed equals Entropy -------------------------------

bool hit_entropy_identity() {
  for (int i = 0; i < 50; ++i) {
    const auto stream = oracles::random_stream(3000 + static_cast<std::uint64_t>(i),
                                               256 + static_cast<std::size_t>(i) * 41);
    const auto profile = entropy_profile(stream, EntropyParams{});
    const auto hit = encode(stream, Scheme{SchemeTag::hit, 8}, &profile);
    const auto ent = encode(stream, Scheme{SchemeTag::entropy}, &profile);
    for (std::size_t j = 0; j < hit.size(); ++j) {
      if (hit.pixels[j].r != ent.pixels[j].r) return false;
      if (hit.pixels[j].b != ent.pixels[j].b) return false;
      if (ent.pixels[j].g != 0) return false;
    }
  }
  return true;
}

// ---- 5: partition table conformance ----------------------------------------

bool partition_conformance() {
  const auto t = build_partition_table(8);
  if (t.green_level[0x00] != 0) return false;
  if (t.green_level[0xFF] != 255) return false;
  for (int v = 'a'; v <= 'z'; ++v)
    if (t.green_level[v] != 126) return false;
  for (int v = 'A'; v <= 'Z'; ++v)
    if (t.green_level[v] != 64) return false;
  for (int v = '0'; v <= '9'; ++v)
    if (t.green_level[v] != 32) return false;
  for (int v = 0x20; v <= 0x7E; ++v) {
    const bool alnum = (v >= 'a' && v <= 'z') || (v >= 'A' && v <= 'Z') || (v >= '0' && v <= '9');
    if (!alnum && t.green_level[v] != 16) return false;
  }
  return build_partition_table(4).distinct_classes() == 4 &&
         build_partition_table(8).distinct_classes() == 8 &&
         build_partition_table(16).distinct_classes() == 16;
}

// ---- 6: gradient checks -----------------------------------------------------

double tensor_loss(const Tensor4& out, const Tensor4& weights) {
  double total = 0.0;
  for (std::size_t i = 0; i < out.data.size(); ++i) total += out.data[i] * weights.data[i];
  return total;
}

Tensor4 acceptance_random(std::uint64_t seed, std::size_t n, std::size_t c, std::size_t h,
                          std::size_t w) {
  Rng rng(seed);
  Tensor4 t = Tensor4::zeros(n, c, h, w);
  for (auto& v : t.data) v = (rng.uniform() - 0.5);
  return t;
}

bool gradient_checks() {
  constexpr double layer_tol = 1e-4;

  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    // conv2d
    {
      Tensor4 x = acceptance_random(10 + inst, 1, 2, 6, 6);
      Tensor4 k = acceptance_random(40 + inst, 2, 2, 3, 3);
      std::vector<double> bias{0.05, -0.02};
      const Tensor4 w = acceptance_random(70 + inst, 1, 2, 6, 6);
      const auto loss = [&] { return tensor_loss(conv2d(x, k, bias), w); };
      const auto grads = conv2d_backward(x, k, w);
      for (std::size_t j = 0; j < x.data.size(); j += 5)
        if (oracles::rel_error(grads.dx.data[j], oracles::fd_tensor(x, j, 1e-4, loss)) > layer_tol)
          return false;
      for (std::size_t j = 0; j < k.data.size(); ++j)
        if (oracles::rel_error(grads.dkernels.data[j], oracles::fd_tensor(k, j, 1e-4, loss)) >
            layer_tol)
          return false;
      for (std::size_t j = 0; j < bias.size(); ++j)
        if (oracles::rel_error(grads.dbias[j], oracles::fd_vector(bias, j, 1e-4, loss)) >
            layer_tol)
          return false;
    }

    // maxpool2 over distinct values
    {
      Rng rng(100 + inst);
      std::vector<std::size_t> ranks(64);
      std::iota(ranks.begin(), ranks.end(), std::size_t{0});
      rng.shuffle(ranks);
      Tensor4 x = Tensor4::zeros(1, 1, 8, 8);
      for (std::size_t j = 0; j < 64; ++j) x.data[j] = 0.05 * static_cast<double>(ranks[j]);
      const Tensor4 w = acceptance_random(130 + inst, 1, 1, 4, 4);
      const auto loss = [&] { return tensor_loss(maxpool2(x), w); };
      const auto analytic = maxpool2_backward(x, w);
      for (std::size_t j = 0; j < x.data.size(); ++j)
        if (oracles::rel_error(analytic.data[j], oracles::fd_tensor(x, j, 1e-4, loss)) > layer_tol)
          return false;
    }

    // relu
    {
      Tensor4 x = acceptance_random(160 + inst, 1, 1, 4, 8);
      const Tensor4 w = acceptance_random(190 + inst, 1, 1, 4, 8);
      const auto loss = [&] { return tensor_loss(relu(x), w); };
      const auto analytic = relu_backward(x, w);
      for (std::size_t j = 0; j < x.data.size(); ++j)
        if (oracles::rel_error(analytic.data[j], oracles::fd_tensor(x, j, 1e-6, loss)) > layer_tol)
          return false;
    }

    // dense
    {
      Rng rng(220 + inst);
      std::vector<double> x(10), w(2 * 10), b(2), dy{1.3, -0.4};
      for (auto& v : x) v = rng.uniform() - 0.5;
      for (auto& v : w) v = rng.uniform() - 0.5;
      for (auto& v : b) v = rng.uniform() - 0.5;
      const auto loss = [&] {
        const auto out = dense(x, w, b, 2);
        return out[0] * dy[0] + out[1] * dy[1];
      };
      const auto grads = dense_backward(x, w, dy, 2);
      for (std::size_t j = 0; j < x.size(); ++j)
        if (oracles::rel_error(grads.dx[j], oracles::fd_vector(x, j, 1e-4, loss)) > layer_tol)
          return false;
      for (std::size_t j = 0; j < w.size(); ++j)
        if (oracles::rel_error(grads.dweights[j], oracles::fd_vector(w, j, 1e-4, loss)) > layer_tol)
          return false;
    }

    // softmax cross entropy
    {
      Rng rng(250 + inst);
      std::vector<double> logits(2);
      for (auto& v : logits) v = rng.uniform() * 4.0 - 2.0;
      const int label = static_cast<int>(inst % 2);
      const auto grad = softmax_xent(logits, label).second;
      const auto loss = [&] { return softmax_xent(logits, label).first; };
      for (std::size_t j = 0; j < logits.size(); ++j)
        if (oracles::rel_error(grad[j], oracles::fd_vector(logits, j, 1e-5, loss)) > layer_tol)
          return false;
    }
  }

  // stacked reduced CTN
  CtnDims dims;
  dims.in_channels = 2;
  dims.input_side = 8;
  dims.c1 = 2;
  dims.c2 = 3;
  dims.c3 = 4;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    CtnModel model = CtnModel::init(dims, 300 + inst);
    oracles::randomize_biases(model, 350 + inst);
    const Tensor4 batch = acceptance_random(400 + inst, 2, 2, 8, 8);
    const std::vector<int> labels{static_cast<int>(inst % 2), static_cast<int>((inst + 1) % 2)};
    if (oracles::ctn_gradcheck_max_err(model, batch, labels) > 1e-3) return false;
  }
  return true;
}

// ---- 7: toy overfit ---------------------------------------------------------

bool toy_overfit() {
  LabeledImages data;
  Rng rng(901);
  for (int i = 0; i < 20; ++i) {
    const int label = i % 2;
    ImageTensor img = ImageTensor::zeros(64, 64, 3);
    for (std::size_t y = 0; y < 64; ++y)
      for (std::size_t x = 0; x < 64; ++x) {
        const bool bright = label == 0 ? x < 32 : x >= 32;
        for (std::size_t c = 0; c < 3; ++c)
          img.at(y, x, c) = (bright ? 0.8 : 0.1) + 0.1 * rng.uniform();
      }
    data.images.push_back(std::move(img));
    data.labels.push_back(label);
  }

  TrainConfig cfg;
  cfg.epochs = 30;
  cfg.seed = 5;
  cfg.batch_size = 20;
  const auto [model, history] = train_ctn(data, cfg);
  if (history.size() != 30) return false;
  if (history.back().accuracy != 1.0) return false;
  for (std::size_t e = 4; e < history.size(); ++e)
    if (history[e].loss > history[e - 1].loss + 1e-9) return false;
  return evaluate(model, data).accuracy == 1.0;
}

// ---- 8: synthetic end-to-end ------------------------------------------------

bool synthetic_end_to_end() {
  oracles::TempDir dir("acceptance_corpus");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 100;
  spec.seed = 42;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  RenderConfig render_cfg;
  render_cfg.scheme = Scheme{SchemeTag::hit, 8};

  const auto [train_split, val_split] = split_dataset(manifest, SplitSpec{0.8, 42});
  LabeledImages train_data, val_data;
  for (const auto& e : train_split.entries) {
    train_data.images.push_back(render_file(e.path, render_cfg));
    train_data.labels.push_back(e.label);
  }
  for (const auto& e : val_split.entries) {
    val_data.images.push_back(render_file(e.path, render_cfg));
    val_data.labels.push_back(e.label);
  }
  if (train_data.images.size() != 160 || val_data.images.size() != 40) return false;

  TrainConfig cfg;
  cfg.epochs = 10;
  cfg.seed = 42;
  const auto [model, history] = train_ctn(train_data, cfg);
  const double val_acc = evaluate(model, val_data).accuracy;
  std::printf("       HIT(8)+CNN validation accuracy: %.4f\n", val_acc);
  if (val_acc < 0.95) return false;

  // class mean images, green channel contrast
  const auto [benign_path, malicious_path] = mean_viz(manifest, render_cfg, dir.file("viz"));
  const auto benign = pngtest::decode_png(slurp(benign_path));
  const auto malicious = pngtest::decode_png(slurp(malicious_path));
  const auto green_mean = [](const pngtest::DecodedPng& png) {
    double total = 0.0;
    for (std::size_t i = 1; i < png.pixels.size(); i += 3) total += png.pixels[i];
    return total / (static_cast<double>(png.pixels.size()) / 3.0);
  };
  const double benign_green = green_mean(benign);
  const double malicious_green = green_mean(malicious);
  std::printf("       mean green: benign %.2f vs malicious %.2f\n", benign_green,
              malicious_green);
  return benign_green > malicious_green;
}

// ---- 9: comparison harness parity -------------------------------------------

bool comparison_parity() {
  oracles::TempDir dir("acceptance_compare");
  SyntheticCorpusSpec spec;
  spec.n_per_class = 16;
  spec.seed = 7;
  spec.min_size = 2048;
  spec.max_size = 6144;
  spec.out_dir = dir.str();
  const auto manifest = gen_synthetic_corpus(spec);

  const std::vector<Scheme> schemes{{SchemeTag::gray},    {SchemeTag::byteclass},
                                    {SchemeTag::gradient}, {SchemeTag::hilbert},
                                    {SchemeTag::entropy},  {SchemeTag::hit, 8}};
  const std::vector<std::string> features{"gist+knn", "cnn"};

  ExperimentConfig cfg;
  cfg.split = {0.75, 7};
  cfg.train.epochs = 2;
  cfg.train.batch_size = 8;
  cfg.train.seed = 7;

  const auto first = run_comparison(manifest, schemes, features, cfg);
  const auto second = run_comparison(manifest, schemes, features, cfg);
  if (first.rows.size() != 12) return false;
  if (report_to_json(first) != report_to_json(second)) return false;

  // svm-raw on a constructed separable feature set
  Rng rng(808);
  FeatureSet separable;
  separable.dim = 8;
  for (int i = 0; i < 40; ++i) {
    const int label = i % 2;
    std::vector<double> values(8);
    for (auto& v : values) v = rng.uniform() * 0.2;
    values[0] = label == 1 ? 1.0 + rng.uniform() : -1.0 - rng.uniform();
    separable.rows.push_back({std::to_string(i), std::move(values), label});
  }
  const auto svm = svm_train(separable, SvmHyper{1e-3, 200, 0.1, 3});
  for (const auto& row : separable.rows)
    if (svm_predict(svm, row.values) != row.label) return false;
  return true;
}

// ---- 10: serialization round trips ------------------------------------------

bool serialization_round_trips() {
  oracles::TempDir dir("acceptance_io");

  CtnDims dims;
  dims.in_channels = 3;
  dims.input_side = 8;
  dims.c1 = 4;
  dims.c2 = 5;
  dims.c3 = 6;
  const CtnModel model = CtnModel::init(dims, 77);
  save_model(model, dir.file("m.ctn"));
  const CtnModel loaded = load_model(dir.file("m.ctn"));
  if (!(loaded == model)) return false;
  save_model(loaded, dir.file("m2.ctn"));
  if (slurp(dir.file("m.ctn")) != slurp(dir.file("m2.ctn"))) return false;

  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(500 + seed);
    const std::size_t side = 4 + rng.below(29);
    const std::size_t channels = rng.below(2) == 0 ? 1 : 3;
    ImageTensor img = ImageTensor::zeros(side, side, channels);
    for (auto& v : img.data) v = rng.uniform();
    const auto decoded = pngtest::decode_png(encode_png(img));
    if (decoded.width != side || decoded.channels != static_cast<int>(channels)) return false;
    for (std::size_t i = 0; i < img.data.size(); ++i)
      if (decoded.pixels[i] != static_cast<std::uint8_t>(std::lround(img.data[i] * 255.0)))
        return false;
  }
  return true;
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  run(1, "entropy incremental == naive oracle", entropy_oracle_equivalence);
  run(2, "entropy bounds, exact", entropy_bounds);
  run(3, "hilbert bijection and adjacency", hilbert_correctness);
  run(4, "HIT/entropy structural identity", hit_entropy_identity);
  run(5, "partition table conformance", partition_conformance);
  run(6, "gradient checks vs finite differences", gradient_checks);
  run(7, "toy set overfits to 100%", toy_overfit);
  run(8, "synthetic corpus HIT+CNN >= 0.95", synthetic_end_to_end);
  run(9, "comparison harness parity", comparison_parity);
  run(10, "model and PNG round trips", serialization_round_trips);
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
