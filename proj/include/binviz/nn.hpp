#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "binviz/errors.hpp"
#include "binviz/imaging.hpp"

namespace binviz {

// Dense 4D tensor, row-major n -> c -> h -> w. All math runs in double;
// model parameters are kept in float32 to match the storage format.
struct Tensor4 {
  std::size_t n = 0, c = 0, h = 0, w = 0;
  std::vector<double> data;

  static Tensor4 zeros(std::size_t n, std::size_t c, std::size_t h, std::size_t w) {
    return Tensor4{n, c, h, w, std::vector<double>(n * c * h * w, 0.0)};
  }
  std::size_t size() const { return n * c * h * w; }
  double& at(std::size_t i, std::size_t ci, std::size_t y, std::size_t x) {
    return data[((i * c + ci) * h + y) * w + x];
  }
  const double& at(std::size_t i, std::size_t ci, std::size_t y, std::size_t x) const {
    return data[((i * c + ci) * h + y) * w + x];
  }
};

// --- layer primitives -------------------------------------------------------

// Cross-correlation with square kernels, `kernels` shaped (out_c, in_c, k, k).
Tensor4 conv2d(const Tensor4& x, const Tensor4& kernels, std::span<const double> bias,
               int stride = 1, int pad = 1);

struct Conv2dGrads {
  Tensor4 dx;
  Tensor4 dkernels;
  std::vector<double> dbias;
};
Conv2dGrads conv2d_backward(const Tensor4& x, const Tensor4& kernels, const Tensor4& dy,
                            int stride = 1, int pad = 1);

// 2x2 window, stride 2. Backward routes the gradient to the first maximum of
// each window in row-major scan order.
Tensor4 maxpool2(const Tensor4& x);
Tensor4 maxpool2_backward(const Tensor4& x, const Tensor4& dy);

Tensor4 relu(const Tensor4& x);
Tensor4 relu_backward(const Tensor4& x, const Tensor4& dy);

// y = W x + b with W shaped (out, in) row-major.
std::vector<double> dense(std::span<const double> x, std::span<const double> weights,
                          std::span<const double> bias, std::size_t out_dim);
struct DenseGrads {
  std::vector<double> dx;
  std::vector<double> dweights;
  std::vector<double> dbias;
};
DenseGrads dense_backward(std::span<const double> x, std::span<const double> weights,
                          std::span<const double> dy, std::size_t out_dim);

// Numerically stabilized -log softmax(logits)[label]; grad = softmax - onehot.
std::pair<double, std::vector<double>> softmax_xent(std::span<const double> logits, int label);

// --- CTN model ---------------------------------------------------------------

// conv(3x3, pad 1) -> relu -> pool -> conv -> relu -> pool -> conv -> relu ->
// flatten -> dense. Defaults follow the 3x64x64 input with 16/32/64 channels,
// so the spatial trace is 64 -> 64 -> 32 -> 32 -> 16 -> 16 and the head sees
// 64*16*16 features. input_side must be divisible by 4.
struct CtnDims {
  std::size_t in_channels = 3;
  std::size_t input_side = 64;
  std::size_t c1 = 16, c2 = 32, c3 = 64;
  std::size_t classes = 2;

  std::size_t flat_dim() const { return c3 * (input_side / 4) * (input_side / 4); }
  bool operator==(const CtnDims&) const = default;
};

struct CtnModel {
  CtnDims dims;
  std::vector<float> conv1_w, conv1_b;
  std::vector<float> conv2_w, conv2_b;
  std::vector<float> conv3_w, conv3_b;
  std::vector<float> fc_w, fc_b;

  // He-style init from the seeded PRNG, scaled by `init_scale`; zero biases.
  static CtnModel init(const CtnDims& dims, std::uint64_t seed, double init_scale = 1.0);

  std::size_t parameter_count() const;
  bool operator==(const CtnModel&) const = default;
};

// Per-parameter gradients, double precision, mirroring the model layout.
struct CtnGrads {
  std::vector<double> conv1_w, conv1_b;
  std::vector<double> conv2_w, conv2_b;
  std::vector<double> conv3_w, conv3_b;
  std::vector<double> fc_w, fc_b;
};

// Logits for a batch shaped (n, in_channels, side, side); returns (n, classes, 1, 1).
Tensor4 ctn_forward(const CtnModel& model, const Tensor4& batch);

// Mean cross-entropy over the batch and its parameter gradients. When
// `predictions` is given, it receives the argmax class per sample from the
// same forward pass.
std::pair<double, CtnGrads> ctn_gradients(const CtnModel& model, const Tensor4& batch,
                                          std::span<const int> labels,
                                          std::vector<int>* predictions = nullptr);

struct TrainConfig {
  double learning_rate = 0.01;
  double momentum = 0.9;
  std::size_t batch_size = 32;
  std::size_t epochs = 30;
  std::uint64_t seed = 0;
  double weight_init_scale = 1.0;
};

struct EpochStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

struct Metrics {
  double accuracy = 0.0;
  std::array<double, 2> per_class{0.0, 0.0};
  std::array<std::array<std::size_t, 2>, 2> confusion{};  // [actual][predicted]
};

struct LabeledImages {
  std::vector<ImageTensor> images;  // channel count must match dims.in_channels
  std::vector<int> labels;
};

Tensor4 to_batch(const std::vector<ImageTensor>& images, std::size_t first, std::size_t count);

// Minibatch SGD with momentum; per-epoch Fisher-Yates shuffle from the seeded
// PRNG. Deterministic for a fixed seed (single-threaded).
std::pair<CtnModel, std::vector<EpochStats>> train_ctn(const LabeledImages& data,
                                                       const TrainConfig& cfg,
                                                       const CtnDims& dims = {});

Metrics evaluate(const CtnModel& model, const LabeledImages& data);

// Format: magic "CTN1", six u32 LE dims (in_channels, input_side, c1, c2, c3,
// classes), then parameters as f32 LE in layer order.
void save_model(const CtnModel& model, const std::string& path);
CtnModel load_model(const std::string& path);

}  // namespace binviz
