// Independent oracles shared by the unit and acceptance suites. These mirror
// the contracts, not the implementations: the sliding-entropy oracle rebuilds
// every histogram from scratch, and the finite-difference helpers probe models
// through the forward pass only.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "binviz/entropy.hpp"
#include "binviz/nn.hpp"
#include "binviz/rng.hpp"

namespace oracles {

inline binviz::ByteStream random_stream(std::uint64_t seed, std::size_t size) {
  binviz::Rng rng(seed);
  binviz::ByteStream s;
  s.source_path = "<random>";
  s.bytes.resize(size);
  for (auto& b : s.bytes) b = rng.next_byte();
  return s;
}

// Naive per-position recomputation of the sliding profile.
inline std::vector<double> naive_sliding_profile(const binviz::ByteStream& stream,
                                                 const binviz::EntropyParams& params) {
  const std::size_t n = stream.length();
  std::vector<double> values(n, 0.0);
  for (std::size_t center = 0; center < n; center += params.stride) {
    const auto [lo, hi] = binviz::sliding_window_bounds(center, params.window, n);
    std::array<std::uint32_t, 256> hist{};
    for (std::size_t i = lo; i < hi; ++i) ++hist[stream.bytes[i]];
    const double value = binviz::entropy_from_histogram(hist, hi - lo) / 8.0;
    const std::size_t run_end = std::min(n, center + params.stride);
    for (std::size_t j = center; j < run_end; ++j) values[j] = value;
  }
  return values;
}

// --- finite differences ------------------------------------------------------

inline double rel_error(double analytic, double numeric) {
  const double denom = std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / denom;
}

// Central difference d loss / d x[idx] for a double-valued tensor element.
template <class LossFn>
double fd_tensor(binviz::Tensor4& t, std::size_t idx, double eps, LossFn&& loss) {
  const double orig = t.data[idx];
  t.data[idx] = orig + eps;
  const double f_plus = loss();
  t.data[idx] = orig - eps;
  const double f_minus = loss();
  t.data[idx] = orig;
  return (f_plus - f_minus) / (2.0 * eps);
}

template <class LossFn>
double fd_vector(std::vector<double>& v, std::size_t idx, double eps, LossFn&& loss) {
  const double orig = v[idx];
  v[idx] = orig + eps;
  const double f_plus = loss();
  v[idx] = orig - eps;
  const double f_minus = loss();
  v[idx] = orig;
  return (f_plus - f_minus) / (2.0 * eps);
}

// Central difference through a float32 model parameter. The denominator is
// the perturbation that was actually representable, so float rounding does
// not contaminate the estimate.
template <class LossFn>
double fd_model_param(std::vector<float>& params, std::size_t idx, double eps, LossFn&& loss) {
  const float orig = params[idx];
  const auto plus = static_cast<float>(static_cast<double>(orig) + eps);
  const auto minus = static_cast<float>(static_cast<double>(orig) - eps);
  params[idx] = plus;
  const double f_plus = loss();
  params[idx] = minus;
  const double f_minus = loss();
  params[idx] = orig;
  return (f_plus - f_minus) / (static_cast<double>(plus) - static_cast<double>(minus));
}

struct ModelParamView {
  std::vector<float>* values;
  const std::vector<double>* grads;
  const char* name;
};

inline std::vector<ModelParamView> param_views(binviz::CtnModel& m, const binviz::CtnGrads& g) {
  return {{&m.conv1_w, &g.conv1_w, "conv1_w"}, {&m.conv1_b, &g.conv1_b, "conv1_b"},
          {&m.conv2_w, &g.conv2_w, "conv2_w"}, {&m.conv2_b, &g.conv2_b, "conv2_b"},
          {&m.conv3_w, &g.conv3_w, "conv3_w"}, {&m.conv3_b, &g.conv3_b, "conv3_b"},
          {&m.fc_w, &g.fc_w, "fc_w"},          {&m.fc_b, &g.fc_b, "fc_b"}};
}

// Gradient-check instances keep biases away from zero: with zero biases, dead
// upstream activations park conv pre-activations exactly on the relu kink,
// where no finite difference can agree with a subgradient.
inline void randomize_biases(binviz::CtnModel& model, std::uint64_t seed) {
  binviz::Rng rng(seed);
  for (auto* bias : {&model.conv1_b, &model.conv2_b, &model.conv3_b, &model.fc_b})
    for (auto& b : *bias)
      b = static_cast<float>((0.02 + 0.03 * rng.uniform()) * (rng.below(2) ? 1.0 : -1.0));
}

// Max relative error over every parameter of a reduced CTN. A probe that
// disagrees is retried with smaller steps: an error that vanishes as eps
// shrinks is a crossed kink inside the difference interval, not a wrong
// gradient.
inline double ctn_gradcheck_max_err(binviz::CtnModel& model, const binviz::Tensor4& batch,
                                    const std::vector<int>& labels) {
  const auto [loss, grads] = binviz::ctn_gradients(model, batch, labels);
  (void)loss;
  double worst = 0.0;
  for (auto& view : param_views(model, grads)) {
    for (std::size_t j = 0; j < view.values->size(); ++j) {
      double best = 1e300;
      for (const double eps : {1e-5, 1e-6, 1e-7}) {
        const double numeric = fd_model_param(*view.values, j, eps, [&] {
          return binviz::ctn_gradients(model, batch, labels).first;
        });
        best = std::min(best, rel_error((*view.grads)[j], numeric));
        if (best < 1e-4) break;
      }
      worst = std::max(worst, best);
    }
  }
  return worst;
}

// Temporary directory that cleans up after itself.
struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& tag) {
    path = std::filesystem::temp_directory_path() /
           ("binviz_" + tag + "_" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace oracles
