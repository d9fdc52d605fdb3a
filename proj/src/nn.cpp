#include "binviz/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "binviz/rng.hpp"

namespace binviz {

namespace {

void check_finite(double v) {
  if (!std::isfinite(v)) throw DivergenceDetected();
}

std::size_t conv_out_side(std::size_t in, int k, int stride, int pad) {
  return (in + 2 * static_cast<std::size_t>(pad) - static_cast<std::size_t>(k)) /
             static_cast<std::size_t>(stride) +
         1;
}

}  // namespace

Tensor4 conv2d(const Tensor4& x, const Tensor4& kernels, std::span<const double> bias,
               int stride, int pad) {
  if (kernels.c != x.c) throw ShapeMismatch("conv2d: channel mismatch");
  if (kernels.h != kernels.w) throw ShapeMismatch("conv2d: kernels must be square");
  if (bias.size() != kernels.n) throw ShapeMismatch("conv2d: bias size mismatch");
  const int k = static_cast<int>(kernels.h);
  const int in_h = static_cast<int>(x.h), in_w = static_cast<int>(x.w);
  const std::size_t out_h = conv_out_side(x.h, k, stride, pad);
  const std::size_t out_w = conv_out_side(x.w, k, stride, pad);

  Tensor4 out = Tensor4::zeros(x.n, kernels.n, out_h, out_w);
  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t co = 0; co < kernels.n; ++co) {
      double* out_plane = &out.at(i, co, 0, 0);
      for (std::size_t p = 0; p < out_h * out_w; ++p) out_plane[p] = bias[co];
      for (std::size_t ci = 0; ci < x.c; ++ci) {
        const double* in_plane = &x.at(i, ci, 0, 0);
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const double w = kernels.at(co, ci, static_cast<std::size_t>(ky),
                                        static_cast<std::size_t>(kx));
            if (w == 0.0) continue;
            for (std::size_t oy = 0; oy < out_h; ++oy) {
              const int iy = static_cast<int>(oy) * stride + ky - pad;
              if (iy < 0 || iy >= in_h) continue;
              double* out_row = out_plane + oy * out_w;
              const double* in_row = in_plane + static_cast<std::size_t>(iy) * x.w;
              for (std::size_t ox = 0; ox < out_w; ++ox) {
                const int ix = static_cast<int>(ox) * stride + kx - pad;
                if (ix < 0 || ix >= in_w) continue;
                out_row[ox] += w * in_row[ix];
              }
            }
          }
        }
      }
    }
  }
  return out;
}

Conv2dGrads conv2d_backward(const Tensor4& x, const Tensor4& kernels, const Tensor4& dy,
                            int stride, int pad) {
  const int k = static_cast<int>(kernels.h);
  const int in_h = static_cast<int>(x.h), in_w = static_cast<int>(x.w);
  if (dy.n != x.n || dy.c != kernels.n) throw ShapeMismatch("conv2d_backward: bad dy shape");

  Conv2dGrads grads{Tensor4::zeros(x.n, x.c, x.h, x.w),
                    Tensor4::zeros(kernels.n, kernels.c, kernels.h, kernels.w),
                    std::vector<double>(kernels.n, 0.0)};

  for (std::size_t i = 0; i < x.n; ++i) {
    for (std::size_t co = 0; co < kernels.n; ++co) {
      const double* dy_plane = &dy.at(i, co, 0, 0);
      for (std::size_t p = 0; p < dy.h * dy.w; ++p) grads.dbias[co] += dy_plane[p];
      for (std::size_t ci = 0; ci < x.c; ++ci) {
        const double* in_plane = &x.at(i, ci, 0, 0);
        double* dx_plane = &grads.dx.at(i, ci, 0, 0);
        for (int ky = 0; ky < k; ++ky) {
          for (int kx = 0; kx < k; ++kx) {
            const double w = kernels.at(co, ci, static_cast<std::size_t>(ky),
                                        static_cast<std::size_t>(kx));
            double dk = 0.0;
            for (std::size_t oy = 0; oy < dy.h; ++oy) {
              const int iy = static_cast<int>(oy) * stride + ky - pad;
              if (iy < 0 || iy >= in_h) continue;
              const double* dy_row = dy_plane + oy * dy.w;
              const double* in_row = in_plane + static_cast<std::size_t>(iy) * x.w;
              double* dx_row = dx_plane + static_cast<std::size_t>(iy) * x.w;
              for (std::size_t ox = 0; ox < dy.w; ++ox) {
                const int ix = static_cast<int>(ox) * stride + kx - pad;
                if (ix < 0 || ix >= in_w) continue;
                dk += dy_row[ox] * in_row[ix];
                dx_row[ix] += dy_row[ox] * w;
              }
            }
            grads.dkernels.at(co, ci, static_cast<std::size_t>(ky),
                              static_cast<std::size_t>(kx)) += dk;
          }
        }
      }
    }
  }
  return grads;
}

Tensor4 maxpool2(const Tensor4& x) {
  if (x.h % 2 != 0 || x.w % 2 != 0) throw OddSpatialDim("maxpool2 requires even spatial dims");
  Tensor4 out = Tensor4::zeros(x.n, x.c, x.h / 2, x.w / 2);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t c = 0; c < x.c; ++c)
      for (std::size_t oy = 0; oy < out.h; ++oy)
        for (std::size_t ox = 0; ox < out.w; ++ox) {
          double best = x.at(i, c, 2 * oy, 2 * ox);
          best = std::max(best, x.at(i, c, 2 * oy, 2 * ox + 1));
          best = std::max(best, x.at(i, c, 2 * oy + 1, 2 * ox));
          best = std::max(best, x.at(i, c, 2 * oy + 1, 2 * ox + 1));
          out.at(i, c, oy, ox) = best;
        }
  return out;
}

Tensor4 maxpool2_backward(const Tensor4& x, const Tensor4& dy) {
  if (dy.n != x.n || dy.c != x.c || dy.h != x.h / 2 || dy.w != x.w / 2)
    throw ShapeMismatch("maxpool2_backward: bad dy shape");
  Tensor4 dx = Tensor4::zeros(x.n, x.c, x.h, x.w);
  for (std::size_t i = 0; i < x.n; ++i)
    for (std::size_t c = 0; c < x.c; ++c)
      for (std::size_t oy = 0; oy < dy.h; ++oy)
        for (std::size_t ox = 0; ox < dy.w; ++ox) {
          // first maximum in row-major window order receives the gradient
          std::size_t best_y = 2 * oy, best_x = 2 * ox;
          double best = x.at(i, c, best_y, best_x);
          const std::size_t ys[4] = {2 * oy, 2 * oy, 2 * oy + 1, 2 * oy + 1};
          const std::size_t xs[4] = {2 * ox, 2 * ox + 1, 2 * ox, 2 * ox + 1};
          for (int w = 1; w < 4; ++w) {
            const double v = x.at(i, c, ys[w], xs[w]);
            if (v > best) {
              best = v;
              best_y = ys[w];
              best_x = xs[w];
            }
          }
          dx.at(i, c, best_y, best_x) += dy.at(i, c, oy, ox);
        }
  return dx;
}

Tensor4 relu(const Tensor4& x) {
  Tensor4 out = x;
  for (auto& v : out.data) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor4 relu_backward(const Tensor4& x, const Tensor4& dy) {
  if (dy.size() != x.size()) throw ShapeMismatch("relu_backward: shape mismatch");
  Tensor4 dx = dy;
  for (std::size_t i = 0; i < dx.data.size(); ++i)
    if (x.data[i] <= 0.0) dx.data[i] = 0.0;  // subgradient 0 at 0
  return dx;
}

std::vector<double> dense(std::span<const double> x, std::span<const double> weights,
                          std::span<const double> bias, std::size_t out_dim) {
  if (out_dim == 0 || weights.size() != out_dim * x.size() || bias.size() != out_dim)
    throw ShapeMismatch("dense: inconsistent shapes");
  std::vector<double> y(out_dim);
  for (std::size_t o = 0; o < out_dim; ++o) {
    double acc = bias[o];
    const double* row = weights.data() + o * x.size();
    for (std::size_t j = 0; j < x.size(); ++j) acc += row[j] * x[j];
    y[o] = acc;
  }
  return y;
}

DenseGrads dense_backward(std::span<const double> x, std::span<const double> weights,
                          std::span<const double> dy, std::size_t out_dim) {
  if (dy.size() != out_dim || weights.size() != out_dim * x.size())
    throw ShapeMismatch("dense_backward: inconsistent shapes");
  DenseGrads grads{std::vector<double>(x.size(), 0.0), std::vector<double>(weights.size()),
                   std::vector<double>(dy.begin(), dy.end())};
  for (std::size_t o = 0; o < out_dim; ++o) {
    const double* row = weights.data() + o * x.size();
    double* drow = grads.dweights.data() + o * x.size();
    for (std::size_t j = 0; j < x.size(); ++j) {
      drow[j] = dy[o] * x[j];
      grads.dx[j] += dy[o] * row[j];
    }
  }
  return grads;
}

std::pair<double, std::vector<double>> softmax_xent(std::span<const double> logits, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= logits.size())
    throw ShapeMismatch("softmax_xent: label out of range");
  const double peak = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  std::vector<double> grad(logits.size());
  for (std::size_t i = 0; i < logits.size(); ++i) {
    grad[i] = std::exp(logits[i] - peak);
    denom += grad[i];
  }
  const double loss =
      -(logits[static_cast<std::size_t>(label)] - peak - std::log(denom));
  for (std::size_t i = 0; i < logits.size(); ++i) grad[i] /= denom;
  grad[static_cast<std::size_t>(label)] -= 1.0;
  return {loss, std::move(grad)};
}

// --- CTN ---------------------------------------------------------------------

namespace {

Tensor4 widen(const std::vector<float>& params, std::size_t n, std::size_t c, std::size_t h,
              std::size_t w) {
  Tensor4 t{n, c, h, w, std::vector<double>(params.size())};
  for (std::size_t i = 0; i < params.size(); ++i) t.data[i] = params[i];
  return t;
}

std::vector<double> widen(const std::vector<float>& params) {
  return std::vector<double>(params.begin(), params.end());
}

struct CtnParams {
  Tensor4 k1, k2, k3;
  std::vector<double> b1, b2, b3, fcw, fcb;
};

CtnParams widen_model(const CtnModel& m) {
  const auto& d = m.dims;
  return CtnParams{widen(m.conv1_w, d.c1, d.in_channels, 3, 3),
                   widen(m.conv2_w, d.c2, d.c1, 3, 3),
                   widen(m.conv3_w, d.c3, d.c2, 3, 3),
                   widen(m.conv1_b),
                   widen(m.conv2_b),
                   widen(m.conv3_b),
                   widen(m.fc_w),
                   widen(m.fc_b)};
}

struct CtnCache {
  Tensor4 x;
  Tensor4 z1, a1, p1;  // conv -> relu -> pool
  Tensor4 z2, a2, p2;
  Tensor4 z3, a3;      // conv -> relu -> flatten
  std::vector<std::vector<double>> logits;  // per sample
};

CtnCache ctn_forward_cached(const CtnModel& model, const CtnParams& params, const Tensor4& batch) {
  const auto& d = model.dims;
  if (batch.c != d.in_channels || batch.h != d.input_side || batch.w != d.input_side)
    throw ShapeMismatch("ctn_forward: batch shape does not match the model");
  if (d.input_side % 4 != 0) throw ShapeMismatch("ctn: input side must be divisible by 4");

  CtnCache cache;
  cache.x = batch;
  cache.z1 = conv2d(batch, params.k1, params.b1);
  cache.a1 = relu(cache.z1);
  cache.p1 = maxpool2(cache.a1);
  cache.z2 = conv2d(cache.p1, params.k2, params.b2);
  cache.a2 = relu(cache.z2);
  cache.p2 = maxpool2(cache.a2);
  cache.z3 = conv2d(cache.p2, params.k3, params.b3);
  cache.a3 = relu(cache.z3);

  const std::size_t flat = d.flat_dim();
  cache.logits.reserve(batch.n);
  for (std::size_t i = 0; i < batch.n; ++i) {
    std::span<const double> features{&cache.a3.at(i, 0, 0, 0), flat};
    cache.logits.push_back(dense(features, params.fcw, params.fcb, d.classes));
  }
  return cache;
}

}  // namespace

Tensor4 ctn_forward(const CtnModel& model, const Tensor4& batch) {
  const CtnParams params = widen_model(model);
  const CtnCache cache = ctn_forward_cached(model, params, batch);
  Tensor4 logits = Tensor4::zeros(batch.n, model.dims.classes, 1, 1);
  for (std::size_t i = 0; i < batch.n; ++i)
    for (std::size_t c = 0; c < model.dims.classes; ++c)
      logits.at(i, c, 0, 0) = cache.logits[i][c];
  return logits;
}

std::pair<double, CtnGrads> ctn_gradients(const CtnModel& model, const Tensor4& batch,
                                          std::span<const int> labels,
                                          std::vector<int>* predictions) {
  if (labels.size() != batch.n) throw ShapeMismatch("ctn_gradients: label count mismatch");
  const auto& d = model.dims;
  const CtnParams params = widen_model(model);
  const CtnCache cache = ctn_forward_cached(model, params, batch);
  const std::size_t flat = d.flat_dim();
  const double inv_n = 1.0 / static_cast<double>(batch.n);

  if (predictions != nullptr) {
    predictions->clear();
    for (std::size_t i = 0; i < batch.n; ++i) {
      const auto& l = cache.logits[i];
      predictions->push_back(static_cast<int>(
          std::max_element(l.begin(), l.end()) - l.begin()));
    }
  }

  CtnGrads grads{std::vector<double>(model.conv1_w.size(), 0.0),
                 std::vector<double>(model.conv1_b.size(), 0.0),
                 std::vector<double>(model.conv2_w.size(), 0.0),
                 std::vector<double>(model.conv2_b.size(), 0.0),
                 std::vector<double>(model.conv3_w.size(), 0.0),
                 std::vector<double>(model.conv3_b.size(), 0.0),
                 std::vector<double>(model.fc_w.size(), 0.0),
                 std::vector<double>(model.fc_b.size(), 0.0)};

  double loss = 0.0;
  Tensor4 da3 = Tensor4::zeros(batch.n, d.c3, d.input_side / 4, d.input_side / 4);
  for (std::size_t i = 0; i < batch.n; ++i) {
    auto [sample_loss, dlogits] = softmax_xent(cache.logits[i], labels[i]);
    loss += sample_loss * inv_n;
    for (auto& g : dlogits) g *= inv_n;

    std::span<const double> features{&cache.a3.at(i, 0, 0, 0), flat};
    DenseGrads fc = dense_backward(features, params.fcw, dlogits, d.classes);
    for (std::size_t j = 0; j < fc.dweights.size(); ++j) grads.fc_w[j] += fc.dweights[j];
    for (std::size_t j = 0; j < fc.dbias.size(); ++j) grads.fc_b[j] += fc.dbias[j];
    std::copy(fc.dx.begin(), fc.dx.end(), &da3.at(i, 0, 0, 0));
  }
  check_finite(loss);

  const Tensor4 dz3 = relu_backward(cache.z3, da3);
  Conv2dGrads c3 = conv2d_backward(cache.p2, params.k3, dz3);
  grads.conv3_w = std::move(c3.dkernels.data);
  grads.conv3_b = std::move(c3.dbias);

  const Tensor4 da2 = maxpool2_backward(cache.a2, c3.dx);
  const Tensor4 dz2 = relu_backward(cache.z2, da2);
  Conv2dGrads c2 = conv2d_backward(cache.p1, params.k2, dz2);
  grads.conv2_w = std::move(c2.dkernels.data);
  grads.conv2_b = std::move(c2.dbias);

  const Tensor4 da1 = maxpool2_backward(cache.a1, c2.dx);
  const Tensor4 dz1 = relu_backward(cache.z1, da1);
  Conv2dGrads c1 = conv2d_backward(cache.x, params.k1, dz1);
  grads.conv1_w = std::move(c1.dkernels.data);
  grads.conv1_b = std::move(c1.dbias);

  return {loss, std::move(grads)};
}

CtnModel CtnModel::init(const CtnDims& dims, std::uint64_t seed, double init_scale) {
  CtnModel m;
  m.dims = dims;
  Rng rng(seed);
  const auto he_fill = [&](std::vector<float>& dst, std::size_t count, std::size_t fan_in) {
    dst.resize(count);
    const double sigma = std::sqrt(2.0 / static_cast<double>(fan_in)) * init_scale;
    for (auto& w : dst) w = static_cast<float>(rng.normal() * sigma);
  };
  he_fill(m.conv1_w, dims.c1 * dims.in_channels * 9, dims.in_channels * 9);
  m.conv1_b.assign(dims.c1, 0.0f);
  he_fill(m.conv2_w, dims.c2 * dims.c1 * 9, dims.c1 * 9);
  m.conv2_b.assign(dims.c2, 0.0f);
  he_fill(m.conv3_w, dims.c3 * dims.c2 * 9, dims.c2 * 9);
  m.conv3_b.assign(dims.c3, 0.0f);
  he_fill(m.fc_w, dims.classes * dims.flat_dim(), dims.flat_dim());
  m.fc_b.assign(dims.classes, 0.0f);
  return m;
}

std::size_t CtnModel::parameter_count() const {
  return conv1_w.size() + conv1_b.size() + conv2_w.size() + conv2_b.size() + conv3_w.size() +
         conv3_b.size() + fc_w.size() + fc_b.size();
}

Tensor4 to_batch(const std::vector<ImageTensor>& images, std::size_t first, std::size_t count) {
  if (count == 0 || first + count > images.size()) throw ShapeMismatch("to_batch: bad range");
  const auto& proto = images[first];
  Tensor4 batch = Tensor4::zeros(count, proto.channels, proto.height, proto.width);
  for (std::size_t i = 0; i < count; ++i) {
    const ImageTensor& img = images[first + i];
    if (img.width != proto.width || img.height != proto.height ||
        img.channels != proto.channels)
      throw ShapeMismatch("to_batch: image shapes differ");
    // HWC interleaved -> CHW planes
    for (std::size_t ch = 0; ch < img.channels; ++ch)
      for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
          batch.at(i, ch, y, x) = img.at(y, x, ch);
  }
  return batch;
}

namespace {

struct Momentum {
  std::vector<double> v;
  explicit Momentum(std::size_t n) : v(n, 0.0) {}

  void step(std::vector<float>& w, const std::vector<double>& g, double lr, double mu) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      v[i] = mu * v[i] - lr * g[i];
      w[i] = static_cast<float>(w[i] + v[i]);
    }
  }
};

}  // namespace

std::pair<CtnModel, std::vector<EpochStats>> train_ctn(const LabeledImages& data,
                                                       const TrainConfig& cfg,
                                                       const CtnDims& dims) {
  if (data.images.empty()) throw EmptyDataset();
  if (data.images.size() != data.labels.size())
    throw ShapeMismatch("train_ctn: image/label count mismatch");
  if (cfg.batch_size < 1 || cfg.epochs < 1 || cfg.learning_rate < 0)
    throw BadConfig("bad training configuration");

  CtnModel model = CtnModel::init(dims, cfg.seed, cfg.weight_init_scale);
  Momentum m1w(model.conv1_w.size()), m1b(model.conv1_b.size());
  Momentum m2w(model.conv2_w.size()), m2b(model.conv2_b.size());
  Momentum m3w(model.conv3_w.size()), m3b(model.conv3_b.size());
  Momentum mfw(model.fc_w.size()), mfb(model.fc_b.size());

  Rng rng(cfg.seed);
  std::vector<std::size_t> order(data.images.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<EpochStats> history;
  history.reserve(cfg.epochs);
  std::vector<ImageTensor> batch_images;
  std::vector<int> batch_labels;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;
    std::size_t correct = 0;

    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t count = std::min(cfg.batch_size, order.size() - start);
      batch_images.clear();
      batch_labels.clear();
      for (std::size_t i = 0; i < count; ++i) {
        batch_images.push_back(data.images[order[start + i]]);
        batch_labels.push_back(data.labels[order[start + i]]);
      }
      const Tensor4 batch = to_batch(batch_images, 0, count);

      // accuracy is measured on the forward pass that feeds the update
      std::vector<int> predicted;
      auto [loss, grads] = ctn_gradients(model, batch, batch_labels, &predicted);
      check_finite(loss);
      epoch_loss += loss * static_cast<double>(count);
      for (std::size_t i = 0; i < count; ++i)
        if (predicted[i] == batch_labels[i]) ++correct;

      m1w.step(model.conv1_w, grads.conv1_w, cfg.learning_rate, cfg.momentum);
      m1b.step(model.conv1_b, grads.conv1_b, cfg.learning_rate, cfg.momentum);
      m2w.step(model.conv2_w, grads.conv2_w, cfg.learning_rate, cfg.momentum);
      m2b.step(model.conv2_b, grads.conv2_b, cfg.learning_rate, cfg.momentum);
      m3w.step(model.conv3_w, grads.conv3_w, cfg.learning_rate, cfg.momentum);
      m3b.step(model.conv3_b, grads.conv3_b, cfg.learning_rate, cfg.momentum);
      mfw.step(model.fc_w, grads.fc_w, cfg.learning_rate, cfg.momentum);
      mfb.step(model.fc_b, grads.fc_b, cfg.learning_rate, cfg.momentum);
    }

    history.push_back(EpochStats{epoch_loss / static_cast<double>(order.size()),
                                 static_cast<double>(correct) /
                                     static_cast<double>(order.size())});
  }
  return {std::move(model), std::move(history)};
}

Metrics evaluate(const CtnModel& model, const LabeledImages& data) {
  if (data.images.empty()) throw EmptyDataset();
  if (data.images.size() != data.labels.size())
    throw ShapeMismatch("evaluate: image/label count mismatch");

  Metrics metrics;
  constexpr std::size_t chunk = 32;
  for (std::size_t start = 0; start < data.images.size(); start += chunk) {
    const std::size_t count = std::min(chunk, data.images.size() - start);
    const Tensor4 batch = to_batch(data.images, start, count);
    const Tensor4 logits = ctn_forward(model, batch);
    for (std::size_t i = 0; i < count; ++i) {
      const int actual = data.labels[start + i] == 1 ? 1 : 0;
      const int predicted = logits.at(i, 1, 0, 0) > logits.at(i, 0, 0, 0) ? 1 : 0;
      ++metrics.confusion[static_cast<std::size_t>(actual)][static_cast<std::size_t>(predicted)];
    }
  }

  const auto& cm = metrics.confusion;
  const std::size_t total = cm[0][0] + cm[0][1] + cm[1][0] + cm[1][1];
  metrics.accuracy = static_cast<double>(cm[0][0] + cm[1][1]) / static_cast<double>(total);
  for (int c = 0; c < 2; ++c) {
    const std::size_t class_total = cm[static_cast<std::size_t>(c)][0] + cm[static_cast<std::size_t>(c)][1];
    metrics.per_class[static_cast<std::size_t>(c)] =
        class_total == 0
            ? 0.0
            : static_cast<double>(cm[static_cast<std::size_t>(c)][static_cast<std::size_t>(c)]) /
                  static_cast<double>(class_total);
  }
  return metrics;
}

// --- serialization ------------------------------------------------------------

namespace {

constexpr char kMagic[4] = {'C', 'T', 'N', '1'};

void put_u32le(std::ofstream& out, std::uint32_t v) {
  const std::uint8_t bytes[4] = {
      static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
      static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t get_u32le(std::ifstream& in) {
  std::uint8_t bytes[4];
  in.read(reinterpret_cast<char*>(bytes), 4);
  if (!in) throw ShapeHeaderMismatch("truncated model header");
  return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

void put_f32le(std::ofstream& out, const std::vector<float>& values) {
  for (const float f : values) put_u32le(out, std::bit_cast<std::uint32_t>(f));
}

void get_f32le(std::ifstream& in, std::vector<float>& dst, std::size_t count) {
  dst.resize(count);
  for (auto& f : dst) {
    std::uint8_t bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw ShapeHeaderMismatch("model file shorter than its header claims");
    const std::uint32_t u = static_cast<std::uint32_t>(bytes[0]) |
                            (static_cast<std::uint32_t>(bytes[1]) << 8) |
                            (static_cast<std::uint32_t>(bytes[2]) << 16) |
                            (static_cast<std::uint32_t>(bytes[3]) << 24);
    f = std::bit_cast<float>(u);
  }
}

void put_u32le(std::ofstream& out, std::size_t v) { put_u32le(out, static_cast<std::uint32_t>(v)); }

}  // namespace

void save_model(const CtnModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kMagic, 4);
  const auto& d = model.dims;
  put_u32le(out, d.in_channels);
  put_u32le(out, d.input_side);
  put_u32le(out, d.c1);
  put_u32le(out, d.c2);
  put_u32le(out, d.c3);
  put_u32le(out, d.classes);
  put_f32le(out, model.conv1_w);
  put_f32le(out, model.conv1_b);
  put_f32le(out, model.conv2_w);
  put_f32le(out, model.conv2_b);
  put_f32le(out, model.conv3_w);
  put_f32le(out, model.conv3_b);
  put_f32le(out, model.fc_w);
  put_f32le(out, model.fc_b);
  if (!out) throw IoError("short write: " + path);
}

CtnModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MissingFile(path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) throw BadMagic();

  CtnModel m;
  m.dims.in_channels = get_u32le(in);
  m.dims.input_side = get_u32le(in);
  m.dims.c1 = get_u32le(in);
  m.dims.c2 = get_u32le(in);
  m.dims.c3 = get_u32le(in);
  m.dims.classes = get_u32le(in);
  const auto& d = m.dims;
  if (d.in_channels == 0 || d.input_side == 0 || d.input_side % 4 != 0 || d.c1 == 0 ||
      d.c2 == 0 || d.c3 == 0 || d.classes == 0)
    throw ShapeHeaderMismatch("inconsistent architecture descriptor");

  get_f32le(in, m.conv1_w, d.c1 * d.in_channels * 9);
  get_f32le(in, m.conv1_b, d.c1);
  get_f32le(in, m.conv2_w, d.c2 * d.c1 * 9);
  get_f32le(in, m.conv2_b, d.c2);
  get_f32le(in, m.conv3_w, d.c3 * d.c2 * 9);
  get_f32le(in, m.conv3_b, d.c3);
  get_f32le(in, m.fc_w, d.classes * d.flat_dim());
  get_f32le(in, m.fc_b, d.classes);

  char extra;
  if (in.read(&extra, 1)) throw ShapeHeaderMismatch("trailing bytes after parameters");
  return m;
}

}  // namespace binviz
