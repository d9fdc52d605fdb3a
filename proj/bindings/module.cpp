#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "binviz/experiment.hpp"
#include "binviz/synth.hpp"

namespace py = pybind11;
using namespace binviz;

namespace {

ByteStream stream_from_bytes(py::bytes data) {
  ByteStream s;
  std::string_view view = data;
  s.bytes.assign(view.begin(), view.end());
  s.source_path = "<bytes>";
  return s;
}

Scheme make_scheme(const std::string& name, int cut, bool strict) {
  return Scheme{parse_scheme(name), cut, strict};
}

EntropyParams make_entropy_params(const std::string& mode, std::size_t window, std::size_t block,
                                  std::size_t stride) {
  EntropyParams p;
  p.mode = mode == "block" ? EntropyMode::block : EntropyMode::sliding;
  p.window = window;
  p.block = block;
  p.stride = stride;
  p.validate();
  return p;
}

py::array_t<double> image_to_array(const ImageTensor& img) {
  py::array_t<double> out({img.height, img.width, img.channels});
  std::memcpy(out.mutable_data(), img.data.data(), img.data.size() * sizeof(double));
  return out;
}

ImageTensor array_to_image(py::array_t<double, py::array::c_style | py::array::forcecast> arr) {
  if (arr.ndim() != 3) throw ShapeMismatch("expected an array of shape (H, W, C)");
  ImageTensor img;
  img.height = static_cast<std::size_t>(arr.shape(0));
  img.width = static_cast<std::size_t>(arr.shape(1));
  img.channels = static_cast<std::size_t>(arr.shape(2));
  img.data.assign(arr.data(), arr.data() + arr.size());
  return img;
}

LabeledImages to_labeled(const std::vector<py::array_t<double, py::array::c_style |
                                                                   py::array::forcecast>>& images,
                         const std::vector<int>& labels) {
  LabeledImages data;
  for (const auto& arr : images) data.images.push_back(array_to_image(arr));
  data.labels = labels;
  return data;
}

FeatureSet make_feature_set(
    py::array_t<double, py::array::c_style | py::array::forcecast> x,
    const std::vector<int>& labels) {
  if (x.ndim() != 2) throw ShapeMismatch("expected feature matrix of shape (n, dim)");
  if (static_cast<std::size_t>(x.shape(0)) != labels.size())
    throw ShapeMismatch("feature/label count mismatch");
  FeatureSet set;
  set.dim = static_cast<std::size_t>(x.shape(1));
  for (py::ssize_t i = 0; i < x.shape(0); ++i) {
    FeatureRow row;
    row.id = std::to_string(i);
    row.values.assign(x.data() + i * x.shape(1), x.data() + (i + 1) * x.shape(1));
    row.label = labels[static_cast<std::size_t>(i)];
    set.rows.push_back(std::move(row));
  }
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "binary visualization and malware classification toolkit";

  py::register_exception<Error>(m, "BinvizError");

  // entropy
  m.def(
      "shannon_entropy",
      [](py::bytes block) {
        const ByteStream s = stream_from_bytes(block);
        return shannon_entropy(s.bytes);
      },
      py::arg("block"), "Shannon entropy in bits of a byte block, range [0, 8].");
  m.def(
      "entropy_profile",
      [](py::bytes data, const std::string& mode, std::size_t window, std::size_t block,
         std::size_t stride) {
        const ByteStream s = stream_from_bytes(data);
        const EntropyProfile profile =
            entropy_profile(s, make_entropy_params(mode, window, block, stride));
        return py::array_t<double>(py::ssize_t(profile.values.size()), profile.values.data());
      },
      py::arg("data"), py::arg("mode") = "sliding", py::arg("window") = 64,
      py::arg("block") = 256, py::arg("stride") = 1,
      "Per-byte normalized entropy profile in [0, 1].");

  // hilbert
  m.def("hilbert2d_d2xy", &hilbert2d_d2xy, py::arg("order"), py::arg("d"));
  m.def("hilbert2d_xy2d", &hilbert2d_xy2d, py::arg("order"), py::arg("x"), py::arg("y"));
  m.def("hilbert3d_point", &hilbert3d_point, py::arg("order"), py::arg("d"));
  m.def(
      "byte_to_rgb_hilbert",
      [](int v) {
        if (v < 0 || v > 255) throw IndexOutOfRange("byte out of range");
        const Rgb c = byte_to_rgb_hilbert(static_cast<std::uint8_t>(v));
        return py::make_tuple(c.r, c.g, c.b);
      },
      py::arg("v"));

  // colorize
  m.def(
      "build_partition_table",
      [](int cut, bool strict) {
        const PartitionTable t = build_partition_table(cut, strict);
        py::dict out;
        out["green_level"] = std::vector<int>(t.green_level.begin(), t.green_level.end());
        out["class_id"] = std::vector<int>(t.class_id.begin(), t.class_id.end());
        out["cut"] = t.cut;
        return out;
      },
      py::arg("cut") = 8, py::arg("strict") = false);
  m.def(
      "encode",
      [](py::bytes data, const std::string& scheme, int cut, bool strict,
         py::object profile) {
        const ByteStream s = stream_from_bytes(data);
        const Scheme sch = make_scheme(scheme, cut, strict);
        EntropyProfile ep;
        const EntropyProfile* ep_ptr = nullptr;
        if (!profile.is_none()) {
          auto arr = profile.cast<py::array_t<double, py::array::c_style | py::array::forcecast>>();
          ep.values.assign(arr.data(), arr.data() + arr.size());
          ep_ptr = &ep;
        }
        const PixelSequence seq = encode(s, sch, ep_ptr);
        py::array_t<std::uint8_t> out({seq.size(), std::size_t{3}});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < seq.size(); ++i) {
          view(i, 0) = seq.pixels[i].r;
          view(i, 1) = seq.pixels[i].g;
          view(i, 2) = seq.pixels[i].b;
        }
        return out;
      },
      py::arg("data"), py::arg("scheme"), py::arg("cut") = 8, py::arg("strict") = false,
      py::arg("profile") = py::none(),
      "Per-byte RGB pixels (n, 3) uint8 under the chosen scheme.");

  // rendering pipeline
  m.def(
      "render",
      [](py::bytes data, const std::string& scheme, int cut, bool strict,
         const std::string& layout_mode, std::size_t size, const std::string& entropy_mode,
         std::size_t window, std::size_t block, std::size_t stride) {
        RenderConfig cfg;
        cfg.scheme = make_scheme(scheme, cut, strict);
        cfg.layout.mode = parse_layout(layout_mode);
        cfg.layout.target = size;
        cfg.entropy = make_entropy_params(entropy_mode, window, block, stride);
        return image_to_array(render_stream(stream_from_bytes(data), cfg));
      },
      py::arg("data"), py::arg("scheme") = "hit", py::arg("cut") = 8, py::arg("strict") = false,
      py::arg("layout") = "horizontal", py::arg("size") = 64, py::arg("entropy_mode") = "sliding",
      py::arg("window") = 64, py::arg("block") = 256, py::arg("stride") = 1,
      "Full transform: bytes -> (size, size, 3) float64 image in [0, 1].");
  m.def(
      "render_file",
      [](const std::string& path, const std::string& scheme, int cut, bool strict,
         const std::string& layout_mode, std::size_t size, const std::string& entropy_mode,
         std::size_t window, std::size_t block, std::size_t stride) {
        RenderConfig cfg;
        cfg.scheme = make_scheme(scheme, cut, strict);
        cfg.layout.mode = parse_layout(layout_mode);
        cfg.layout.target = size;
        cfg.entropy = make_entropy_params(entropy_mode, window, block, stride);
        return image_to_array(render_file(path, cfg));
      },
      py::arg("path"), py::arg("scheme") = "hit", py::arg("cut") = 8, py::arg("strict") = false,
      py::arg("layout") = "horizontal", py::arg("size") = 64, py::arg("entropy_mode") = "sliding",
      py::arg("window") = 64, py::arg("block") = 256, py::arg("stride") = 1);
  m.def(
      "write_png",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> img,
         const std::string& path) { write_png(array_to_image(img), path); },
      py::arg("image"), py::arg("path"));

  // gist
  m.def(
      "gist_descriptor",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> img, int scales,
         int orientations, int grid) {
        const ImageTensor tensor = array_to_image(img);
        const GaborBank bank =
            build_gabor_bank(scales, orientations, static_cast<int>(tensor.width));
        const std::vector<double> d = gist_descriptor(tensor, bank, grid);
        return py::array_t<double>(py::ssize_t(d.size()), d.data());
      },
      py::arg("image"), py::arg("scales") = 4, py::arg("orientations") = 8, py::arg("grid") = 4);

  // baselines
  m.def(
      "raw_vector",
      [](py::bytes data, std::size_t dim) {
        const std::vector<double> v = raw_vector(stream_from_bytes(data), dim);
        return py::array_t<double>(py::ssize_t(v.size()), v.data());
      },
      py::arg("data"), py::arg("dim") = 4096);
  m.def(
      "knn_predict",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> train_x,
         const std::vector<int>& train_y,
         py::array_t<double, py::array::c_style | py::array::forcecast> query, int k) {
        const FeatureSet train = make_feature_set(train_x, train_y);
        std::vector<double> q(query.data(), query.data() + query.size());
        return knn_predict(train, q, k);
      },
      py::arg("train_x"), py::arg("train_y"), py::arg("query"), py::arg("k") = 3);
  m.def(
      "svm_train",
      [](py::array_t<double, py::array::c_style | py::array::forcecast> x,
         const std::vector<int>& y, double lambda, std::size_t epochs, double lr,
         std::uint64_t seed) {
        const SvmModel model = svm_train(make_feature_set(x, y), SvmHyper{lambda, epochs, lr, seed});
        return py::make_tuple(
            py::array_t<double>(py::ssize_t(model.weights.size()), model.weights.data()),
            model.bias);
      },
      py::arg("x"), py::arg("y"), py::arg("lambda") = 1e-3, py::arg("epochs") = 100,
      py::arg("lr") = 0.1, py::arg("seed") = 0,
      "Returns (weights, bias); predict with sign(w.x + b).");

  // ctn
  py::class_<CtnModel>(m, "CtnModel")
      .def_property_readonly("parameter_count", &CtnModel::parameter_count)
      .def_property_readonly("input_side", [](const CtnModel& m) { return m.dims.input_side; })
      .def("save", &save_model, py::arg("path"))
      .def_static("load", &load_model, py::arg("path"));
  m.def(
      "train_ctn",
      [](const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& images,
         const std::vector<int>& labels, double lr, double momentum, std::size_t batch_size,
         std::size_t epochs, std::uint64_t seed) {
        TrainConfig cfg{lr, momentum, batch_size, epochs, seed, 1.0};
        auto [model, history] = train_ctn(to_labeled(images, labels), cfg);
        py::list hist;
        for (const auto& e : history) hist.append(py::make_tuple(e.loss, e.accuracy));
        return py::make_tuple(model, hist);
      },
      py::arg("images"), py::arg("labels"), py::arg("lr") = 0.01, py::arg("momentum") = 0.9,
      py::arg("batch_size") = 32, py::arg("epochs") = 30, py::arg("seed") = 0,
      "Trains the CTN on (H, W, 3) float images; returns (model, history).");
  m.def(
      "evaluate",
      [](const CtnModel& model,
         const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& images,
         const std::vector<int>& labels) {
        const Metrics metrics = evaluate(model, to_labeled(images, labels));
        py::dict out;
        out["accuracy"] = metrics.accuracy;
        out["per_class"] = metrics.per_class;
        out["confusion"] = metrics.confusion;
        return out;
      },
      py::arg("model"), py::arg("images"), py::arg("labels"));
  m.def(
      "ctn_logits",
      [](const CtnModel& model,
         const std::vector<py::array_t<double, py::array::c_style | py::array::forcecast>>& images) {
        std::vector<ImageTensor> tensors;
        for (const auto& arr : images) tensors.push_back(array_to_image(arr));
        const Tensor4 batch = to_batch(tensors, 0, tensors.size());
        const Tensor4 logits = ctn_forward(model, batch);
        py::array_t<double> out({logits.n, model.dims.classes});
        auto view = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < logits.n; ++i)
          for (std::size_t c = 0; c < model.dims.classes; ++c) view(i, c) = logits.at(i, c, 0, 0);
        return out;
      },
      py::arg("model"), py::arg("images"));

  // corpus generation
  m.def(
      "gen_synthetic_corpus",
      [](const std::string& out_dir, std::size_t n_per_class, std::uint64_t seed,
         std::size_t min_size, std::size_t max_size) {
        SyntheticCorpusSpec spec{n_per_class, seed, min_size, max_size, out_dir};
        const DatasetManifest manifest = gen_synthetic_corpus(spec);
        py::list entries;
        for (const auto& e : manifest.entries) entries.append(py::make_tuple(e.path, e.label));
        return entries;
      },
      py::arg("out_dir"), py::arg("n_per_class") = 10, py::arg("seed") = 42,
      py::arg("min_size") = 8192, py::arg("max_size") = 24576);
}
