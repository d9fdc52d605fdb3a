#include "binviz/baselines.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "binviz/rng.hpp"

namespace binviz {

FeatureSet load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingFile(path);
  FeatureSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    FeatureRow row;
    if (!std::getline(ss, field, ',')) throw ParseError(line_no, "missing id");
    row.id = field;
    std::vector<std::string> rest;
    while (std::getline(ss, field, ',')) rest.push_back(field);
    if (rest.size() < 2) throw ParseError(line_no, "expected id,values...,label");
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) {
      try {
        row.values.push_back(std::stod(rest[i]));
      } catch (const std::exception&) {
        throw ParseError(line_no, "bad value: " + rest[i]);
      }
    }
    if (rest.back() == "0" || rest.back() == "1")
      row.label = rest.back() == "1" ? 1 : 0;
    else
      throw ParseError(line_no, "label must be 0|1");
    if (set.rows.empty())
      set.dim = row.values.size();
    else if (row.values.size() != set.dim)
      throw ParseError(line_no, "inconsistent vector length");
    set.rows.push_back(std::move(row));
  }
  return set;
}

void write_features_csv(const FeatureSet& features, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write features: " + path);
  out.precision(17);
  for (const auto& row : features.rows) {
    out << row.id;
    for (const double v : row.values) out << ',' << v;
    out << ',' << row.label << '\n';
  }
  if (!out) throw IoError("short write: " + path);
}

std::vector<double> raw_vector(const ByteStream& stream, std::size_t dim) {
  if (stream.length() == 0) throw EmptyStream();
  if (dim == 0) throw BadConfig("raw vector dim must be positive");
  std::vector<double> v(dim, 0.0);
  const std::size_t n = std::min(dim, stream.length());
  for (std::size_t i = 0; i < n; ++i) v[i] = stream.bytes[i] / 255.0;
  return v;
}

int knn_predict(const FeatureSet& train, std::span<const double> query, int k) {
  if (train.rows.empty()) throw EmptyTrainSet();
  if (query.size() != train.dim) throw DimMismatch("query dimension mismatch");
  if (k < 1 || static_cast<std::size_t>(k) > train.rows.size())
    throw BadConfig("k must lie in 1..|train|");

  // squared distances rank identically to Euclidean ones
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(train.rows.size());
  for (std::size_t i = 0; i < train.rows.size(); ++i) {
    const auto& row = train.rows[i];
    double d2 = 0.0;
    for (std::size_t j = 0; j < train.dim; ++j) {
      const double diff = row.values[j] - query[j];
      d2 += diff * diff;
    }
    scored.emplace_back(d2, i);
  }
  std::sort(scored.begin(), scored.end());  // distance ties fall back to train order

  int votes[2] = {0, 0};
  for (int i = 0; i < k; ++i) ++votes[train.rows[scored[static_cast<std::size_t>(i)].second].label];
  if (votes[0] == votes[1]) return train.rows[scored[0].second].label;
  return votes[1] > votes[0] ? 1 : 0;
}

SvmModel svm_train(const FeatureSet& data, const SvmHyper& hyper) {
  if (data.rows.empty()) throw EmptyDataset();
  if (hyper.lr <= 0 || hyper.lambda < 0) throw BadConfig("bad SVM hyperparameters");

  SvmModel model{std::vector<double>(data.dim, 0.0), 0.0, hyper};
  Rng rng(hyper.seed);
  std::vector<std::size_t> order(data.rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::size_t t = 0;
  for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
    rng.shuffle(order);
    for (const std::size_t idx : order) {
      const auto& row = data.rows[idx];
      if (row.values.size() != data.dim) throw DimMismatch("feature row dimension mismatch");
      const double y = row.label == 1 ? 1.0 : -1.0;
      const double eta = hyper.lr / (1.0 + hyper.lr * hyper.lambda * static_cast<double>(t));
      ++t;

      double score = model.bias;
      for (std::size_t j = 0; j < data.dim; ++j) score += model.weights[j] * row.values[j];

      // shrink from the L2 term, clamped so a huge lambda cannot flip signs
      const double shrink = std::max(0.0, 1.0 - 2.0 * eta * hyper.lambda);
      for (auto& w : model.weights) w *= shrink;
      if (y * score < 1.0) {
        for (std::size_t j = 0; j < data.dim; ++j) model.weights[j] += eta * y * row.values[j];
        model.bias += eta * y;
      }
    }
  }
  return model;
}

double svm_score(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.weights.size()) throw DimMismatch("svm input dimension mismatch");
  double score = model.bias;
  for (std::size_t j = 0; j < x.size(); ++j) score += model.weights[j] * x[j];
  return score;
}

int svm_predict(const SvmModel& model, std::span<const double> x) {
  return svm_score(model, x) >= 0.0 ? 1 : 0;
}

}  // namespace binviz
