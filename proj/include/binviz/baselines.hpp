#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "binviz/errors.hpp"
#include "binviz/ingest.hpp"

namespace binviz {

struct FeatureRow {
  std::string id;
  std::vector<double> values;
  int label = 0;
};

struct FeatureSet {
  std::vector<FeatureRow> rows;
  std::size_t dim = 0;
};

// CSV rows `id,v0,...,v{dim-1},label`.
FeatureSet load_features_csv(const std::string& path);
void write_features_csv(const FeatureSet& features, const std::string& path);

// The pre-image 1-D array: bytes/255, truncated or zero-padded to `dim`.
std::vector<double> raw_vector(const ByteStream& stream, std::size_t dim = 4096);

// Euclidean k-NN, majority vote. Vote ties fall back to the single nearest
// neighbour's label; distance ties are broken by training-set order.
int knn_predict(const FeatureSet& train, std::span<const double> query, int k = 3);

struct SvmHyper {
  double lambda = 1e-3;
  std::size_t epochs = 100;
  double lr = 0.1;
  std::uint64_t seed = 0;
};

struct SvmModel {
  std::vector<double> weights;
  double bias = 0.0;
  SvmHyper hyper;
};

// Primal hinge loss + lambda ||w||^2 by seeded per-sample SGD with epoch
// shuffles; labels map to {-1,+1} internally.
SvmModel svm_train(const FeatureSet& data, const SvmHyper& hyper);

double svm_score(const SvmModel& model, std::span<const double> x);
int svm_predict(const SvmModel& model, std::span<const double> x);

}  // namespace binviz
