#include "driftlens/classify.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "driftlens/error.hpp"

namespace driftlens::classify {

namespace {

constexpr std::size_t kQueryBlock = 256;

void check_inputs(const Matrix& ref, std::span<const int> ref_labels, const Matrix& query) {
  if (ref.cols() == 0) fail(Errc::EmptyReference, "classifier reference set is empty");
  if (ref_labels.size() != ref.cols()) {
    fail(Errc::LengthMismatch, std::to_string(ref_labels.size()) + " reference labels for " +
                                   std::to_string(ref.cols()) + " reference samples");
  }
  if (ref.rows() != query.rows()) {
    fail(Errc::DimensionMismatch, "reference has " + std::to_string(ref.rows()) + " rows, query has " +
                                      std::to_string(query.rows()));
  }
}

}  // namespace

std::string_view to_string(Classifier c) noexcept {
  return c == Classifier::NearestNeighbor ? "1nn" : "centroid";
}

Classifier parse_classifier(std::string_view text) {
  if (text == "1nn") return Classifier::NearestNeighbor;
  if (text == "centroid") return Classifier::Centroid;
  fail(Errc::InvalidArgument, "unknown classifier '" + std::string(text) + "' (expected 1nn|centroid)");
}

std::vector<Prediction> predict_1nn_prefixes(const Matrix& ref, std::span<const int> ref_labels,
                                             const Matrix& query, std::span<const std::size_t> dims) {
  check_inputs(ref, ref_labels, query);
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (dims[k] < 1 || dims[k] > ref.rows() || (k > 0 && dims[k] <= dims[k - 1])) {
      fail(Errc::InvalidArgument, "prefix dimensions must be ascending within 1.." + std::to_string(ref.rows()));
    }
  }

  const std::size_t n_ref = ref.cols();
  const std::size_t n_query = query.cols();
  std::vector<Prediction> out(dims.size());
  for (auto& p : out) {
    p.labels.resize(n_query);
    p.reference_index.resize(n_query);
  }
  if (dims.empty()) return out;

  std::vector<double> dist;
  for (std::size_t q0 = 0; q0 < n_query; q0 += kQueryBlock) {
    const std::size_t q1 = std::min(n_query, q0 + kQueryBlock);
    dist.assign((q1 - q0) * n_ref, 0.0);
    std::size_t next = 0;
    for (std::size_t k = 0; k < dims.back(); ++k) {
      const auto ref_row = ref.row(k);
      const auto query_row = query.row(k);
      for (std::size_t q = q0; q < q1; ++q) {
        const double qv = query_row[q];
        double* drow = dist.data() + (q - q0) * n_ref;
        for (std::size_t j = 0; j < n_ref; ++j) {
          const double diff = qv - ref_row[j];
          drow[j] += diff * diff;
        }
      }
      if (k + 1 == dims[next]) {
        for (std::size_t q = q0; q < q1; ++q) {
          const double* drow = dist.data() + (q - q0) * n_ref;
          std::size_t best = 0;
          for (std::size_t j = 1; j < n_ref; ++j)
            if (drow[j] < drow[best]) best = j;
          out[next].labels[q] = ref_labels[best];
          out[next].reference_index[q] = static_cast<long>(best);
        }
        ++next;
      }
    }
  }
  return out;
}

Prediction predict_1nn(const Matrix& ref, std::span<const int> ref_labels, const Matrix& query) {
  const std::size_t dims[] = {ref.rows()};
  if (ref.rows() == 0) {
    check_inputs(ref, ref_labels, query);
    // Zero-dimensional space: every reference is at distance 0.
    Prediction p;
    p.labels.assign(query.cols(), ref_labels[0]);
    p.reference_index.assign(query.cols(), 0);
    return p;
  }
  return std::move(predict_1nn_prefixes(ref, ref_labels, query, dims).front());
}

Prediction predict_centroid(const Matrix& ref, std::span<const int> ref_labels, const Matrix& query) {
  check_inputs(ref, ref_labels, query);
  const int max_label = *std::max_element(ref_labels.begin(), ref_labels.end());
  if (*std::min_element(ref_labels.begin(), ref_labels.end()) < 1) {
    fail(Errc::InvalidArgument, "reference labels must be >= 1");
  }
  const auto n_class = static_cast<std::size_t>(max_label);
  const std::size_t dim = ref.rows();

  std::vector<std::size_t> counts(n_class, 0);
  for (int l : ref_labels) ++counts[static_cast<std::size_t>(l - 1)];
  Matrix centroids(dim, n_class);
  for (std::size_t r = 0; r < dim; ++r) {
    auto row = ref.row(r);
    for (std::size_t j = 0; j < ref.cols(); ++j) centroids(r, static_cast<std::size_t>(ref_labels[j] - 1)) += row[j];
    for (std::size_t l = 0; l < n_class; ++l)
      if (counts[l] > 0) centroids(r, l) /= static_cast<double>(counts[l]);
  }

  Prediction p;
  p.labels.resize(query.cols());
  p.reference_index.assign(query.cols(), -1);
  for (std::size_t q = 0; q < query.cols(); ++q) {
    double best = std::numeric_limits<double>::infinity();
    int best_label = 0;
    for (std::size_t l = 0; l < n_class; ++l) {
      if (counts[l] == 0) continue;
      double d = 0.0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double diff = query(r, q) - centroids(r, l);
        d += diff * diff;
      }
      if (best_label == 0 || d < best) {
        best = d;
        best_label = static_cast<int>(l + 1);
      }
    }
    p.labels[q] = best_label;
  }
  return p;
}

Prediction predict(Classifier c, const Matrix& ref, std::span<const int> ref_labels, const Matrix& query) {
  return c == Classifier::NearestNeighbor ? predict_1nn(ref, ref_labels, query)
                                          : predict_centroid(ref, ref_labels, query);
}

std::size_t count_correct(const Prediction& pred, std::span<const int> truth) {
  if (pred.labels.size() != truth.size()) {
    fail(Errc::LengthMismatch, std::to_string(pred.labels.size()) + " predictions for " +
                                   std::to_string(truth.size()) + " truth labels");
  }
  if (truth.empty()) fail(Errc::EmptyInput, "accuracy of an empty prediction set");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += pred.labels[i] == truth[i] ? 1 : 0;
  return hits;
}

double accuracy(const Prediction& pred, std::span<const int> truth) {
  const std::size_t hits = count_correct(pred, truth);
  return 100.0 * static_cast<double>(hits) / static_cast<double>(truth.size());
}

}  // namespace driftlens::classify
