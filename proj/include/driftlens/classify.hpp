#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "driftlens/matrix.hpp"

namespace driftlens::classify {

enum class Classifier { NearestNeighbor, Centroid };

std::string_view to_string(Classifier c) noexcept;
Classifier parse_classifier(std::string_view text);

struct Prediction {
  std::vector<int> labels;
  // Column of the deciding reference sample; -1 for the centroid method.
  std::vector<long> reference_index;
};

/// Euclidean 1-NN over reference columns; ties go to the lowest index.
Prediction predict_1nn(const Matrix& ref, std::span<const int> ref_labels, const Matrix& query);

/// 1-NN on the leading `dims[k]` coordinates for every k in one pass over
/// the distance table. dims must be ascending and <= ref.rows(). Result k is
/// bit-identical to predict_1nn on the truncated inputs.
std::vector<Prediction> predict_1nn_prefixes(const Matrix& ref, std::span<const int> ref_labels,
                                             const Matrix& query, std::span<const std::size_t> dims);

/// Nearest class mean; ties go to the lowest class id.
Prediction predict_centroid(const Matrix& ref, std::span<const int> ref_labels, const Matrix& query);

Prediction predict(Classifier c, const Matrix& ref, std::span<const int> ref_labels, const Matrix& query);

/// 100 * matches / N.
double accuracy(const Prediction& pred, std::span<const int> truth);
std::size_t count_correct(const Prediction& pred, std::span<const int> truth);

}  // namespace driftlens::classify
