#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "driftlens/matrix.hpp"

namespace driftlens {

/// Feature matrix (D x N, one sample per column) plus optional dense class
/// labels in 1..num_classes. Unlabeled target data leaves `labels` empty.
struct LabeledDataset {
  Matrix features;
  std::vector<int> labels;
  int num_classes = 0;
  std::string name;
  // Label values as they appeared in the input file (kept for reporting
  // against per-gas counts); empty for generated data.
  std::vector<int> raw_labels;
  // Per-sample batch id, 0 when unknown.
  std::vector<int> batch;

  std::size_t dim() const noexcept { return features.rows(); }
  std::size_t size() const noexcept { return features.cols(); }
  bool has_labels() const noexcept { return !labels.empty(); }

  // Samples per class, index 0 holds class 1.
  std::vector<std::size_t> class_counts() const;

  // Throws on length mismatch, labels outside 1..num_classes, or non-finite
  // features.
  void validate() const;
};

LabeledDataset concat(const std::vector<LabeledDataset>& parts, std::string name);

}  // namespace driftlens
