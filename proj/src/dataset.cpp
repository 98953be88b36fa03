#include "driftlens/dataset.hpp"

#include <algorithm>
#include <string>

#include "driftlens/error.hpp"

namespace driftlens {

std::vector<std::size_t> LabeledDataset::class_counts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(std::max(num_classes, 0)), 0);
  for (int l : labels) {
    if (l >= 1 && l <= num_classes) ++counts[static_cast<std::size_t>(l - 1)];
  }
  return counts;
}

void LabeledDataset::validate() const {
  if (has_labels()) {
    if (labels.size() != features.cols()) {
      fail(Errc::LengthMismatch, name + ": " + std::to_string(labels.size()) + " labels for " +
                                     std::to_string(features.cols()) + " samples");
    }
    for (int l : labels) {
      if (l < 1 || l > num_classes) {
        fail(Errc::InvalidArgument, name + ": label " + std::to_string(l) + " outside 1.." +
                                        std::to_string(num_classes));
      }
    }
  }
  if (!raw_labels.empty() && raw_labels.size() != features.cols())
    fail(Errc::LengthMismatch, name + ": raw label count differs from sample count");
  if (!batch.empty() && batch.size() != features.cols())
    fail(Errc::LengthMismatch, name + ": batch id count differs from sample count");
  if (!all_finite(features)) fail(Errc::NonFiniteValue, name + ": non-finite feature value");
}

LabeledDataset concat(const std::vector<LabeledDataset>& parts, std::string name) {
  LabeledDataset out;
  out.name = std::move(name);
  if (parts.empty()) return out;

  const std::size_t dim = parts.front().dim();
  std::size_t total = 0;
  bool labeled = true;
  bool raw = true;
  bool batched = true;
  for (const auto& p : parts) {
    if (p.dim() != dim) fail(Errc::DimensionMismatch, "concat: feature dimensions differ");
    total += p.size();
    labeled = labeled && p.has_labels();
    raw = raw && !p.raw_labels.empty();
    batched = batched && !p.batch.empty();
    out.num_classes = std::max(out.num_classes, p.num_classes);
  }

  out.features = Matrix(dim, total);
  std::size_t offset = 0;
  for (const auto& p : parts) {
    for (std::size_t r = 0; r < dim; ++r) {
      auto src = p.features.row(r);
      std::copy(src.begin(), src.end(), out.features.row(r).begin() + static_cast<std::ptrdiff_t>(offset));
    }
    offset += p.size();
    if (labeled) out.labels.insert(out.labels.end(), p.labels.begin(), p.labels.end());
    if (raw) out.raw_labels.insert(out.raw_labels.end(), p.raw_labels.begin(), p.raw_labels.end());
    if (batched) out.batch.insert(out.batch.end(), p.batch.begin(), p.batch.end());
  }
  if (!labeled) out.num_classes = 0;
  return out;
}

}  // namespace driftlens
