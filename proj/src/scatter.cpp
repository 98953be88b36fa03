#include "driftlens/scatter.hpp"

#include <string>

#include "driftlens/error.hpp"

namespace driftlens::scatter {

namespace {

void require_labels(const LabeledDataset& data, const char* op) {
  if (!data.has_labels()) fail(Errc::MissingLabels, std::string(op) + ": dataset '" + data.name + "' has no labels");
  data.validate();
}

void require_nonempty_classes(const LabeledDataset& data, const char* op) {
  const auto counts = data.class_counts();
  if (counts.empty()) fail(Errc::EmptyClass, std::string(op) + ": no classes");
  for (std::size_t l = 0; l < counts.size(); ++l) {
    if (counts[l] == 0) fail(Errc::EmptyClass, std::string(op) + ": class " + std::to_string(l + 1) + " has no samples");
  }
}

// Accumulates w * v v^T into the upper triangle of m, mirrored at the end by
// the caller.
void add_weighted_outer_upper(Matrix& m, std::span<const double> v, double w) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w * v[i];
    auto mi = m.row(i);
    for (std::size_t j = i; j < n; ++j) mi[j] += wi * v[j];
  }
}

void mirror_upper(Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
}

}  // namespace

Vector mean_vector(const Matrix& x) {
  if (x.cols() == 0) fail(Errc::EmptyDataset, "mean_vector: no samples");
  Vector m(x.rows());
  const double inv = 1.0 / static_cast<double>(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (double v : x.row(r)) s += v;
    m[r] = s * inv;
  }
  return m;
}

Matrix mdd_matrix(const Vector& mean_src, const Vector& mean_tgt) {
  if (mean_src.size() != mean_tgt.size()) {
    fail(Errc::DimensionMismatch, "mdd_matrix: mean lengths " + std::to_string(mean_src.size()) +
                                      " and " + std::to_string(mean_tgt.size()));
  }
  Vector u(mean_src.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = mean_src[i] - mean_tgt[i];
  return outer(u, u);
}

Matrix scaled_second_moment(const Matrix& x, double scale) {
  if (x.cols() == 0) fail(Errc::EmptyDataset, "scaled_second_moment: no samples");
  if (!(scale > 0.0)) fail(Errc::InvalidArgument, "scaled_second_moment: scale must be positive");
  Matrix g = gram(x);
  g *= scale;
  return g;
}

std::vector<Vector> class_means(const LabeledDataset& data) {
  require_labels(data, "class_means");
  require_nonempty_classes(data, "class_means");
  const auto counts = data.class_counts();
  const std::size_t dim = data.dim();
  std::vector<Vector> means(counts.size(), Vector(dim, 0.0));
  for (std::size_t r = 0; r < dim; ++r) {
    auto row = data.features.row(r);
    for (std::size_t i = 0; i < data.size(); ++i) means[static_cast<std::size_t>(data.labels[i] - 1)][r] += row[i];
  }
  for (std::size_t l = 0; l < counts.size(); ++l) {
    const double inv = 1.0 / static_cast<double>(counts[l]);
    for (double& v : means[l]) v *= inv;
  }
  return means;
}

Matrix within_class_scatter(const LabeledDataset& data) {
  const auto means = class_means(data);
  const auto counts = data.class_counts();
  const double c = static_cast<double>(counts.size());
  const std::size_t dim = data.dim();

  Matrix s(dim, dim);
  Vector dev(dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto l = static_cast<std::size_t>(data.labels[i] - 1);
    for (std::size_t r = 0; r < dim; ++r) dev[r] = data.features(r, i) - means[l][r];
    add_weighted_outer_upper(s, dev, 1.0 / (c * static_cast<double>(counts[l])));
  }
  mirror_upper(s);
  return s;
}

Matrix between_class_scatter(const LabeledDataset& data) {
  const auto means = class_means(data);
  const auto counts = data.class_counts();
  const Vector global = mean_vector(data.features);
  const double c = static_cast<double>(counts.size());
  const std::size_t dim = data.dim();

  Matrix s(dim, dim);
  Vector gap(dim);
  for (std::size_t l = 0; l < counts.size(); ++l) {
    for (std::size_t r = 0; r < dim; ++r) gap[r] = means[l][r] - global[r];
    add_weighted_outer_upper(s, gap, static_cast<double>(counts[l]) / c);
  }
  mirror_upper(s);
  return s;
}

ScatterSet compute_scatter_set(const LabeledDataset& source, const Matrix& target) {
  if (source.dim() != target.rows()) {
    fail(Errc::DimensionMismatch, "source has " + std::to_string(source.dim()) + " features, target has " +
                                      std::to_string(target.rows()));
  }
  ScatterSet s;
  s.n_source = source.size();
  s.n_target = target.cols();
  s.mean_src = mean_vector(source.features);
  s.mean_tgt = mean_vector(target);
  s.source_moment = scaled_second_moment(source.features, 1.0 / static_cast<double>(s.n_source));
  s.target_moment = scaled_second_moment(target, 1.0 / static_cast<double>(s.n_target));
  s.mdd = mdd_matrix(s.mean_src, s.mean_tgt);
  s.class_means = class_means(source);
  s.d_wc = within_class_scatter(source);
  s.d_bc = between_class_scatter(source);
  return s;
}

}  // namespace driftlens::scatter
