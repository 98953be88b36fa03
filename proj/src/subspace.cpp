#include "driftlens/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "driftlens/densela.hpp"
#include "driftlens/error.hpp"

namespace driftlens::subspace {

namespace {

SubspaceModel from_pairs(densela::EigPairs pairs, Method method, HyperParams params) {
  SubspaceModel m;
  m.projection = std::move(pairs.vectors);
  m.eigenvalues = std::move(pairs.values);
  m.method = method;
  params.d = m.projection.cols();
  m.params = params;
  return m;
}

void require_dim(std::size_t d, std::size_t limit, Errc code, const char* what) {
  if (d < 1 || d > limit) {
    fail(d < 1 ? Errc::InvalidArgument : code,
         std::string(what) + ": d = " + std::to_string(d) + " outside 1.." + std::to_string(limit));
  }
}

void require_weight(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) fail(Errc::InvalidArgument, std::string(name) + " must be finite and >= 0");
}

void require_ridge(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) fail(Errc::InvalidArgument, "ridge_tau must be finite and > 0");
}

// Classical LDA scatters: per-sample within-class sum and n_l-weighted
// between-class sum.
std::pair<Matrix, Matrix> classical_scatters(const LabeledDataset& data) {
  const auto means = scatter::class_means(data);
  const auto counts = data.class_counts();
  const Vector global = scatter::mean_vector(data.features);
  const std::size_t dim = data.dim();

  Matrix sw(dim, dim);
  Vector dev(dim);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& m = means[static_cast<std::size_t>(data.labels[i] - 1)];
    for (std::size_t r = 0; r < dim; ++r) dev[r] = data.features(r, i) - m[r];
    sw += outer(dev, dev);
  }
  Matrix sb(dim, dim);
  for (std::size_t l = 0; l < means.size(); ++l) {
    for (std::size_t r = 0; r < dim; ++r) dev[r] = means[l][r] - global[r];
    sb += static_cast<double>(counts[l]) * outer(dev, dev);
  }
  return {symmetrized(sw), symmetrized(sb)};
}

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::Pca: return "pca";
    case Method::Lda: return "lda";
    case Method::Drca: return "drca";
    case Method::Ddrca: return "ddrca";
  }
  return "unknown";
}

Method parse_method(std::string_view text) {
  if (text == "pca") return Method::Pca;
  if (text == "lda") return Method::Lda;
  if (text == "drca") return Method::Drca;
  if (text == "ddrca") return Method::Ddrca;
  fail(Errc::InvalidArgument, "unknown method '" + std::string(text) + "' (expected pca|lda|drca|ddrca)");
}

void HyperParams::validate(std::size_t ambient_dim) const {
  require_dim(d, ambient_dim, Errc::DimensionTooLarge, "hyperparameters");
  require_weight(lambda, "lambda");
  require_weight(kappa, "kappa");
  require_weight(mu, "mu");
  require_ridge(ridge_tau);
}

std::size_t max_components(Method m, std::size_t ambient_dim, int num_classes) {
  if (m == Method::Lda) return num_classes > 1 ? static_cast<std::size_t>(num_classes - 1) : 0;
  return ambient_dim;
}

double ridge_epsilon(const Matrix& mdd, double ridge_tau) {
  require_ridge(ridge_tau);
  return ridge_tau * trace(mdd) / static_cast<double>(mdd.rows()) + 1e-12;
}

Pencil drca_pencil(const Matrix& xs, const Matrix& xt, double lambda, double ridge_tau) {
  if (xs.rows() != xt.rows()) {
    fail(Errc::DimensionMismatch, "drca: source has " + std::to_string(xs.rows()) + " features, target has " +
                                      std::to_string(xt.rows()));
  }
  require_weight(lambda, "lambda");
  Pencil p;
  p.a = symmetrized(gram(xs) + lambda * gram(xt));
  const Matrix mdd = scatter::mdd_matrix(scatter::mean_vector(xs), scatter::mean_vector(xt));
  p.epsilon = ridge_epsilon(mdd, ridge_tau);
  p.b = mdd + p.epsilon * Matrix::identity(mdd.rows());
  return p;
}

Pencil ddrca_pencil(const scatter::ScatterSet& s, double lambda, double kappa, double mu, double ridge_tau) {
  require_weight(lambda, "lambda");
  require_weight(kappa, "kappa");
  require_weight(mu, "mu");
  Pencil p;
  Matrix a = s.source_moment;
  a += lambda * s.target_moment;
  a -= kappa * s.d_wc;
  a += mu * s.d_bc;
  p.a = symmetrized(a);
  p.epsilon = ridge_epsilon(s.mdd, ridge_tau);
  p.b = s.mdd + p.epsilon * Matrix::identity(s.mdd.rows());
  return p;
}

SubspaceModel fit_pca(const Matrix& x, std::size_t d) {
  if (x.cols() == 0) fail(Errc::EmptyDataset, "fit_pca: no samples");
  require_dim(d, x.rows(), Errc::RankDeficient, "fit_pca");

  const Vector mean = scatter::mean_vector(x);
  Matrix centered = x;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (double& v : centered.row(r)) v -= mean[r];
  const Matrix cov = scatter::scaled_second_moment(centered, 1.0 / static_cast<double>(x.cols()));

  HyperParams params;
  params.lambda = params.kappa = params.mu = 0.0;
  SubspaceModel m = from_pairs(densela::jacobi_eig_sym(cov), Method::Pca, params);
  m.source_mean = mean;
  return truncate(m, d);
}

SubspaceModel fit_lda(const LabeledDataset& data, std::size_t d) {
  if (!data.has_labels()) fail(Errc::MissingLabels, "fit_lda: dataset '" + data.name + "' has no labels");
  data.validate();
  const std::size_t limit = max_components(Method::Lda, data.dim(), data.num_classes);
  if (d > limit) {
    fail(Errc::DimensionTooLarge, "fit_lda: d = " + std::to_string(d) + " exceeds c - 1 = " + std::to_string(limit));
  }
  require_dim(d, limit, Errc::DimensionTooLarge, "fit_lda");

  auto [sw, sb] = classical_scatters(data);
  const double gamma = 1e-6 * trace(sw) / static_cast<double>(data.dim()) + 1e-12;
  const Matrix b = sw + gamma * Matrix::identity(data.dim());
  densela::EigPairs pairs = densela::gen_eig_sym_def(sb, b);

  HyperParams params;
  params.lambda = params.kappa = params.mu = 0.0;
  SubspaceModel m;
  m.projection = pairs.vectors.leading_columns(limit);
  m.eigenvalues.assign(pairs.values.begin(), pairs.values.begin() + static_cast<std::ptrdiff_t>(limit));
  m.method = Method::Lda;
  params.d = limit;
  m.params = params;
  m.source_mean = scatter::mean_vector(data.features);
  return truncate(m, d);
}

SubspaceModel fit_drca(const Matrix& xs, const Matrix& xt, std::size_t d, double lambda, double ridge_tau) {
  const Pencil p = drca_pencil(xs, xt, lambda, ridge_tau);
  require_dim(d, xs.rows(), Errc::DimensionTooLarge, "fit_drca");

  HyperParams params;
  params.lambda = lambda;
  params.kappa = params.mu = 0.0;
  params.ridge_tau = ridge_tau;
  SubspaceModel m = from_pairs(densela::gen_eig_sym_def(p.a, p.b), Method::Drca, params);
  m.source_mean = scatter::mean_vector(xs);
  m.target_mean = scatter::mean_vector(xt);
  return truncate(m, d);
}

SubspaceModel fit_ddrca(const scatter::ScatterSet& s, const HyperParams& params) {
  params.validate(s.mdd.rows());
  const Pencil p = ddrca_pencil(s, params.lambda, params.kappa, params.mu, params.ridge_tau);
  SubspaceModel m = from_pairs(densela::gen_eig_sym_def(p.a, p.b), Method::Ddrca, params);
  m.source_mean = s.mean_src;
  m.target_mean = s.mean_tgt;
  return truncate(m, params.d);
}

SubspaceModel fit_ddrca(const LabeledDataset& source, const Matrix& xt, const HyperParams& params) {
  if (!source.has_labels()) fail(Errc::MissingLabels, "fit_ddrca: source '" + source.name + "' has no labels");
  if (source.dim() != xt.rows()) {
    fail(Errc::DimensionMismatch, "fit_ddrca: source has " + std::to_string(source.dim()) +
                                      " features, target has " + std::to_string(xt.rows()));
  }
  params.validate(source.dim());
  return fit_ddrca(scatter::compute_scatter_set(source, xt), params);
}

SubspaceModel truncate(const SubspaceModel& model, std::size_t d) {
  require_dim(d, model.dim(), Errc::DimensionTooLarge, "truncate");
  SubspaceModel m = model;
  m.projection = model.projection.leading_columns(d);
  m.eigenvalues.resize(d);
  m.params.d = d;
  return m;
}

Matrix transform(const SubspaceModel& model, const Matrix& x) {
  if (x.rows() != model.ambient_dim()) {
    fail(Errc::DimensionMismatch, "transform: data has " + std::to_string(x.rows()) + " features, model expects " +
                                      std::to_string(model.ambient_dim()));
  }
  if (model.method != Method::Pca) return transpose_times(model.projection, x);
  Matrix centered = x;
  for (std::size_t r = 0; r < x.rows(); ++r)
    for (double& v : centered.row(r)) v -= model.source_mean[r];
  return transpose_times(model.projection, centered);
}

}  // namespace driftlens::subspace
