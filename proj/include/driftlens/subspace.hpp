#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "driftlens/dataset.hpp"
#include "driftlens/matrix.hpp"
#include "driftlens/scatter.hpp"

namespace driftlens::subspace {

enum class Method { Pca, Lda, Drca, Ddrca };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view text);

struct HyperParams {
  std::size_t d = 1;
  double lambda = 1.0;
  double kappa = 1.0;
  double mu = 1.0;
  double ridge_tau = 1e-3;

  // Throws InvalidArgument unless 1 <= d <= ambient_dim and the weights are
  // non-negative with ridge_tau > 0.
  void validate(std::size_t ambient_dim) const;

  friend bool operator==(const HyperParams&, const HyperParams&) = default;
};

/// A fitted projection. Columns of `projection` are the basis vectors in
/// order of non-increasing eigenvalue.
struct SubspaceModel {
  Matrix projection;
  Vector eigenvalues;
  Method method = Method::Pca;
  HyperParams params;
  Vector source_mean;
  Vector target_mean;

  std::size_t ambient_dim() const noexcept { return projection.rows(); }
  std::size_t dim() const noexcept { return projection.cols(); }
};

/// Numerator and ridge-regularized denominator of a domain-regularized
/// objective, i.e. the pencil handed to the generalized eigensolver.
struct Pencil {
  Matrix a;
  Matrix b;
  double epsilon = 0.0;
};

// epsilon = ridge_tau * trace(mdd) / D + 1e-12
double ridge_epsilon(const Matrix& mdd, double ridge_tau);

Pencil drca_pencil(const Matrix& xs, const Matrix& xt, double lambda, double ridge_tau);
Pencil ddrca_pencil(const scatter::ScatterSet& s, double lambda, double kappa, double mu, double ridge_tau);

SubspaceModel fit_pca(const Matrix& x, std::size_t d);
SubspaceModel fit_lda(const LabeledDataset& data, std::size_t d);
SubspaceModel fit_drca(const Matrix& xs, const Matrix& xt, std::size_t d, double lambda,
                       double ridge_tau = 1e-3);
SubspaceModel fit_ddrca(const LabeledDataset& source, const Matrix& xt, const HyperParams& params);
// Same model from precomputed scatter statistics; bit-identical to the
// overload above for the same inputs.
SubspaceModel fit_ddrca(const scatter::ScatterSet& s, const HyperParams& params);

/// Keeps the leading d basis vectors. Fitting with d directly yields the
/// same bits as truncating a wider fit of the same problem.
SubspaceModel truncate(const SubspaceModel& model, std::size_t d);

/// P^T X; PCA models subtract the stored source mean first.
Matrix transform(const SubspaceModel& model, const Matrix& x);

// The widest model each method can produce (D for pca/drca/ddrca, c-1 for
// lda), used by sweeps that evaluate several d on one fit.
std::size_t max_components(Method m, std::size_t ambient_dim, int num_classes);

}  // namespace driftlens::subspace
