#pragma once

#include <vector>

#include "driftlens/dataset.hpp"
#include "driftlens/matrix.hpp"

namespace driftlens::scatter {

/// Everything the discriminative objective needs from one source/target pair.
/// The moments carry the 1/N_s and 1/N_t normalization.
struct ScatterSet {
  Matrix source_moment;
  Matrix target_moment;
  Matrix mdd;
  Matrix d_wc;
  Matrix d_bc;
  Vector mean_src;
  Vector mean_tgt;
  std::vector<Vector> class_means;
  std::size_t n_source = 0;
  std::size_t n_target = 0;
};

Vector mean_vector(const Matrix& x);

/// u u^T with u = mean_src - mean_tgt.
Matrix mdd_matrix(const Vector& mean_src, const Vector& mean_tgt);

/// scale * X X^T (uncentered).
Matrix scaled_second_moment(const Matrix& x, double scale);

std::vector<Vector> class_means(const LabeledDataset& data);

/// sum_l sum_j 1/(c n_l) (x_lj - m_l)(x_lj - m_l)^T
Matrix within_class_scatter(const LabeledDataset& data);

/// sum_l (n_l / c) (m_l - m)(m_l - m)^T
Matrix between_class_scatter(const LabeledDataset& data);

ScatterSet compute_scatter_set(const LabeledDataset& source, const Matrix& target);

}  // namespace driftlens::scatter
