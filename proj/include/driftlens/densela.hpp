#pragma once

#include "driftlens/matrix.hpp"

namespace driftlens::densela {

/// Eigenpairs sorted by non-increasing eigenvalue; column i of `vectors`
/// belongs to `values[i]`.
struct EigPairs {
  Vector values;
  Matrix vectors;
};

enum class TriSide {
  Lower,            // solve L * X = RHS
  UpperTransposed,  // solve L^T * X = RHS
};

inline constexpr double kDefaultEigTol = 1e-12;
inline constexpr int kMaxJacobiSweeps = 100;

/// Lower-triangular L with L * L^T = B. Throws NotPositiveDefinite on the
/// first pivot <= 0 and NotSymmetric when B is not symmetric to 1e-10.
Matrix cholesky(const Matrix& b);

Matrix tri_solve(const Matrix& l, const Matrix& rhs, TriSide side);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Iterates until the
/// off-diagonal Frobenius norm drops below tol * |S|_F. Eigenvectors are
/// orthonormal and each has its largest-magnitude component positive.
EigPairs jacobi_eig_sym(const Matrix& s, double tol = kDefaultEigTol);

/// Solves A p = eta B p for symmetric A and SPD B through the congruence
/// B = L L^T, C = L^{-1} A L^{-T}. Returned vectors are B-orthonormal.
EigPairs gen_eig_sym_def(const Matrix& a, const Matrix& b, double tol = kDefaultEigTol);

// Flip each column so its largest-magnitude entry (lowest index on ties) is
// positive.
void apply_sign_convention(Matrix& vectors);

}  // namespace driftlens::densela
