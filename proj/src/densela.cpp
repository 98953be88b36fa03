#include "driftlens/densela.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "driftlens/error.hpp"

namespace driftlens::densela {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (!m.square()) {
    fail(Errc::DimensionMismatch, std::string(what) + ": expected square matrix, got " +
                                      std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_symmetric(const Matrix& m, const char* what) {
  if (!is_symmetric(m, 1e-10)) fail(Errc::NotSymmetric, std::string(what) + ": input is not symmetric");
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

Matrix cholesky(const Matrix& b) {
  require_square(b, "cholesky");
  require_symmetric(b, "cholesky");
  const Matrix s = symmetrized(b);
  const std::size_t n = s.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double pivot = s(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (!(pivot > 0.0)) {
      fail(Errc::NotPositiveDefinite,
           "pivot " + std::to_string(j) + " = " + std::to_string(pivot) + " (increase ridge)");
    }
    const double ljj = std::sqrt(pivot);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = s(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / ljj;
    }
  }
  return l;
}

Matrix tri_solve(const Matrix& l, const Matrix& rhs, TriSide side) {
  require_square(l, "tri_solve");
  if (rhs.rows() != l.rows()) {
    fail(Errc::DimensionMismatch, "tri_solve: rhs has " + std::to_string(rhs.rows()) +
                                      " rows, factor has " + std::to_string(l.rows()));
  }
  const std::size_t n = l.rows();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(l(i, i)) < 1e-300) {
      fail(Errc::SingularDiagonal, "diagonal entry " + std::to_string(i) + " is zero");
    }
  }

  Matrix x = rhs;
  const std::size_t m = rhs.cols();
  if (side == TriSide::Lower) {
    for (std::size_t i = 0; i < n; ++i) {
      auto xi = x.row(i);
      for (std::size_t k = 0; k < i; ++k) {
        const double lik = l(i, k);
        if (lik == 0.0) continue;
        auto xk = x.row(k);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= lik * xk[j];
      }
      const double inv = 1.0 / l(i, i);
      for (double& v : xi) v *= inv;
    }
  } else {
    // L^T is upper triangular: back substitution, (L^T)(i,k) = L(k,i).
    for (std::size_t ii = n; ii-- > 0;) {
      auto xi = x.row(ii);
      for (std::size_t k = ii + 1; k < n; ++k) {
        const double lki = l(k, ii);
        if (lki == 0.0) continue;
        auto xk = x.row(k);
        for (std::size_t j = 0; j < m; ++j) xi[j] -= lki * xk[j];
      }
      const double inv = 1.0 / l(ii, ii);
      for (double& v : xi) v *= inv;
    }
  }
  return x;
}

void apply_sign_convention(Matrix& vectors) {
  for (std::size_t c = 0; c < vectors.cols(); ++c) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t r = 0; r < vectors.rows(); ++r) {
      const double a = std::abs(vectors(r, c));
      if (a > best_abs) {
        best_abs = a;
        best = r;
      }
    }
    if (vectors.rows() > 0 && vectors(best, c) < 0.0) {
      for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, c) = -vectors(r, c);
    }
  }
}

EigPairs jacobi_eig_sym(const Matrix& s, double tol) {
  require_square(s, "jacobi_eig_sym");
  require_symmetric(s, "jacobi_eig_sym");
  if (!(tol > 0.0)) fail(Errc::InvalidArgument, "jacobi_eig_sym: tol must be positive");

  Matrix a = symmetrized(s);
  const std::size_t n = a.rows();
  Matrix v = Matrix::identity(n);
  const double threshold = tol * frobenius_norm(a);

  bool converged = false;
  for (int sweep = 0; sweep <= kMaxJacobiSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == kMaxJacobiSweeps) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * c;

        // A <- J^T A J with J = [[c, s], [-s, c]] in the (p, q) plane.
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - sn * akq;
          a(k, q) = sn * akp + c * akq;
        }
        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = rp[k];
          const double aqk = rq[k];
          rp[k] = c * apk - sn * aqk;
          rq[k] = sn * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - sn * vkq;
          v(k, q) = sn * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) {
    fail(Errc::NoConvergence, "jacobi_eig_sym: no convergence after " +
                                  std::to_string(kMaxJacobiSweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigPairs out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = a(order[k], order[k]);
  out.vectors = v.select_columns(order);
  apply_sign_convention(out.vectors);
  return out;
}

EigPairs gen_eig_sym_def(const Matrix& a, const Matrix& b, double tol) {
  require_square(a, "gen_eig_sym_def");
  require_square(b, "gen_eig_sym_def");
  if (a.rows() != b.rows()) fail(Errc::DimensionMismatch, "gen_eig_sym_def: A and B sizes differ");
  require_symmetric(a, "gen_eig_sym_def(A)");

  const Matrix l = cholesky(b);
  const Matrix as = symmetrized(a);
  // C = L^{-1} A L^{-T} = L^{-1} (L^{-1} A)^T since A is symmetric.
  const Matrix y = tri_solve(l, as, TriSide::Lower);
  const Matrix c = symmetrized(tri_solve(l, y.transpose(), TriSide::Lower));

  EigPairs inner = jacobi_eig_sym(c, tol);
  EigPairs out;
  out.values = std::move(inner.values);
  out.vectors = tri_solve(l, inner.vectors, TriSide::UpperTransposed);
  apply_sign_convention(out.vectors);
  return out;
}

}  // namespace driftlens::densela
