#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace driftlens {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Samples are stored one per column
/// (features x samples) throughout the library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);
  static Matrix from_columns(const std::vector<Vector>& columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  // First n columns / rows.
  Matrix leading_columns(std::size_t n) const;
  Matrix leading_rows(std::size_t n) const;
  Matrix select_columns(std::span<const std::size_t> indices) const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

// a^T * b without materializing the transpose.
Matrix transpose_times(const Matrix& a, const Matrix& b);
// X * X^T, exactly symmetric.
Matrix gram(const Matrix& x);
Matrix outer(std::span<const double> u, std::span<const double> v);

double frobenius_norm(const Matrix& m);
double trace(const Matrix& m);
double max_abs(const Matrix& m);
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

// (M + M^T) / 2
Matrix symmetrized(const Matrix& m);
// max |M - M^T| <= rel_tol * max(|M|_F, tiny)
bool is_symmetric(const Matrix& m, double rel_tol = 1e-10);
bool all_finite(const Matrix& m);

Matrix hcat(const Matrix& a, const Matrix& b);

}  // namespace driftlens
