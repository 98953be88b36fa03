#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "driftlens/dataset.hpp"
#include "driftlens/matrix.hpp"

namespace testsupport {

using driftlens::LabeledDataset;
using driftlens::Matrix;
using driftlens::Vector;

using Rng = std::mt19937_64;

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0);
Matrix random_symmetric(Rng& rng, std::size_t n);
// Q^T Q + shift * I, well conditioned for moderate shift.
Matrix random_spd(Rng& rng, std::size_t n, double shift = 1.0);
// Every class in 1..classes receives at least one sample.
LabeledDataset random_labeled(Rng& rng, std::size_t dim, std::size_t n, int classes);

// |a - b|_F <= tol * max(|b|_F, 1)
bool near_rel(const Matrix& a, const Matrix& b, double tol);
double max_diff(const Matrix& a, const Matrix& b);
// Columns equal up to a per-column sign flip.
bool same_columns_up_to_sign(const Matrix& a, const Matrix& b, double tol);
Matrix unit_columns(Matrix m);

// Reference implementations written as plain definition-level loops.
namespace oracle {

Matrix naive_product(const Matrix& a, const Matrix& b);
Matrix naive_transpose(const Matrix& a);
Vector column_mean(const Matrix& x);
Matrix sum_outer(const Matrix& x, double scale);
Matrix within(const Matrix& x, const std::vector<int>& labels, int classes);
Matrix between(const Matrix& x, const std::vector<int>& labels, int classes);

struct Pair2 {
  double value;
  double p0;
  double p1;
};
// Both roots of det(A - eta B) = 0 for 2x2 A, B (descending), with
// eigenvectors normalized to p^T B p = 1 and largest component positive.
std::pair<Pair2, Pair2> gen_eig_2x2(const Matrix& a, const Matrix& b);

}  // namespace oracle

// The four-point labeled toy set and its target copy shifted by (1, 1).
LabeledDataset toy_source();
Matrix toy_target();

// Scratch directory under the system temp path, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Writes batch1.dat..batch10.dat with the published per-gas counts scaled by
// `fraction` (1.0 reproduces the real sizes). Features are Gaussian blobs per
// gas with a drift that grows with the batch index.
void write_ucsd_like(const std::filesystem::path& dir, double fraction, std::uint64_t seed,
                     std::size_t dim = 128);

std::string read_file(const std::filesystem::path& path);
// Runs a shell command, returns the exit status of the child.
int run_command(const std::string& command);

}  // namespace testsupport
