#include "support.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "driftlens/dataio.hpp"

namespace testsupport {

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale) {
  std::normal_distribution<double> n01(0.0, 1.0);
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = scale * n01(rng);
  return m;
}

Matrix random_symmetric(Rng& rng, std::size_t n) {
  Matrix m = random_matrix(rng, n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m(j, i) = m(i, j);
  return m;
}

Matrix random_spd(Rng& rng, std::size_t n, double shift) {
  const Matrix q = random_matrix(rng, n, n);
  Matrix s = oracle::naive_product(oracle::naive_transpose(q), q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) s(j, i) = s(i, j);
  for (std::size_t i = 0; i < n; ++i) s(i, i) += shift;
  return s;
}

LabeledDataset random_labeled(Rng& rng, std::size_t dim, std::size_t n, int classes) {
  LabeledDataset d;
  d.features = random_matrix(rng, dim, n);
  d.num_classes = classes;
  std::uniform_int_distribution<int> pick(1, classes);
  d.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.labels[i] = i < static_cast<std::size_t>(classes) ? static_cast<int>(i) + 1 : pick(rng);
  return d;
}

double max_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return INFINITY;
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool near_rel(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  double diff = 0.0;
  double ref = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    diff += d * d;
    ref += b.data()[i] * b.data()[i];
  }
  return std::sqrt(diff) <= tol * std::max(std::sqrt(ref), 1.0);
}

bool same_columns_up_to_sign(const Matrix& a, const Matrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double plus = 0.0;
    double minus = 0.0;
    double ref = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      plus = std::max(plus, std::abs(a(r, c) - b(r, c)));
      minus = std::max(minus, std::abs(a(r, c) + b(r, c)));
      ref = std::max(ref, std::abs(b(r, c)));
    }
    if (std::min(plus, minus) > tol * std::max(ref, 1e-300)) return false;
  }
  return true;
}

Matrix unit_columns(Matrix m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) s += m(r, c) * m(r, c);
    s = std::sqrt(s);
    for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) /= s;
  }
  return m;
}

namespace oracle {

Matrix naive_product(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      long double s = 0.0L;
      for (std::size_t k = 0; k < a.cols(); ++k) s += static_cast<long double>(a(i, k)) * b(k, j);
      out(i, j) = static_cast<double>(s);
    }
  return out;
}

Matrix naive_transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Vector column_mean(const Matrix& x) {
  Vector m(x.rows(), 0.0);
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t r = 0; r < x.rows(); ++r) m[r] += x(r, i);
  for (double& v : m) v /= static_cast<double>(x.cols());
  return m;
}

Matrix sum_outer(const Matrix& x, double scale) {
  Matrix s(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.cols(); ++i)
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.rows(); ++c) s(r, c) += scale * x(r, i) * x(c, i);
  return s;
}

namespace {

std::vector<Vector> means_by_class(const Matrix& x, const std::vector<int>& labels, int classes,
                                   std::vector<std::size_t>& counts) {
  std::vector<Vector> means(classes, Vector(x.rows(), 0.0));
  counts.assign(classes, 0);
  for (std::size_t i = 0; i < x.cols(); ++i) {
    const int l = labels[i] - 1;
    ++counts[l];
    for (std::size_t r = 0; r < x.rows(); ++r) means[l][r] += x(r, i);
  }
  for (int l = 0; l < classes; ++l)
    for (double& v : means[l]) v /= static_cast<double>(counts[l]);
  return means;
}

}  // namespace

Matrix within(const Matrix& x, const std::vector<int>& labels, int classes) {
  std::vector<std::size_t> counts;
  const auto means = means_by_class(x, labels, classes, counts);
  Matrix s(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.cols(); ++i) {
    const int l = labels[i] - 1;
    const double w = 1.0 / (static_cast<double>(classes) * static_cast<double>(counts[l]));
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.rows(); ++c)
        s(r, c) += w * (x(r, i) - means[l][r]) * (x(c, i) - means[l][c]);
  }
  return s;
}

Matrix between(const Matrix& x, const std::vector<int>& labels, int classes) {
  std::vector<std::size_t> counts;
  const auto means = means_by_class(x, labels, classes, counts);
  const Vector global = column_mean(x);
  Matrix s(x.rows(), x.rows());
  for (int l = 0; l < classes; ++l) {
    const double w = static_cast<double>(counts[l]) / static_cast<double>(classes);
    for (std::size_t r = 0; r < x.rows(); ++r)
      for (std::size_t c = 0; c < x.rows(); ++c)
        s(r, c) += w * (means[l][r] - global[r]) * (means[l][c] - global[c]);
  }
  return s;
}

std::pair<Pair2, Pair2> gen_eig_2x2(const Matrix& a, const Matrix& b) {
  const double a11 = a(0, 0), a12 = a(0, 1), a22 = a(1, 1);
  const double b11 = b(0, 0), b12 = b(0, 1), b22 = b(1, 1);
  const double qa = b11 * b22 - b12 * b12;
  const double qb = -(a11 * b22 + a22 * b11 - 2.0 * a12 * b12);
  const double qc = a11 * a22 - a12 * a12;
  const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  // Stable quadratic roots.
  const double q = -0.5 * (qb + std::copysign(disc, qb));
  double r1 = q / qa;
  double r2 = qc / q;
  if (r2 > r1) std::swap(r1, r2);
  auto vec = [&](double eta) {
    // Pick the better-conditioned row of (A - eta B).
    double p0 = -(a12 - eta * b12), p1 = a11 - eta * b11;
    const double alt0 = a22 - eta * b22, alt1 = -(a12 - eta * b12);
    if (std::hypot(alt0, alt1) > std::hypot(p0, p1)) {
      p0 = alt0;
      p1 = alt1;
    }
    const double n = std::sqrt(p0 * (b11 * p0 + b12 * p1) + p1 * (b12 * p0 + b22 * p1));
    p0 /= n;
    p1 /= n;
    const double lead = std::abs(p0) >= std::abs(p1) ? p0 : p1;
    if (lead < 0) {
      p0 = -p0;
      p1 = -p1;
    }
    return Pair2{eta, p0, p1};
  };
  return {vec(r1), vec(r2)};
}

}  // namespace oracle

LabeledDataset toy_source() {
  LabeledDataset d;
  d.features = Matrix{{0, 2, 0, 2}, {0, 0, 2, 2}};
  d.labels = {1, 1, 2, 2};
  d.num_classes = 2;
  d.name = "toy-source";
  return d;
}

Matrix toy_target() { return Matrix{{1, 3, 1, 3}, {1, 1, 3, 3}}; }

TempDir::TempDir(const std::string& tag) {
  std::random_device rd;
  path_ = std::filesystem::temp_directory_path() /
          ("driftlens-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(rd()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void write_ucsd_like(const std::filesystem::path& dir, double fraction, std::uint64_t seed, std::size_t dim) {
  const auto& reg = driftlens::dataio::ucsd_registry();
  Rng rng(seed);
  std::normal_distribution<double> n01(0.0, 1.0);
  std::vector<Vector> centers(6, Vector(dim));
  for (auto& c : centers)
    for (double& v : c) v = 3.0 * n01(rng);
  Vector drift_dir(dim);
  for (double& v : drift_dir) v = n01(rng);

  std::filesystem::create_directories(dir);
  for (int b = 0; b < driftlens::dataio::kUcsdBatchCount; ++b) {
    std::ofstream out(dir / ("batch" + std::to_string(b + 1) + ".dat"));
    out << std::setprecision(17);
    // Interleave gases the way the public files do (grouped runs).
    for (int g = 0; g < 6; ++g) {
      const auto n = static_cast<std::size_t>(std::llround(static_cast<double>(reg.per_gas[b][g]) * fraction));
      for (std::size_t i = 0; i < n; ++i) {
        out << g + 1 << ";" << 10 * (i % 5 + 1) << ".000000";
        for (std::size_t j = 0; j < dim; ++j) {
          const double v = centers[g][j] + 0.6 * b * drift_dir[j] + n01(rng);
          out << ' ' << j + 1 << ':' << v;
        }
        out << '\n';
      }
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_command(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace testsupport
