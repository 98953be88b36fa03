#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "driftlens/dataset.hpp"
#include "driftlens/matrix.hpp"

namespace driftlens::dataio {

inline constexpr std::size_t kUcsdFeatureDim = 128;
inline constexpr int kUcsdBatchCount = 10;
inline constexpr const char* kDataEnvVar = "DRIFTLENS_DATA";

/// Maps raw label values onto dense ids 1..c in order of first appearance.
/// Share one map across files that must agree on class ids.
class LabelMap {
 public:
  int dense_id(int raw);
  int size() const noexcept { return static_cast<int>(order_.size()); }
  const std::vector<int>& raw_values() const noexcept { return order_; }

 private:
  std::map<int, int> ids_;
  std::vector<int> order_;
};

struct SvmlightOptions {
  std::size_t dim = kUcsdFeatureDim;
};

/// Parses `label[;annotation] idx:val ...` lines with 1-based indices into a
/// dense dim x N matrix. Blank lines are skipped.
LabeledDataset parse_svmlight(std::istream& in, const std::string& name, LabelMap& labels,
                              const SvmlightOptions& opts = {});
LabeledDataset parse_svmlight(const std::filesystem::path& path, LabelMap& labels,
                              const SvmlightOptions& opts = {});
LabeledDataset parse_svmlight(const std::filesystem::path& path, const SvmlightOptions& opts = {});

/// Writes raw labels (dense labels when no raw labels are stored) and every
/// non-zero feature in shortest round-trip form.
void write_svmlight(const LabeledDataset& data, std::ostream& out);
void write_svmlight(const LabeledDataset& data, const std::filesystem::path& path);

struct BatchRegistry {
  std::array<std::size_t, kUcsdBatchCount> totals;
  std::array<std::array<std::size_t, 6>, kUcsdBatchCount> per_gas;
  std::array<const char*, 6> gas_names;
  std::array<const char*, kUcsdBatchCount> months;

  std::size_t grand_total() const;
};

/// Sample counts of the public UCSD gas-sensor drift release, batches 1..10,
/// gas ids 1..6 = Ethanol, Ethylene, Ammonia, Acetaldehyde, Acetone, Toluene.
const BatchRegistry& ucsd_registry();

struct BatchCheck {
  int batch = 0;
  std::size_t expected_total = 0;
  std::size_t found_total = 0;
  std::array<std::size_t, 6> expected_gas{};
  std::array<std::size_t, 6> found_gas{};
  bool total_ok = false;
  bool gas_ok = false;
};

struct ValidationReport {
  std::vector<BatchCheck> batches;
  std::size_t expected_grand_total = 0;
  std::size_t found_grand_total = 0;
  bool passed = false;

  std::string to_text() const;
};

/// Compares batch sizes against the registry. Per-gas counts are keyed by
/// raw label value; only totals decide pass/fail.
ValidationReport validate_batches(const std::vector<LabeledDataset>& datasets, const BatchRegistry& registry);

/// Loads batch1.dat .. batch10.dat with one shared label map; sample batch
/// ids are set to 1..10.
std::vector<LabeledDataset> load_batch_directory(const std::filesystem::path& dir,
                                                 const SvmlightOptions& opts = {});

// Explicit path, else $DRIFTLENS_DATA, else empty.
std::filesystem::path resolve_data_dir(const std::string& explicit_dir);

struct NormStats {
  Vector mean;
  Vector stddev;
};

inline constexpr double kStdFloor = 1e-12;

NormStats zscore_fit(const Matrix& source);
Matrix zscore_apply(const NormStats& stats, const Matrix& x);

struct SynthOptions {
  double class_spread = 1.0;   // per-coordinate noise std
  double center_spread = 4.0;  // std of class-center coordinates
};

/// Gaussian class blobs; the target draws from the same class distributions
/// shifted by `drift`. Deterministic for a given seed.
std::pair<LabeledDataset, LabeledDataset> synth_two_domain(std::uint64_t seed, std::size_t n_per_class,
                                                           std::size_t classes, std::size_t dim,
                                                           const Vector& drift, const SynthOptions& opts = {});

}  // namespace driftlens::dataio
