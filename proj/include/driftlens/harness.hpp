#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "driftlens/classify.hpp"
#include "driftlens/dataset.hpp"
#include "driftlens/subspace.hpp"

namespace driftlens::harness {

using classify::Classifier;
using subspace::HyperParams;
using subspace::Method;

enum class Norm { ZScore, None };

std::string_view to_string(Norm n) noexcept;
Norm parse_norm(std::string_view text);

struct TaskResult {
  std::string source;
  std::string target;
  Method method = Method::Ddrca;
  HyperParams params;
  double accuracy = 0.0;  // percent
  std::size_t correct = 0;
  std::size_t total = 0;
  double wall_time = 0.0;  // seconds; never written to report files
  std::string error;       // empty on success
  std::string error_code;

  bool ok() const noexcept { return error.empty(); }
};

/// Source and target after normalization. Target labels are split off into
/// `truth` so nothing downstream of fitting can see them.
struct PreparedTask {
  LabeledDataset source;
  Matrix target;
  std::vector<int> truth;
  std::string target_name;
};

PreparedTask prepare(const LabeledDataset& source, const LabeledDataset& target, Norm norm);

/// Dispatches to the fit_* routine for `method`. Only target features are
/// accepted.
subspace::SubspaceModel fit_model(Method method, const LabeledDataset& source, const Matrix& target_features,
                                  const HyperParams& params);

/// normalize -> fit -> transform both domains -> classify target -> score.
/// Module errors are rethrown with the task identity prefixed.
TaskResult run_task(const LabeledDataset& source, const LabeledDataset& target, Method method,
                    const HyperParams& params, Classifier classifier, Norm norm);

/// Per-parameter candidate values. Only the axes a method uses are swept;
/// the others are pinned (kappa = mu = 0 for drca, all weights 0 for
/// pca/lda).
struct GridSpec {
  std::vector<std::size_t> d;
  std::vector<double> lambda;
  std::vector<double> kappa;
  std::vector<double> mu;
  double ridge_tau = 1e-3;

  /// d in {2^0..2^7}; lambda, kappa, mu in {10^-2..10^2}.
  static GridSpec ucsd_defaults();
};

std::vector<std::string> swept_axes(Method method);

struct GridSurface {
  Method method = Method::Ddrca;
  std::string source;
  std::string target;
  Classifier classifier = Classifier::NearestNeighbor;
  Norm norm = Norm::ZScore;
  // Ordered (name, ascending values) for each swept axis.
  std::vector<std::pair<std::string, std::vector<double>>> axes;
  // Full Cartesian product in lexicographic (d, lambda, kappa, mu) order.
  std::vector<TaskResult> records;

  const std::vector<double>* axis(std::string_view name) const;
};

struct GridResult {
  GridSurface surface;
  std::optional<std::size_t> best;  // index into surface.records
};

/// Maximum accuracy; ties go to the lexicographically smallest
/// (d, lambda, kappa, mu). Failed cells never win.
std::optional<std::size_t> best_record(const GridSurface& surface);

/// Sweeps the full Cartesian product. Cells are independent and evaluated on
/// up to `threads` workers (0 = hardware concurrency); results are merged in
/// parameter order, so output does not depend on scheduling. A failing cell
/// becomes an error record.
GridResult grid_search(const LabeledDataset& source, const LabeledDataset& target, Method method,
                       const GridSpec& grid, Classifier classifier, Norm norm, unsigned threads = 0);

void write_surface_csv(const GridSurface& surface, std::ostream& out);
void write_surface_json(const GridSurface& surface, std::ostream& out);
GridSurface read_surface(std::istream& in);
GridSurface read_surface(const std::filesystem::path& path);

/// Slice of a surface as a CSV matrix: first row holds x values, first
/// column y values, cells accuracy (NA for failed cells). `fixed` must pin
/// every swept axis other than x and y.
void emit_heatmap(const GridSurface& surface, const std::map<std::string, double>& fixed, const std::string& x_axis,
                  const std::string& y_axis, std::ostream& out);

/// PCA to two dimensions over the whole dataset; rows `batch,label,pc1,pc2`.
void emit_projection_2d(const LabeledDataset& dataset, Norm norm, std::ostream& out);

/// Published accuracies used as context columns, targets batch 2..10 then
/// average.
struct PublishedRow {
  Method method;
  const char* label;
  std::array<double, 10> values;
};
const std::vector<PublishedRow>& published_ucsd();

struct MethodSummary {
  Method method;
  std::vector<TaskResult> task_best;  // one per target batch 2..10
  double task_best_average = 0.0;
  // Single combination maximizing the mean accuracy over all targets.
  std::optional<HyperParams> global_params;
  std::vector<double> global_accuracy;
  double global_average = 0.0;
  std::vector<GridSurface> surfaces;
};

struct UcsdReport {
  std::vector<MethodSummary> methods;
  Classifier classifier = Classifier::NearestNeighbor;
  Norm norm = Norm::ZScore;
};

struct UcsdOptions {
  Classifier classifier = Classifier::NearestNeighbor;
  Norm norm = Norm::ZScore;
  unsigned threads = 0;
  GridSpec grid = GridSpec::ucsd_defaults();
  // Progress sink; may be null.
  std::ostream* log = nullptr;
};

/// Batch 1 as source, each of batches 2..10 as target, per-task grid search
/// for every method. Throws DataInvalid when the batch sizes do not match
/// the registry.
UcsdReport reproduce_ucsd(const std::vector<LabeledDataset>& batches, const std::vector<Method>& methods,
                          const UcsdOptions& options);

void write_report_csv(const UcsdReport& report, std::ostream& out);
void write_report_json(const UcsdReport& report, std::ostream& out);

}  // namespace driftlens::harness
