#include "driftlens/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>
#include <tuple>

#include "driftlens/dataio.hpp"
#include "driftlens/error.hpp"
#include "driftlens/scatter.hpp"

namespace driftlens::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

template <typename T>
std::vector<T> sorted_unique(std::vector<T> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

auto param_key(const HyperParams& p) { return std::make_tuple(p.d, p.lambda, p.kappa, p.mu); }

TaskResult error_result(TaskResult r, const Error& e) {
  r.error = e.what();
  r.error_code = to_string(e.code());
  return r;
}

// Widest model available for `method`; every narrower fit is its truncation.
subspace::SubspaceModel fit_full(Method method, const PreparedTask& task, const scatter::ScatterSet* scatter_set,
                                 HyperParams params) {
  const std::size_t width = subspace::max_components(method, task.source.dim(), task.source.num_classes);
  if (width == 0) fail(Errc::DimensionTooLarge, "lda needs at least two classes");
  params.d = width;
  if (method == Method::Ddrca && scatter_set != nullptr) return subspace::fit_ddrca(*scatter_set, params);
  return fit_model(method, task.source, task.target, params);
}

}  // namespace

std::string_view to_string(Norm n) noexcept { return n == Norm::ZScore ? "zscore" : "none"; }

Norm parse_norm(std::string_view text) {
  if (text == "zscore") return Norm::ZScore;
  if (text == "none") return Norm::None;
  fail(Errc::InvalidArgument, "unknown normalization '" + std::string(text) + "' (expected zscore|none)");
}

PreparedTask prepare(const LabeledDataset& source, const LabeledDataset& target, Norm norm) {
  if (!source.has_labels()) fail(Errc::MissingLabels, "source '" + source.name + "' has no labels");
  if (!target.has_labels()) fail(Errc::MissingLabels, "target '" + target.name + "' has no labels to score against");
  if (source.dim() != target.dim()) {
    fail(Errc::DimensionMismatch, "source has " + std::to_string(source.dim()) + " features, target has " +
                                      std::to_string(target.dim()));
  }
  source.validate();
  target.validate();

  PreparedTask task;
  task.source.name = source.name;
  task.source.labels = source.labels;
  task.source.num_classes = source.num_classes;
  task.truth = target.labels;
  task.target_name = target.name;
  if (norm == Norm::ZScore) {
    const auto stats = dataio::zscore_fit(source.features);
    task.source.features = dataio::zscore_apply(stats, source.features);
    task.target = dataio::zscore_apply(stats, target.features);
  } else {
    task.source.features = source.features;
    task.target = target.features;
  }
  return task;
}

subspace::SubspaceModel fit_model(Method method, const LabeledDataset& source, const Matrix& target_features,
                                  const HyperParams& params) {
  switch (method) {
    case Method::Pca: return subspace::fit_pca(source.features, params.d);
    case Method::Lda: return subspace::fit_lda(source, params.d);
    case Method::Drca:
      return subspace::fit_drca(source.features, target_features, params.d, params.lambda, params.ridge_tau);
    case Method::Ddrca: return subspace::fit_ddrca(source, target_features, params);
  }
  fail(Errc::InvalidArgument, "unknown method");
}

TaskResult run_task(const LabeledDataset& source, const LabeledDataset& target, Method method,
                    const HyperParams& params, Classifier classifier, Norm norm) {
  const auto t0 = Clock::now();
  TaskResult r;
  r.source = source.name;
  r.target = target.name;
  r.method = method;
  r.params = params;
  try {
    const PreparedTask task = prepare(source, target, norm);
    const auto model = fit_model(method, task.source, task.target, params);
    r.params = model.params;
    const Matrix ys = subspace::transform(model, task.source.features);
    const Matrix yt = subspace::transform(model, task.target);
    const auto pred = classify::predict(classifier, ys, task.source.labels, yt);
    r.correct = classify::count_correct(pred, task.truth);
    r.total = task.truth.size();
    r.accuracy = classify::accuracy(pred, task.truth);
  } catch (const Error& e) {
    throw Error(e.code(), "task " + source.name + " -> " + target.name + " [" +
                              std::string(subspace::to_string(method)) + "]: " + e.what());
  }
  r.wall_time = seconds_since(t0);
  return r;
}

GridSpec GridSpec::ucsd_defaults() {
  GridSpec g;
  for (int k = 0; k <= 7; ++k) g.d.push_back(std::size_t{1} << k);
  for (int k = -2; k <= 2; ++k) {
    const double v = std::pow(10.0, k);
    g.lambda.push_back(v);
    g.kappa.push_back(v);
    g.mu.push_back(v);
  }
  return g;
}

std::vector<std::string> swept_axes(Method method) {
  switch (method) {
    case Method::Pca:
    case Method::Lda: return {"d"};
    case Method::Drca: return {"d", "lambda"};
    case Method::Ddrca: return {"d", "lambda", "kappa", "mu"};
  }
  return {};
}

const std::vector<double>* GridSurface::axis(std::string_view name) const {
  for (const auto& [n, values] : axes)
    if (n == name) return &values;
  return nullptr;
}

std::optional<std::size_t> best_record(const GridSurface& surface) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < surface.records.size(); ++i) {
    const auto& r = surface.records[i];
    if (!r.ok()) continue;
    if (!best) {
      best = i;
      continue;
    }
    const auto& b = surface.records[*best];
    if (r.accuracy > b.accuracy || (r.accuracy == b.accuracy && param_key(r.params) < param_key(b.params))) best = i;
  }
  return best;
}

GridResult grid_search(const LabeledDataset& source, const LabeledDataset& target, Method method,
                       const GridSpec& grid, Classifier classifier, Norm norm, unsigned threads) {
  const auto swept = swept_axes(method);
  const auto sweeps = [&](const char* name) { return std::find(swept.begin(), swept.end(), name) != swept.end(); };

  const auto ds = sorted_unique(grid.d);
  const auto lambdas = sweeps("lambda") ? sorted_unique(grid.lambda) : std::vector<double>{0.0};
  const auto kappas = sweeps("kappa") ? sorted_unique(grid.kappa) : std::vector<double>{0.0};
  const auto mus = sweeps("mu") ? sorted_unique(grid.mu) : std::vector<double>{0.0};
  if (ds.empty() || lambdas.empty() || kappas.empty() || mus.empty()) {
    fail(Errc::InvalidArgument, "grid_search: every swept axis needs at least one value");
  }

  GridResult result;
  GridSurface& surface = result.surface;
  surface.method = method;
  surface.source = source.name;
  surface.target = target.name;
  surface.classifier = classifier;
  surface.norm = norm;
  surface.axes.emplace_back("d", std::vector<double>(ds.begin(), ds.end()));
  if (sweeps("lambda")) surface.axes.emplace_back("lambda", lambdas);
  if (sweeps("kappa")) surface.axes.emplace_back("kappa", kappas);
  if (sweeps("mu")) surface.axes.emplace_back("mu", mus);

  // Records in (d, lambda, kappa, mu) order; a group shares (lambda, kappa,
  // mu) and therefore one eigen-solve.
  const std::size_t n_groups = lambdas.size() * kappas.size() * mus.size();
  surface.records.resize(ds.size() * n_groups);
  for (std::size_t id = 0; id < ds.size(); ++id) {
    for (std::size_t g = 0; g < n_groups; ++g) {
      TaskResult& r = surface.records[id * n_groups + g];
      r.source = source.name;
      r.target = target.name;
      r.method = method;
      r.params.d = ds[id];
      r.params.lambda = lambdas[g / (kappas.size() * mus.size())];
      r.params.kappa = kappas[(g / mus.size()) % kappas.size()];
      r.params.mu = mus[g % mus.size()];
      r.params.ridge_tau = grid.ridge_tau;
    }
  }

  auto fail_all = [&](const Error& e) {
    for (auto& r : surface.records) r = error_result(r, e);
  };

  PreparedTask task;
  std::optional<scatter::ScatterSet> scatter_set;
  try {
    task = prepare(source, target, norm);
    if (method == Method::Ddrca) scatter_set = scatter::compute_scatter_set(task.source, task.target);
  } catch (const Error& e) {
    fail_all(e);
    return result;
  }

  parallel_for(n_groups, threads, [&](std::size_t g) {
    const auto t0 = Clock::now();
    auto cell = [&](std::size_t id) -> TaskResult& { return surface.records[id * n_groups + g]; };
    try {
      const auto model = fit_full(method, task, scatter_set ? &*scatter_set : nullptr, cell(0).params);
      const Matrix ys = subspace::transform(model, task.source.features);
      const Matrix yt = subspace::transform(model, task.target);

      std::vector<std::size_t> valid;
      for (std::size_t id = 0; id < ds.size(); ++id) {
        if (ds[id] >= 1 && ds[id] <= model.dim()) {
          valid.push_back(ds[id]);
          continue;
        }
        const Errc code = method == Method::Pca ? Errc::RankDeficient
                          : ds[id] == 0         ? Errc::InvalidArgument
                                                : Errc::DimensionTooLarge;
        cell(id) = error_result(cell(id), Error(code, "d = " + std::to_string(ds[id]) + " outside 1.." +
                                                          std::to_string(model.dim())));
      }

      std::vector<classify::Prediction> preds;
      if (classifier == Classifier::NearestNeighbor) {
        preds = classify::predict_1nn_prefixes(ys, task.source.labels, yt, valid);
      } else {
        for (std::size_t d : valid) {
          preds.push_back(classify::predict_centroid(ys.leading_rows(d), task.source.labels, yt.leading_rows(d)));
        }
      }
      std::size_t k = 0;
      for (std::size_t id = 0; id < ds.size(); ++id) {
        if (!cell(id).ok()) continue;
        cell(id).correct = classify::count_correct(preds[k], task.truth);
        cell(id).total = task.truth.size();
        cell(id).accuracy = classify::accuracy(preds[k], task.truth);
        ++k;
      }
    } catch (const Error& e) {
      for (std::size_t id = 0; id < ds.size(); ++id) cell(id) = error_result(cell(id), e);
    }
    const double per_cell = seconds_since(t0) / static_cast<double>(ds.size());
    for (std::size_t id = 0; id < ds.size(); ++id) cell(id).wall_time = per_cell;
  });

  result.best = best_record(surface);
  return result;
}

}  // namespace driftlens::harness
