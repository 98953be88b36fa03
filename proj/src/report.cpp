#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "driftlens/dataio.hpp"
#include "driftlens/error.hpp"
#include "driftlens/format.hpp"
#include "driftlens/harness.hpp"
#include "json.hpp"

namespace driftlens::harness {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr const char* kSurfaceHeader = "method,source,target,classifier,norm,d,lambda,kappa,mu,accuracy,correct,total,status";

std::string csv_safe(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, '_');
  return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const char* what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) fail(Errc::MalformedLine, std::string("bad ") + what + " '" + s + "'");
  return v;
}

double axis_value(const HyperParams& p, const std::string& name) {
  if (name == "d") return static_cast<double>(p.d);
  if (name == "lambda") return p.lambda;
  if (name == "kappa") return p.kappa;
  if (name == "mu") return p.mu;
  fail(Errc::AxisNotInSurface, "unknown parameter '" + name + "'");
}

bool same_value(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

std::string format_axis_value(const std::string& name, double v) {
  return name == "d" ? std::to_string(static_cast<std::size_t>(v)) : shortest(v);
}

void rebuild_axes(GridSurface& s) {
  s.axes.clear();
  for (const auto& name : swept_axes(s.method)) {
    std::vector<double> values;
    for (const auto& r : s.records) values.push_back(axis_value(r.params, name));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    s.axes.emplace_back(name, std::move(values));
  }
  std::stable_sort(s.records.begin(), s.records.end(), [](const TaskResult& a, const TaskResult& b) {
    return std::tie(a.params.d, a.params.lambda, a.params.kappa, a.params.mu) <
           std::tie(b.params.d, b.params.lambda, b.params.kappa, b.params.mu);
  });
}

ordered_json params_json(const HyperParams& p) {
  return {{"d", p.d}, {"lambda", p.lambda}, {"kappa", p.kappa}, {"mu", p.mu}, {"ridge_tau", p.ridge_tau}};
}

GridSurface surface_from_json(const json& j) {
  GridSurface s;
  s.method = subspace::parse_method(j.at("method").get<std::string>());
  s.source = j.at("source").get<std::string>();
  s.target = j.at("target").get<std::string>();
  s.classifier = classify::parse_classifier(j.at("classifier").get<std::string>());
  s.norm = parse_norm(j.at("norm").get<std::string>());
  for (const auto& rj : j.at("records")) {
    TaskResult r;
    r.source = s.source;
    r.target = s.target;
    r.method = s.method;
    r.params.d = rj.at("d").get<std::size_t>();
    r.params.lambda = rj.at("lambda").get<double>();
    r.params.kappa = rj.at("kappa").get<double>();
    r.params.mu = rj.at("mu").get<double>();
    r.params.ridge_tau = rj.at("ridge_tau").get<double>();
    const auto status = rj.at("status").get<std::string>();
    if (status == "ok") {
      r.accuracy = rj.at("accuracy").get<double>();
      r.correct = rj.at("correct").get<std::size_t>();
      r.total = rj.at("total").get<std::size_t>();
    } else {
      r.error_code = status;
      r.error = rj.value("error", status);
    }
    s.records.push_back(std::move(r));
  }
  rebuild_axes(s);
  return s;
}

GridSurface surface_from_csv(std::istream& in) {
  GridSurface s;
  std::string line;
  if (!std::getline(in, line) || line != kSurfaceHeader) fail(Errc::MalformedLine, "surface CSV: unexpected header");
  bool first = true;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) fail(Errc::MalformedLine, "surface CSV line " + std::to_string(line_no) + ": expected 13 fields");
    if (first) {
      s.method = subspace::parse_method(f[0]);
      s.source = f[1];
      s.target = f[2];
      s.classifier = classify::parse_classifier(f[3]);
      s.norm = parse_norm(f[4]);
      first = false;
    }
    TaskResult r;
    r.source = s.source;
    r.target = s.target;
    r.method = s.method;
    r.params.d = static_cast<std::size_t>(to_double(f[5], "d"));
    r.params.lambda = to_double(f[6], "lambda");
    r.params.kappa = to_double(f[7], "kappa");
    r.params.mu = to_double(f[8], "mu");
    if (f[12] == "ok") {
      r.accuracy = to_double(f[9], "accuracy");
      r.correct = static_cast<std::size_t>(to_double(f[10], "correct"));
      r.total = static_cast<std::size_t>(to_double(f[11], "total"));
    } else {
      r.error_code = f[12];
      r.error = f[12];
    }
    s.records.push_back(std::move(r));
  }
  if (first) fail(Errc::EmptyDataset, "surface CSV has no records");
  rebuild_axes(s);
  return s;
}

}  // namespace

void write_surface_csv(const GridSurface& surface, std::ostream& out) {
  out << kSurfaceHeader << '\n';
  for (const auto& r : surface.records) {
    out << subspace::to_string(surface.method) << ',' << csv_safe(surface.source) << ',' << csv_safe(surface.target)
        << ',' << classify::to_string(surface.classifier) << ',' << to_string(surface.norm) << ',' << r.params.d
        << ',' << shortest(r.params.lambda) << ',' << shortest(r.params.kappa) << ',' << shortest(r.params.mu) << ',';
    if (r.ok()) {
      out << fixed2(r.accuracy) << ',' << r.correct << ',' << r.total << ",ok\n";
    } else {
      out << "NA,0,0," << r.error_code << '\n';
    }
  }
}

void write_surface_json(const GridSurface& surface, std::ostream& out) {
  ordered_json j;
  j["format"] = "driftlens-surface";
  j["version"] = 1;
  j["method"] = std::string(subspace::to_string(surface.method));
  j["source"] = surface.source;
  j["target"] = surface.target;
  j["classifier"] = std::string(classify::to_string(surface.classifier));
  j["norm"] = std::string(to_string(surface.norm));
  j["axes"] = ordered_json::array();
  for (const auto& [name, values] : surface.axes) j["axes"].push_back({{"name", name}, {"values", values}});
  j["records"] = ordered_json::array();
  for (const auto& r : surface.records) {
    ordered_json rj = params_json(r.params);
    if (r.ok()) {
      rj["accuracy"] = r.accuracy;
      rj["correct"] = r.correct;
      rj["total"] = r.total;
      rj["status"] = "ok";
    } else {
      rj["status"] = r.error_code;
      rj["error"] = r.error;
    }
    j["records"].push_back(std::move(rj));
  }
  const auto best = best_record(surface);
  j["best"] = best ? ordered_json(*best) : ordered_json(nullptr);
  out << j.dump(1) << '\n';
}

GridSurface read_surface(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) fail(Errc::EmptyDataset, "empty surface file");
  if (text[first] == '{') {
    try {
      return surface_from_json(json::parse(text));
    } catch (const json::exception& e) {
      fail(Errc::MalformedLine, std::string("surface JSON: ") + e.what());
    }
  }
  std::istringstream ss(text);
  return surface_from_csv(ss);
}

GridSurface read_surface(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot read " + path.string());
  return read_surface(in);
}

void emit_heatmap(const GridSurface& surface, const std::map<std::string, double>& fixed, const std::string& x_axis,
                  const std::string& y_axis, std::ostream& out) {
  const auto* xs = surface.axis(x_axis);
  const auto* ys = surface.axis(y_axis);
  if (xs == nullptr) fail(Errc::AxisNotInSurface, "x axis '" + x_axis + "' was not swept");
  if (ys == nullptr) fail(Errc::AxisNotInSurface, "y axis '" + y_axis + "' was not swept");
  if (x_axis == y_axis) fail(Errc::InvalidArgument, "x and y axes must differ");

  std::map<std::string, double> pinned;
  for (const auto& [name, value] : fixed) {
    if (name == x_axis || name == y_axis) fail(Errc::InvalidArgument, "'" + name + "' is both an axis and fixed");
    const auto* values = surface.axis(name);
    if (values == nullptr) fail(Errc::AxisNotInSurface, "fixed parameter '" + name + "' was not swept");
    const auto it = std::find_if(values->begin(), values->end(), [&](double v) { return same_value(v, value); });
    if (it == values->end()) {
      fail(Errc::AxisNotInSurface, "value " + shortest(value) + " of '" + name + "' is not on the surface");
    }
    pinned[name] = *it;
  }
  for (const auto& [name, values] : surface.axes) {
    if (name != x_axis && name != y_axis && !pinned.contains(name)) {
      fail(Errc::InvalidArgument, "swept parameter '" + name + "' must be fixed for a 2-D slice");
    }
  }

  auto matches = [&](const TaskResult& r, double x, double y) {
    if (!same_value(axis_value(r.params, x_axis), x) || !same_value(axis_value(r.params, y_axis), y)) return false;
    for (const auto& [name, v] : pinned)
      if (!same_value(axis_value(r.params, name), v)) return false;
    return true;
  };

  out << y_axis << '\\' << x_axis;
  for (double x : *xs) out << ',' << format_axis_value(x_axis, x);
  out << '\n';
  for (double y : *ys) {
    out << format_axis_value(y_axis, y);
    for (double x : *xs) {
      const auto it = std::find_if(surface.records.begin(), surface.records.end(),
                                   [&](const TaskResult& r) { return matches(r, x, y); });
      out << ',' << (it != surface.records.end() && it->ok() ? fixed2(it->accuracy) : std::string("NA"));
    }
    out << '\n';
  }
}

void emit_projection_2d(const LabeledDataset& dataset, Norm norm, std::ostream& out) {
  if (dataset.size() == 0) fail(Errc::EmptyDataset, "project2d: dataset is empty");
  if (dataset.dim() < 2) fail(Errc::RankDeficient, "project2d: need at least two features");
  const Matrix x = norm == Norm::ZScore ? dataio::zscore_apply(dataio::zscore_fit(dataset.features), dataset.features)
                                        : dataset.features;
  const auto model = subspace::fit_pca(x, 2);
  const Matrix y = subspace::transform(model, x);
  out << "batch,label,pc1,pc2\n";
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const int batch = dataset.batch.empty() ? 0 : dataset.batch[i];
    const int label = !dataset.raw_labels.empty() ? dataset.raw_labels[i] : dataset.has_labels() ? dataset.labels[i] : 0;
    out << batch << ',' << label << ',' << shortest(y(0, i)) << ',' << shortest(y(1, i)) << '\n';
  }
}

const std::vector<PublishedRow>& published_ucsd() {
  static const std::vector<PublishedRow> rows{
      {Method::Pca, "PCA_SVM", {82.40, 84.80, 80.12, 75.13, 73.57, 56.16, 48.64, 67.45, 49.14, 68.60}},
      {Method::Lda, "LDA_SVM", {47.27, 57.76, 50.93, 62.44, 41.48, 37.42, 68.37, 52.34, 31.17, 49.91}},
      {Method::Drca, "DRCA", {66.24, 71.82, 48.45, 85.28, 69.87, 50.18, 53.74, 69.15, 44.61, 62.15}},
      {Method::Ddrca, "D-DRCA", {84.32, 90.10, 67.08, 91.37, 84.48, 60.89, 65.65, 70.85, 49.50, 73.80}},
  };
  return rows;
}

UcsdReport reproduce_ucsd(const std::vector<LabeledDataset>& batches, const std::vector<Method>& methods,
                          const UcsdOptions& options) {
  const auto validation = dataio::validate_batches(batches, dataio::ucsd_registry());
  if (!validation.passed) fail(Errc::DataInvalid, "batch validation failed\n" + validation.to_text());

  UcsdReport report;
  report.classifier = options.classifier;
  report.norm = options.norm;
  const LabeledDataset& source = batches.front();
  for (Method method : methods) {
    MethodSummary summary;
    summary.method = method;
    for (std::size_t t = 1; t < batches.size(); ++t) {
      if (options.log != nullptr) {
        *options.log << "[" << subspace::to_string(method) << "] " << source.name << " -> " << batches[t].name
                     << std::flush;
      }
      GridResult g = grid_search(source, batches[t], method, options.grid, options.classifier, options.norm,
                                 options.threads);
      TaskResult best;
      if (g.best) {
        best = g.surface.records[*g.best];
      } else {
        best.source = source.name;
        best.target = batches[t].name;
        best.method = method;
        best.error = "no grid cell succeeded";
        best.error_code = "NoResult";
      }
      if (options.log != nullptr) {
        *options.log << ": " << (best.ok() ? fixed2(best.accuracy) : best.error) << '\n';
      }
      summary.task_best.push_back(best);
      summary.surfaces.push_back(std::move(g.surface));
    }

    double sum = 0.0;
    for (const auto& r : summary.task_best) sum += r.ok() ? r.accuracy : 0.0;
    summary.task_best_average = sum / static_cast<double>(summary.task_best.size());

    // Records share one layout across targets; the first maximal mean in
    // record order is the lexicographically smallest combination.
    const std::size_t n_records = summary.surfaces.front().records.size();
    double best_mean = -1.0;
    for (std::size_t i = 0; i < n_records; ++i) {
      double total = 0.0;
      bool all_ok = true;
      for (const auto& s : summary.surfaces) {
        all_ok = all_ok && s.records[i].ok();
        total += s.records[i].accuracy;
      }
      if (!all_ok) continue;
      const double mean = total / static_cast<double>(summary.surfaces.size());
      if (mean > best_mean) {
        best_mean = mean;
        summary.global_params = summary.surfaces.front().records[i].params;
        summary.global_accuracy.clear();
        for (const auto& s : summary.surfaces) summary.global_accuracy.push_back(s.records[i].accuracy);
        summary.global_average = mean;
      }
    }
    report.methods.push_back(std::move(summary));
  }
  return report;
}

void write_report_csv(const UcsdReport& report, std::ostream& out) {
  auto published = [](Method m) -> const PublishedRow* {
    for (const auto& row : published_ucsd())
      if (row.method == m) return &row;
    return nullptr;
  };

  out << "target";
  for (const auto& m : report.methods) {
    const auto name = subspace::to_string(m.method);
    out << ',' << name << "_task_best," << name << "_global_best," << name << "_published";
  }
  out << '\n';
  const std::size_t n_tasks = report.methods.empty() ? 0 : report.methods.front().task_best.size();
  for (std::size_t t = 0; t <= n_tasks; ++t) {
    const bool avg = t == n_tasks;
    out << (avg ? std::string("Average") : "batch" + std::to_string(t + 2));
    for (const auto& m : report.methods) {
      if (avg) {
        out << ',' << fixed2(m.task_best_average) << ','
            << (m.global_params ? fixed2(m.global_average) : std::string("NA"));
      } else {
        out << ',' << (m.task_best[t].ok() ? fixed2(m.task_best[t].accuracy) : std::string("NA")) << ','
            << (m.global_params ? fixed2(m.global_accuracy[t]) : std::string("NA"));
      }
      const auto* row = published(m.method);
      out << ',' << (row != nullptr && t < row->values.size() ? fixed2(row->values[t]) : std::string("NA"));
    }
    out << '\n';
  }
}

void write_report_json(const UcsdReport& report, std::ostream& out) {
  ordered_json j;
  j["classifier"] = std::string(classify::to_string(report.classifier));
  j["norm"] = std::string(to_string(report.norm));
  j["tuning"] = {{"task_best", "per-target best over the grid, selected with target labels"},
                 {"global_best", "one combination maximizing the mean accuracy over all targets"}};
  j["methods"] = ordered_json::array();
  for (const auto& m : report.methods) {
    ordered_json mj;
    mj["method"] = std::string(subspace::to_string(m.method));
    mj["tasks"] = ordered_json::array();
    for (std::size_t t = 0; t < m.task_best.size(); ++t) {
      const auto& r = m.task_best[t];
      ordered_json tj;
      tj["target"] = r.target;
      if (r.ok()) {
        tj["accuracy"] = r.accuracy;
        tj["params"] = params_json(r.params);
      } else {
        tj["error"] = r.error;
      }
      if (m.global_params) tj["global_accuracy"] = m.global_accuracy[t];
      mj["tasks"].push_back(std::move(tj));
    }
    mj["task_best_average"] = m.task_best_average;
    if (m.global_params) {
      mj["global_params"] = params_json(*m.global_params);
      mj["global_average"] = m.global_average;
    }
    for (const auto& row : published_ucsd()) {
      if (row.method == m.method) {
        mj["published"] = {{"label", row.label}, {"values", row.values}};
      }
    }
    j["methods"].push_back(std::move(mj));
  }
  out << j.dump(1) << '\n';
}

}  // namespace driftlens::harness
