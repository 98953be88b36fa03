#include "driftlens/dataio.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "driftlens/error.hpp"
#include "driftlens/format.hpp"
#include "driftlens/scatter.hpp"

namespace driftlens::dataio {

namespace {

[[noreturn]] void malformed(const std::string& name, std::size_t line_no, std::string_view line,
                            const std::string& why) {
  std::string shown(line.substr(0, 120));
  if (line.size() > 120) shown += "...";
  fail(Errc::MalformedLine, name + ":" + std::to_string(line_no) + ": " + why + " in '" + shown + "'");
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

struct ParsedLine {
  int raw_label = 0;
  std::vector<std::pair<std::size_t, double>> entries;
};

ParsedLine parse_line(std::string_view line, const std::string& name, std::size_t line_no, std::size_t dim) {
  ParsedLine out;
  std::size_t pos = 0;
  bool have_label = false;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t') ++end;
    const std::string_view tok = line.substr(pos, end - pos);
    pos = end;

    if (!have_label) {
      // Extended releases append ";<concentration>" to the label.
      const std::string_view label_text = tok.substr(0, tok.find(';'));
      if (!parse_number(label_text, out.raw_label)) malformed(name, line_no, line, "bad label '" + std::string(tok) + "'");
      if (label_text.size() < tok.size()) {
        double annotation = 0.0;
        if (!parse_number(tok.substr(label_text.size() + 1), annotation)) {
          malformed(name, line_no, line, "bad label annotation '" + std::string(tok) + "'");
        }
      }
      have_label = true;
      continue;
    }

    const auto colon = tok.find(':');
    if (colon == std::string_view::npos) malformed(name, line_no, line, "expected idx:val, got '" + std::string(tok) + "'");
    long long idx = 0;
    double value = 0.0;
    if (!parse_number(tok.substr(0, colon), idx)) malformed(name, line_no, line, "bad index '" + std::string(tok) + "'");
    if (!parse_number(tok.substr(colon + 1), value)) malformed(name, line_no, line, "bad value '" + std::string(tok) + "'");
    if (idx < 1 || static_cast<unsigned long long>(idx) > dim) {
      fail(Errc::IndexOutOfRange, name + ":" + std::to_string(line_no) + ": index " + std::to_string(idx) +
                                      " outside 1.." + std::to_string(dim));
    }
    if (!std::isfinite(value)) {
      fail(Errc::NonFiniteValue, name + ":" + std::to_string(line_no) + ": non-finite value '" + std::string(tok) + "'");
    }
    out.entries.emplace_back(static_cast<std::size_t>(idx - 1), value);
  }
  return out;
}

}  // namespace

int LabelMap::dense_id(int raw) {
  auto [it, inserted] = ids_.try_emplace(raw, static_cast<int>(order_.size()) + 1);
  if (inserted) order_.push_back(raw);
  return it->second;
}

LabeledDataset parse_svmlight(std::istream& in, const std::string& name, LabelMap& labels,
                              const SvmlightOptions& opts) {
  if (opts.dim == 0) fail(Errc::InvalidArgument, "feature dimension must be positive");
  std::vector<ParsedLine> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    if (view.find_first_not_of(" \t") == std::string_view::npos) continue;
    rows.push_back(parse_line(view, name, line_no, opts.dim));
  }
  if (rows.empty()) fail(Errc::EmptyDataset, name + ": no samples");

  LabeledDataset data;
  data.name = name;
  data.features = Matrix(opts.dim, rows.size());
  data.labels.reserve(rows.size());
  data.raw_labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [idx, value] : rows[i].entries) data.features(idx, i) = value;
    data.raw_labels.push_back(rows[i].raw_label);
    data.labels.push_back(labels.dense_id(rows[i].raw_label));
  }
  data.num_classes = labels.size();
  data.batch.assign(rows.size(), 0);
  return data;
}

LabeledDataset parse_svmlight(const std::filesystem::path& path, LabelMap& labels, const SvmlightOptions& opts) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot read " + path.string());
  return parse_svmlight(in, path.filename().string(), labels, opts);
}

LabeledDataset parse_svmlight(const std::filesystem::path& path, const SvmlightOptions& opts) {
  LabelMap labels;
  return parse_svmlight(path, labels, opts);
}

void write_svmlight(const LabeledDataset& data, std::ostream& out) {
  const bool raw = !data.raw_labels.empty();
  if (!raw && !data.has_labels()) fail(Errc::MissingLabels, "write_svmlight: dataset '" + data.name + "' has no labels");
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << (raw ? data.raw_labels[i] : data.labels[i]);
    for (std::size_t r = 0; r < data.dim(); ++r) {
      const double v = data.features(r, i);
      if (v != 0.0) out << ' ' << (r + 1) << ':' << shortest(v);
    }
    out << '\n';
  }
}

void write_svmlight(const LabeledDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  write_svmlight(data, out);
  if (!out) fail(Errc::Io, "write failed: " + path.string());
}

std::size_t BatchRegistry::grand_total() const {
  std::size_t t = 0;
  for (auto v : totals) t += v;
  return t;
}

const BatchRegistry& ucsd_registry() {
  static const BatchRegistry registry{
      {445, 1244, 1586, 161, 197, 2300, 3613, 294, 470, 3600},
      {{{90, 98, 83, 30, 70, 74},
        {164, 334, 100, 109, 532, 5},
        {365, 490, 216, 240, 275, 0},
        {64, 43, 12, 30, 12, 0},
        {28, 40, 20, 46, 63, 0},
        {514, 574, 110, 29, 606, 467},
        {649, 662, 360, 744, 630, 568},
        {30, 30, 40, 33, 143, 18},
        {61, 55, 100, 75, 78, 101},
        {600, 600, 600, 600, 600, 600}}},
      {"Ethanol", "Ethylene", "Ammonia", "Acetaldehyde", "Acetone", "Toluene"},
      {"1,2", "3,4,8-10", "11-13", "14,15", "16", "17-20", "21", "22,23", "24,30", "36"},
  };
  return registry;
}

ValidationReport validate_batches(const std::vector<LabeledDataset>& datasets, const BatchRegistry& registry) {
  ValidationReport report;
  report.expected_grand_total = registry.grand_total();
  report.passed = datasets.size() == static_cast<std::size_t>(kUcsdBatchCount);
  for (int b = 0; b < kUcsdBatchCount; ++b) {
    BatchCheck check;
    check.batch = b + 1;
    check.expected_total = registry.totals[static_cast<std::size_t>(b)];
    check.expected_gas = registry.per_gas[static_cast<std::size_t>(b)];
    if (static_cast<std::size_t>(b) < datasets.size()) {
      const auto& ds = datasets[static_cast<std::size_t>(b)];
      check.found_total = ds.size();
      const auto& ids = ds.raw_labels.empty() ? ds.labels : ds.raw_labels;
      for (int id : ids)
        if (id >= 1 && id <= 6) ++check.found_gas[static_cast<std::size_t>(id - 1)];
    }
    check.total_ok = check.found_total == check.expected_total;
    check.gas_ok = check.found_gas == check.expected_gas;
    report.found_grand_total += check.found_total;
    report.passed = report.passed && check.total_ok;
    report.batches.push_back(check);
  }
  return report;
}

std::string ValidationReport::to_text() const {
  std::ostringstream os;
  for (const auto& b : batches) {
    os << "batch " << b.batch << ": expected " << b.expected_total << ", found " << b.found_total
       << (b.total_ok ? "  ok" : "  MISMATCH");
    if (!b.gas_ok) {
      os << "  per-gas expected [";
      for (std::size_t g = 0; g < 6; ++g) os << (g ? " " : "") << b.expected_gas[g];
      os << "] found [";
      for (std::size_t g = 0; g < 6; ++g) os << (g ? " " : "") << b.found_gas[g];
      os << "]";
    }
    os << '\n';
  }
  os << "total: expected " << expected_grand_total << ", found " << found_grand_total << '\n';
  os << (passed ? "PASS" : "FAIL") << '\n';
  return os.str();
}

std::vector<LabeledDataset> load_batch_directory(const std::filesystem::path& dir, const SvmlightOptions& opts) {
  if (!std::filesystem::is_directory(dir)) fail(Errc::Io, "not a directory: " + dir.string());
  LabelMap labels;
  std::vector<LabeledDataset> out;
  for (int b = 1; b <= kUcsdBatchCount; ++b) {
    const auto path = dir / ("batch" + std::to_string(b) + ".dat");
    LabeledDataset ds = parse_svmlight(path, labels, opts);
    ds.name = "batch" + std::to_string(b);
    ds.batch.assign(ds.size(), b);
    out.push_back(std::move(ds));
  }
  // Later batches may introduce ids unseen earlier; widen every batch to the
  // final class count.
  for (auto& ds : out) ds.num_classes = labels.size();
  return out;
}

std::filesystem::path resolve_data_dir(const std::string& explicit_dir) {
  if (!explicit_dir.empty()) return explicit_dir;
  if (const char* env = std::getenv(kDataEnvVar); env != nullptr && *env != '\0') return env;
  return {};
}

NormStats zscore_fit(const Matrix& source) {
  if (source.cols() == 0) fail(Errc::EmptyDataset, "zscore_fit: no samples");
  NormStats s;
  s.mean = scatter::mean_vector(source);
  s.stddev.resize(source.rows());
  const double inv = 1.0 / static_cast<double>(source.cols());
  for (std::size_t r = 0; r < source.rows(); ++r) {
    double ss = 0.0;
    for (double v : source.row(r)) ss += (v - s.mean[r]) * (v - s.mean[r]);
    s.stddev[r] = std::max(std::sqrt(ss * inv), kStdFloor);
  }
  return s;
}

Matrix zscore_apply(const NormStats& stats, const Matrix& x) {
  if (x.rows() != stats.mean.size()) {
    fail(Errc::DimensionMismatch, "zscore_apply: stats for " + std::to_string(stats.mean.size()) +
                                      " features, data has " + std::to_string(x.rows()));
  }
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    if (stats.stddev[r] <= kStdFloor) continue;  // constant on the source: map to 0
    const double m = stats.mean[r];
    const double sd = stats.stddev[r];
    auto src = x.row(r);
    auto dst = out.row(r);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - m) / sd;
  }
  return out;
}

std::pair<LabeledDataset, LabeledDataset> synth_two_domain(std::uint64_t seed, std::size_t n_per_class,
                                                           std::size_t classes, std::size_t dim,
                                                           const Vector& drift, const SynthOptions& opts) {
  if (n_per_class == 0 || classes == 0 || dim == 0) fail(Errc::InvalidArgument, "synth_two_domain: counts must be >= 1");
  if (drift.size() != dim) fail(Errc::DimensionMismatch, "synth_two_domain: drift length != dim");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Matrix centers(dim, classes);
  for (double& v : centers.data()) v = opts.center_spread * gauss(rng);

  auto draw = [&](const char* name, bool shifted) {
    LabeledDataset ds;
    ds.name = name;
    ds.num_classes = static_cast<int>(classes);
    const std::size_t n = n_per_class * classes;
    ds.features = Matrix(dim, n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t cls = i % classes;
      for (std::size_t r = 0; r < dim; ++r) {
        ds.features(r, i) = centers(r, cls) + opts.class_spread * gauss(rng) + (shifted ? drift[r] : 0.0);
      }
      ds.labels.push_back(static_cast<int>(cls + 1));
    }
    ds.raw_labels = ds.labels;
    return ds;
  };

  LabeledDataset source = draw("synth-source", false);
  LabeledDataset target = draw("synth-target", true);
  return {std::move(source), std::move(target)};
}

}  // namespace driftlens::dataio
