#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "driftlens/dataio.hpp"
#include "driftlens/error.hpp"
#include "driftlens/harness.hpp"
#include "support.hpp"

using namespace driftlens;
using namespace driftlens::harness;
using namespace testsupport;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::Io;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    rows.push_back(fields);
  }
  return rows;
}

std::pair<LabeledDataset, LabeledDataset> drift_task(std::uint64_t seed, std::size_t dim = 6) {
  Vector drift(dim, 0.0);
  drift[0] = 5.0;
  return dataio::synth_two_domain(seed, 30, 3, dim, drift);
}

GridSpec small_grid() {
  GridSpec g;
  g.d = {1, 2, 3};
  g.lambda = {0.1, 1};
  g.kappa = {0.1, 1, 10};
  g.mu = {1, 10};
  return g;
}

std::string surface_csv(const GridSurface& s) {
  std::ostringstream out;
  write_surface_csv(s, out);
  return out.str();
}

std::string surface_json(const GridSurface& s) {
  std::ostringstream out;
  write_surface_json(s, out);
  return out.str();
}

std::string cli() { return DRIFTLENS_CLI_PATH; }

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("identical domains score 100 for every method") {
  const auto [src, tgt] = drift_task(1);
  for (Method m : {Method::Pca, Method::Lda, Method::Drca, Method::Ddrca}) {
    HyperParams p;
    p.d = 2;
    const auto r = run_task(src, src, m, p, Classifier::NearestNeighbor, Norm::ZScore);
    CHECK(r.accuracy == 100.0);
    CHECK(r.correct == src.size());
    CHECK(r.ok());
  }
}

TEST_CASE("run_task annotates module errors with the task") {
  const auto [src, tgt] = drift_task(2);
  HyperParams p;
  p.d = 5;
  try {
    run_task(src, tgt, Method::Lda, p, Classifier::NearestNeighbor, Norm::ZScore);
    FAIL("expected an Error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DimensionTooLarge);
    CHECK(std::string(e.what()).find("synth-source -> synth-target [lda]") != std::string::npos);
  }
  LabeledDataset unlabeled = tgt;
  unlabeled.labels.clear();
  CHECK(code_of([&] { run_task(src, unlabeled, Method::Pca, HyperParams{}, Classifier::Centroid, Norm::None); }) ==
        Errc::MissingLabels);
}

TEST_CASE("target labels never reach the fit") {
  const auto [src, tgt] = drift_task(3);
  LabeledDataset sentinel = tgt;
  for (int& l : sentinel.labels) l = 1;
  HyperParams p;
  p.d = 4;
  for (Method m : {Method::Pca, Method::Lda, Method::Drca, Method::Ddrca}) {
    if (m == Method::Lda) p.d = 2;
    const auto a = prepare(src, tgt, Norm::ZScore);
    const auto b = prepare(src, sentinel, Norm::ZScore);
    CHECK(fit_model(m, a.source, a.target, p).projection == fit_model(m, b.source, b.target, p).projection);
  }
}

TEST_CASE("single-point grid equals run_task") {
  const auto [src, tgt] = drift_task(4);
  for (Method m : {Method::Pca, Method::Lda, Method::Drca, Method::Ddrca}) {
    for (Classifier c : {Classifier::NearestNeighbor, Classifier::Centroid}) {
      GridSpec g;
      g.d = {2};
      g.lambda = {0.5};
      g.kappa = {2};
      g.mu = {3};
      const auto res = grid_search(src, tgt, m, g, c, Norm::ZScore, 1);
      REQUIRE(res.surface.records.size() == 1);
      const auto& rec = res.surface.records[0];
      HyperParams p = rec.params;
      const auto direct = run_task(src, tgt, m, p, c, Norm::ZScore);
      CHECK(rec.accuracy == direct.accuracy);
      CHECK(rec.correct == direct.correct);
      CHECK(res.best == std::optional<std::size_t>{0});
    }
  }
}

TEST_CASE("every grid cell matches an independent run_task") {
  const auto [src, tgt] = drift_task(5);
  const auto res = grid_search(src, tgt, Method::Ddrca, small_grid(), Classifier::NearestNeighbor, Norm::ZScore, 2);
  CHECK(res.surface.records.size() == 3 * 2 * 3 * 2);
  for (const auto& rec : res.surface.records) {
    const auto direct = run_task(src, tgt, Method::Ddrca, rec.params, Classifier::NearestNeighbor, Norm::ZScore);
    CHECK(rec.correct == direct.correct);
  }
}

TEST_CASE("records are in lexicographic parameter order and pin unswept axes") {
  const auto [src, tgt] = drift_task(6);
  GridSpec g = small_grid();
  g.lambda = {1, 0.1, 1};
  const auto res = grid_search(src, tgt, Method::Ddrca, g, Classifier::Centroid, Norm::None, 3);
  const auto& recs = res.surface.records;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const auto& a = recs[i - 1].params;
    const auto& b = recs[i].params;
    CHECK(std::tie(a.d, a.lambda, a.kappa, a.mu) < std::tie(b.d, b.lambda, b.kappa, b.mu));
  }
  CHECK(res.surface.axis("lambda")->size() == 2);

  const auto drca = grid_search(src, tgt, Method::Drca, g, Classifier::Centroid, Norm::None, 1);
  CHECK(drca.surface.records.size() == 3 * 2);
  CHECK(drca.surface.axis("kappa") == nullptr);
  for (const auto& r : drca.surface.records) {
    CHECK(r.params.kappa == 0.0);
    CHECK(r.params.mu == 0.0);
  }
  const auto pca = grid_search(src, tgt, Method::Pca, g, Classifier::Centroid, Norm::None, 1);
  CHECK(pca.surface.records.size() == 3);
}

TEST_CASE("best record tie rule and re-scan") {
  GridSurface s;
  auto rec = [](std::size_t d, double l, double k, double m, double acc) {
    TaskResult r;
    r.params.d = d;
    r.params.lambda = l;
    r.params.kappa = k;
    r.params.mu = m;
    r.accuracy = acc;
    return r;
  };
  s.records = {rec(2, 0.1, 1, 1, 80), rec(1, 10, 1, 1, 80), rec(1, 1, 1, 1, 70), rec(1, 10, 0.1, 1, 60)};
  TaskResult failed = rec(1, 0.01, 1, 1, 99);
  failed.error = "boom";
  s.records.push_back(failed);
  CHECK(best_record(s) == std::optional<std::size_t>{1});
  s.records[3].accuracy = 80;
  CHECK(best_record(s) == std::optional<std::size_t>{3});

  const auto [src, tgt] = drift_task(7);
  const auto res = grid_search(src, tgt, Method::Ddrca, small_grid(), Classifier::NearestNeighbor, Norm::ZScore, 0);
  REQUIRE(res.best);
  double top = 0.0;
  for (const auto& r : res.surface.records) top = std::max(top, r.accuracy);
  CHECK(res.surface.records[*res.best].accuracy == top);
}

TEST_CASE("default grid has 1000 ddrca cells and isolates failures") {
  const auto [src, tgt] = drift_task(8, 16);
  const auto res = grid_search(src, tgt, Method::Ddrca, GridSpec::ucsd_defaults(), Classifier::NearestNeighbor,
                               Norm::ZScore, 0);
  CHECK(res.surface.records.size() == 1000);
  std::size_t ok = 0;
  for (const auto& r : res.surface.records) {
    if (r.ok()) {
      ++ok;
      CHECK(r.params.d <= 16);
      CHECK(r.accuracy >= 0.0);
      CHECK(r.accuracy <= 100.0);
    } else {
      CHECK(r.params.d > 16);
      CHECK(r.error_code == "DimensionTooLarge");
    }
  }
  CHECK(ok == 5 * 125);

  // Heatmap slices.
  std::ostringstream km;
  emit_heatmap(res.surface, {{"d", 4}, {"lambda", 1}}, "kappa", "mu", km);
  auto rows = csv_rows(km.str());
  CHECK(rows.size() == 6);
  for (const auto& r : rows) CHECK(r.size() == 6);
  CHECK(rows[0][0] == "mu\\kappa");

  std::ostringstream dl;
  emit_heatmap(res.surface, {{"kappa", 0.1}, {"mu", 10}}, "lambda", "d", dl);
  rows = csv_rows(dl.str());
  CHECK(rows.size() == 9);
  for (const auto& r : rows) CHECK(r.size() == 6);
  CHECK(rows[1][0] == "1");
  CHECK(rows[8][0] == "128");
  CHECK(rows[8][1] == "NA");
  CHECK(rows[1][1] != "NA");
}

TEST_CASE("heatmap errors") {
  const auto [src, tgt] = drift_task(9);
  GridSpec g = small_grid();
  const auto drca = grid_search(src, tgt, Method::Drca, g, Classifier::NearestNeighbor, Norm::ZScore, 1);
  std::ostringstream sink;
  CHECK(code_of([&] { emit_heatmap(drca.surface, {}, "kappa", "d", sink); }) == Errc::AxisNotInSurface);
  CHECK(code_of([&] { emit_heatmap(drca.surface, {}, "lambda", "mu", sink); }) == Errc::AxisNotInSurface);
  CHECK_NOTHROW(emit_heatmap(drca.surface, {}, "lambda", "d", sink));

  const auto dd = grid_search(src, tgt, Method::Ddrca, g, Classifier::NearestNeighbor, Norm::ZScore, 1);
  CHECK(code_of([&] { emit_heatmap(dd.surface, {{"d", 1}}, "kappa", "mu", sink); }) == Errc::InvalidArgument);
  CHECK(code_of([&] { emit_heatmap(dd.surface, {{"d", 1}, {"lambda", 5}}, "kappa", "mu", sink); }) ==
        Errc::AxisNotInSurface);
}

TEST_CASE("sweeps are deterministic across thread counts") {
  const auto [src, tgt] = drift_task(10);
  const auto a = grid_search(src, tgt, Method::Ddrca, small_grid(), Classifier::NearestNeighbor, Norm::ZScore, 1);
  const auto b = grid_search(src, tgt, Method::Ddrca, small_grid(), Classifier::NearestNeighbor, Norm::ZScore, 4);
  const auto c = grid_search(src, tgt, Method::Ddrca, small_grid(), Classifier::NearestNeighbor, Norm::ZScore, 4);
  CHECK(surface_csv(a.surface) == surface_csv(b.surface));
  CHECK(surface_csv(b.surface) == surface_csv(c.surface));
  CHECK(surface_json(a.surface) == surface_json(b.surface));
  CHECK(a.best == b.best);
}

TEST_CASE("surface files read back") {
  const auto [src, tgt] = drift_task(11, 4);
  GridSpec g = small_grid();
  g.d = {1, 4, 8};
  const auto res = grid_search(src, tgt, Method::Ddrca, g, Classifier::NearestNeighbor, Norm::ZScore, 1);
  for (bool json : {false, true}) {
    std::istringstream in(json ? surface_json(res.surface) : surface_csv(res.surface));
    const auto back = read_surface(in);
    CHECK(back.method == res.surface.method);
    CHECK(back.source == "synth-source");
    CHECK(back.axes == res.surface.axes);
    REQUIRE(back.records.size() == res.surface.records.size());
    for (std::size_t i = 0; i < back.records.size(); ++i) {
      CHECK(back.records[i].params.d == res.surface.records[i].params.d);
      CHECK(back.records[i].params.kappa == res.surface.records[i].params.kappa);
      CHECK(back.records[i].ok() == res.surface.records[i].ok());
      CHECK(back.records[i].correct == res.surface.records[i].correct);
    }
    if (json) CHECK(surface_json(back) == surface_json(res.surface));
  }
  const auto rows = csv_rows(surface_csv(res.surface));
  CHECK(rows[0].size() == 13);
  CHECK(rows[0][0] == "method");
  CHECK(rows.back()[12] == "DimensionTooLarge");
  CHECK(rows.back()[9] == "NA");
  std::istringstream junk("hello\n");
  CHECK(code_of([&] { read_surface(junk); }) == Errc::MalformedLine);
}

TEST_CASE("2-D projection rows and variance ordering") {
  const auto [src, tgt] = drift_task(12);
  auto all = concat({src, tgt}, "both");
  std::ostringstream out;
  emit_projection_2d(all, Norm::ZScore, out);
  const auto rows = csv_rows(out.str());
  REQUIRE(rows.size() == all.size() + 1);
  CHECK(rows[0] == std::vector<std::string>{"batch", "label", "pc1", "pc2"});
  double m1 = 0, m2 = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    m1 += std::stod(rows[i][2]);
    m2 += std::stod(rows[i][3]);
  }
  const double n = static_cast<double>(all.size());
  m1 /= n;
  m2 /= n;
  double v1 = 0, v2 = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    v1 += std::pow(std::stod(rows[i][2]) - m1, 2);
    v2 += std::pow(std::stod(rows[i][3]) - m2, 2);
  }
  CHECK(v1 >= v2);

  LabeledDataset one;
  one.features = Matrix{{3}, {4}, {5}};
  one.labels = {1};
  one.num_classes = 1;
  std::ostringstream single;
  emit_projection_2d(one, Norm::None, single);
  CHECK(single.str() == "batch,label,pc1,pc2\n0,1,0,0\n");
  CHECK(code_of([] {
          std::ostringstream s;
          emit_projection_2d(LabeledDataset{}, Norm::None, s);
        }) == Errc::EmptyDataset);
}

TEST_CASE("reproduction on a UCSD-shaped directory") {
  TempDir dir("repro");
  write_ucsd_like(dir.path(), 1.0, 21);
  const auto batches = dataio::load_batch_directory(dir.path());
  UcsdOptions opts;
  opts.grid.d = {1, 4};
  opts.grid.lambda = {1};
  opts.grid.kappa = {0.1, 1};
  opts.grid.mu = {1};
  const auto report = reproduce_ucsd(batches, {Method::Pca, Method::Ddrca}, opts);
  REQUIRE(report.methods.size() == 2);
  for (const auto& m : report.methods) {
    REQUIRE(m.task_best.size() == 9);
    double sum = 0.0;
    for (std::size_t t = 0; t < 9; ++t) {
      CHECK(m.task_best[t].target == "batch" + std::to_string(t + 2));
      CHECK(m.task_best[t].ok());
      sum += m.task_best[t].accuracy;
      CHECK(m.global_accuracy[t] <= m.task_best[t].accuracy);
    }
    CHECK(m.task_best_average == doctest::Approx(sum / 9));
    CHECK(m.global_average <= m.task_best_average);
    REQUIRE(m.global_params);
  }
  std::ostringstream csv;
  write_report_csv(report, csv);
  const auto rows = csv_rows(csv.str());
  REQUIRE(rows.size() == 11);
  CHECK(rows[0] == std::vector<std::string>{"target", "pca_task_best", "pca_global_best", "pca_published",
                                            "ddrca_task_best", "ddrca_global_best", "ddrca_published"});
  CHECK(rows[1][0] == "batch2");
  CHECK(rows[9][0] == "batch10");
  CHECK(rows[10][0] == "Average");
  CHECK(rows[10][6] == "73.80");
  std::ostringstream json;
  write_report_json(report, json);
  CHECK(json.str().find("\"task_best_average\"") != std::string::npos);

  auto broken = batches;
  broken[3].features = broken[3].features.leading_columns(160);
  broken[3].labels.resize(160);
  broken[3].raw_labels.resize(160);
  CHECK(code_of([&] { reproduce_ucsd(broken, {Method::Pca}, opts); }) == Errc::DataInvalid);
}

TEST_CASE("published rows") {
  const auto& rows = published_ucsd();
  REQUIRE(rows.size() == 4);
  CHECK(rows[2].values[9] == 62.15);
  CHECK(rows[3].values[9] == 73.80);
  CHECK(rows[3].values[3] == 91.37);
}

TEST_CASE("cli exit codes and outputs") {
  TempDir dir("cli");
  const auto [src, tgt] = drift_task(13, 128);
  dataio::write_svmlight(src, dir / "s.dat");
  dataio::write_svmlight(tgt, dir / "t.dat");
  const std::string files = " --source " + (dir / "s.dat").string() + " --target " + (dir / "t.dat").string();
  const std::string quiet = " >/dev/null 2>&1";

  CHECK(run_command(cli() + " eval" + files + " --method ddrca --d 3 --out " + (dir / "e.csv").string() + quiet) == 0);
  const auto eval_rows = csv_rows(read_file(dir / "e.csv"));
  REQUIRE(eval_rows.size() == 2);
  CHECK(eval_rows[1][10].find('.') == eval_rows[1][10].size() - 3);

  CHECK(run_command(cli() + " fit" + files + " --method pca --d 2 --out " + (dir / "m.json").string() + quiet) == 0);
  CHECK(read_file(dir / "m.json").find("driftlens-model") != std::string::npos);

  CHECK(run_command(cli() + " grid" + files + " --d 1,2 --lambda 1 --kappa 1,10 --mu 1 --format json --out " +
                    (dir / "g.json").string() + quiet) == 0);
  CHECK(run_command(cli() + " heatmap --surface " + (dir / "g.json").string() +
                    " --x kappa --y d --fix lambda=1 --fix mu=1 --out " + (dir / "h.csv").string() + quiet) == 0);
  CHECK(csv_rows(read_file(dir / "h.csv")).size() == 3);
  CHECK(run_command(cli() + " heatmap --surface " + (dir / "g.json").string() + " --x kappa --y d" + quiet) == 2);

  std::ofstream(dir / "bad.dat") << "1 1:0.5\nbroken line\n";
  CHECK(run_command(cli() + " eval --source " + (dir / "bad.dat").string() + " --target " + (dir / "t.dat").string() +
                    quiet) == 2);
  CHECK(run_command(cli() + " eval" + files + " --method svm" + quiet) == 2);
  CHECK(run_command(cli() + " eval" + files + " --no-such-flag" + quiet) == 2);
  CHECK(run_command(cli() + " eval --seed 3 --method lda --d 2" + quiet) == 0);

  TempDir data("cli-data");
  write_ucsd_like(data.path(), 1.0, 5);
  CHECK(run_command(cli() + " validate " + data.path().string() + quiet) == 0);
  CHECK(run_command(cli() + " project2d " + data.path().string() + " " + (dir / "p.csv").string() + quiet) == 0);
  CHECK(csv_rows(read_file(dir / "p.csv")).size() == 13911);
  {
    // Truncate batch 4 by one line.
    const std::string text = read_file(data / "batch4.dat");
    std::ofstream(data / "batch4.dat") << text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  }
  CHECK(run_command(cli() + " validate " + data.path().string() + quiet) == 1);
  CHECK(run_command(cli() + " reproduce-ucsd " + data.path().string() + " --methods pca --d 1" + quiet) == 1);
}

}  // TEST_SUITE
