// Command-line front end for the drift-compensation experiments.
//
// Exit codes: 0 success, 1 validation failure, 2 malformed input,
// 3 numerical failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "driftlens/dataio.hpp"
#include "driftlens/error.hpp"
#include "driftlens/format.hpp"
#include "driftlens/harness.hpp"
#include "driftlens/model_io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace driftlens;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitMalformed = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
  std::string source;
  std::string target;
  std::string method = "ddrca";
  std::string d = "1";
  std::string lambda = "1";
  std::string kappa = "1";
  std::string mu = "1";
  double ridge_tau = 1e-3;
  std::string classifier = "1nn";
  std::string norm = "zscore";
  std::string out;
  std::string format = "csv";
  std::size_t dim = dataio::kUcsdFeatureDim;
  long long seed = -1;
  unsigned threads = 0;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& s, const char* flag) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) fail(Errc::InvalidArgument, std::string(flag) + ": not a number '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s, const char* flag) {
  const double v = parse_double(s, flag);
  if (v < 1 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    fail(Errc::InvalidArgument, std::string(flag) + ": expected a positive integer, got '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

std::vector<double> parse_doubles(const std::string& s, const char* flag) {
  std::vector<double> out;
  for (const auto& item : split_list(s)) out.push_back(parse_double(item, flag));
  if (out.empty()) fail(Errc::InvalidArgument, std::string(flag) + ": empty list");
  return out;
}

void add_common(CLI::App* cmd, CommonOptions& o, bool lists) {
  const std::string suffix = lists ? " (comma-separated list; default: standard grid)" : "";
  cmd->add_option("--source", o.source, "Labeled source data (svmlight text)");
  cmd->add_option("--target", o.target, "Target data (svmlight text; labels used only for scoring)");
  cmd->add_option("--method", o.method, "pca|lda|drca|ddrca")->capture_default_str();
  cmd->add_option("--d", o.d, "Subspace dimension" + suffix);
  cmd->add_option("--lambda", o.lambda, "Target-variance weight" + suffix);
  cmd->add_option("--kappa", o.kappa, "Within-class weight" + suffix);
  cmd->add_option("--mu", o.mu, "Between-class weight" + suffix);
  cmd->add_option("--ridge-tau", o.ridge_tau, "Relative ridge on the discrepancy matrix")->capture_default_str();
  cmd->add_option("--classifier", o.classifier, "1nn|centroid")->capture_default_str();
  cmd->add_option("--norm", o.norm, "zscore|none")->capture_default_str();
  cmd->add_option("--out", o.out, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv|json")->capture_default_str();
  cmd->add_option("--dim", o.dim, "Feature dimension of the input files")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Use a seeded synthetic two-domain task instead of --source/--target");
  cmd->add_option("--threads", o.threads, "Worker threads for sweeps (0 = all cores)")->capture_default_str();
}

std::pair<LabeledDataset, LabeledDataset> load_task(const CommonOptions& o) {
  if (o.seed >= 0) {
    Vector drift(10, 0.0);
    drift[0] = 5.0;
    return dataio::synth_two_domain(static_cast<std::uint64_t>(o.seed), 50, 3, 10, drift);
  }
  if (o.source.empty() || o.target.empty()) fail(Errc::InvalidArgument, "--source and --target are required (or --seed)");
  dataio::LabelMap labels;
  dataio::SvmlightOptions opts;
  opts.dim = o.dim;
  LabeledDataset source = dataio::parse_svmlight(fs::path(o.source), labels, opts);
  LabeledDataset target = dataio::parse_svmlight(fs::path(o.target), labels, opts);
  source.num_classes = target.num_classes = labels.size();
  return {std::move(source), std::move(target)};
}

subspace::HyperParams single_params(const CommonOptions& o) {
  subspace::HyperParams p;
  p.d = parse_count(o.d, "--d");
  p.lambda = parse_double(o.lambda, "--lambda");
  p.kappa = parse_double(o.kappa, "--kappa");
  p.mu = parse_double(o.mu, "--mu");
  p.ridge_tau = o.ridge_tau;
  return p;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") fail(Errc::InvalidArgument, "--format must be csv or json");
}

template <typename Fn>
void with_output(const std::string& path, Fn&& write) {
  if (path.empty()) {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path);
  write(out);
  if (!out) fail(Errc::Io, "write failed: " + path);
}

fs::path data_dir_or_fail(const std::string& positional) {
  const fs::path dir = dataio::resolve_data_dir(positional);
  if (dir.empty()) fail(Errc::InvalidArgument, std::string("no dataset directory given and $") + dataio::kDataEnvVar + " is unset");
  return dir;
}

int cmd_validate(const std::string& dir_arg) {
  const auto batches = dataio::load_batch_directory(data_dir_or_fail(dir_arg));
  const auto report = dataio::validate_batches(batches, dataio::ucsd_registry());
  std::cout << report.to_text();
  return report.passed ? kExitOk : kExitValidation;
}

int cmd_fit(const CommonOptions& o) {
  const auto [source, target] = load_task(o);
  const auto method = subspace::parse_method(o.method);
  const auto task = harness::prepare(source, target, harness::parse_norm(o.norm));
  const auto model = harness::fit_model(method, task.source, task.target, single_params(o));
  with_output(o.out, [&](std::ostream& os) { os << subspace::model_to_json(model); });
  return kExitOk;
}

int cmd_eval(const CommonOptions& o) {
  check_format(o.format);
  const auto [source, target] = load_task(o);
  const auto method = subspace::parse_method(o.method);
  const auto classifier = classify::parse_classifier(o.classifier);
  const auto norm = harness::parse_norm(o.norm);
  const auto r = harness::run_task(source, target, method, single_params(o), classifier, norm);
  with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      nlohmann::ordered_json j;
      j["source"] = r.source;
      j["target"] = r.target;
      j["method"] = std::string(subspace::to_string(r.method));
      j["classifier"] = std::string(classify::to_string(classifier));
      j["norm"] = std::string(harness::to_string(norm));
      j["d"] = r.params.d;
      j["lambda"] = r.params.lambda;
      j["kappa"] = r.params.kappa;
      j["mu"] = r.params.mu;
      j["ridge_tau"] = r.params.ridge_tau;
      j["accuracy"] = r.accuracy;
      j["correct"] = r.correct;
      j["total"] = r.total;
      os << j.dump(1) << '\n';
    } else {
      os << "source,target,method,classifier,norm,d,lambda,kappa,mu,ridge_tau,accuracy\n"
         << r.source << ',' << r.target << ',' << subspace::to_string(r.method) << ','
         << classify::to_string(classifier) << ',' << harness::to_string(norm) << ',' << r.params.d << ','
         << shortest(r.params.lambda) << ',' << shortest(r.params.kappa) << ',' << shortest(r.params.mu) << ','
         << shortest(r.params.ridge_tau) << ',' << fixed2(r.accuracy) << '\n';
    }
  });
  return kExitOk;
}

harness::GridSpec grid_from_flags(const CommonOptions& o, const CLI::App* cmd) {
  harness::GridSpec g = harness::GridSpec::ucsd_defaults();
  g.ridge_tau = o.ridge_tau;
  if (cmd->count("--d") > 0) {
    g.d.clear();
    for (const auto& item : split_list(o.d)) g.d.push_back(parse_count(item, "--d"));
  }
  if (cmd->count("--lambda") > 0) g.lambda = parse_doubles(o.lambda, "--lambda");
  if (cmd->count("--kappa") > 0) g.kappa = parse_doubles(o.kappa, "--kappa");
  if (cmd->count("--mu") > 0) g.mu = parse_doubles(o.mu, "--mu");
  return g;
}

int cmd_grid(const CommonOptions& o, const CLI::App* cmd) {
  check_format(o.format);
  const auto [source, target] = load_task(o);
  const auto method = subspace::parse_method(o.method);
  const auto result = harness::grid_search(source, target, method, grid_from_flags(o, cmd),
                                           classify::parse_classifier(o.classifier), harness::parse_norm(o.norm),
                                           o.threads);
  with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      harness::write_surface_json(result.surface, os);
    } else {
      harness::write_surface_csv(result.surface, os);
    }
  });
  if (result.best) {
    const auto& b = result.surface.records[*result.best];
    std::cerr << "best: " << fixed2(b.accuracy) << "% at d=" << b.params.d << " lambda=" << shortest(b.params.lambda)
              << " kappa=" << shortest(b.params.kappa) << " mu=" << shortest(b.params.mu) << '\n';
  } else {
    std::cerr << "no grid cell succeeded\n";
  }
  return kExitOk;
}

int cmd_reproduce(const std::string& dir_arg, const CommonOptions& o, const std::string& methods_arg,
                  const std::string& surfaces_dir, const CLI::App* cmd) {
  check_format(o.format);
  const auto batches = dataio::load_batch_directory(data_dir_or_fail(dir_arg));
  std::vector<subspace::Method> methods;
  for (const auto& m : split_list(methods_arg)) methods.push_back(subspace::parse_method(m));

  harness::UcsdOptions opts;
  opts.classifier = classify::parse_classifier(o.classifier);
  opts.norm = harness::parse_norm(o.norm);
  opts.threads = o.threads;
  opts.grid = grid_from_flags(o, cmd);
  opts.log = &std::cerr;
  harness::UcsdReport report;
  try {
    report = harness::reproduce_ucsd(batches, methods, opts);
  } catch (const Error& e) {
    if (e.code() == Errc::DataInvalid) {
      std::cerr << e.what() << '\n';
      return kExitValidation;
    }
    throw;
  }

  with_output(o.out, [&](std::ostream& os) {
    if (o.format == "json") {
      harness::write_report_json(report, os);
    } else {
      harness::write_report_csv(report, os);
    }
  });
  if (!surfaces_dir.empty()) {
    fs::create_directories(surfaces_dir);
    for (const auto& m : report.methods) {
      for (const auto& s : m.surfaces) {
        const auto path = fs::path(surfaces_dir) / (std::string(subspace::to_string(m.method)) + "_" + s.target + ".csv");
        with_output(path.string(), [&](std::ostream& os) { harness::write_surface_csv(s, os); });
      }
    }
  }
  return kExitOk;
}

int cmd_project2d(const std::vector<std::string>& args, const std::string& norm) {
  std::string dir_arg;
  std::string out;
  if (args.size() == 2) {
    dir_arg = args[0];
    out = args[1];
  } else if (args.size() == 1) {
    out = args[0];
  } else {
    fail(Errc::InvalidArgument, "usage: project2d [<dir>] <out.csv>");
  }
  const auto batches = dataio::load_batch_directory(data_dir_or_fail(dir_arg));
  const auto all = concat(batches, "ucsd");
  with_output(out, [&](std::ostream& os) { harness::emit_projection_2d(all, harness::parse_norm(norm), os); });
  return kExitOk;
}

int cmd_heatmap(const std::string& surface_path, const std::string& x, const std::string& y,
                const std::vector<std::string>& fixes, const std::string& out) {
  const auto surface = harness::read_surface(fs::path(surface_path));
  std::map<std::string, double> fixed;
  for (const auto& f : fixes) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) fail(Errc::InvalidArgument, "--fix expects name=value, got '" + f + "'");
    fixed[f.substr(0, eq)] = parse_double(f.substr(eq + 1), "--fix");
  }
  with_output(out, [&](std::ostream& os) { harness::emit_heatmap(surface, fixed, x, y, os); });
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subspace projection for sensor-drift compensation (PCA, LDA, DRCA, D-DRCA)"};
  app.require_subcommand(1);

  std::string dir_arg;
  auto* validate = app.add_subcommand("validate", "Check batch1..10.dat sample counts");
  validate->add_option("dir", dir_arg, "Dataset directory (default: $DRIFTLENS_DATA)");

  CommonOptions fit_o;
  auto* fit = app.add_subcommand("fit", "Fit a projection and write it as JSON");
  add_common(fit, fit_o, false);

  CommonOptions eval_o;
  auto* eval = app.add_subcommand("eval", "Run one source -> target task and report accuracy");
  add_common(eval, eval_o, false);

  CommonOptions grid_o;
  auto* grid = app.add_subcommand("grid", "Sweep a parameter grid and write the accuracy surface");
  add_common(grid, grid_o, true);

  CommonOptions rep_o;
  std::string rep_dir;
  std::string methods = "pca,lda,drca,ddrca";
  std::string surfaces_dir;
  auto* rep = app.add_subcommand("reproduce-ucsd", "Batch 1 -> batches 2..10 with per-task tuning");
  rep->add_option("dir", rep_dir, "Dataset directory (default: $DRIFTLENS_DATA)");
  add_common(rep, rep_o, true);
  rep->add_option("--methods", methods, "Comma-separated methods")->capture_default_str();
  rep->add_option("--surfaces-dir", surfaces_dir, "Also write every grid surface as CSV here");

  std::vector<std::string> p2d_args;
  std::string p2d_norm = "zscore";
  auto* p2d = app.add_subcommand("project2d", "PCA 2-D projection of all batches as CSV");
  p2d->add_option("paths", p2d_args, "[<dir>] <out.csv>")->required();
  p2d->add_option("--norm", p2d_norm, "zscore|none")->capture_default_str();

  std::string surface_path;
  std::string x_axis;
  std::string y_axis;
  std::vector<std::string> fixes;
  std::string hm_out;
  auto* heat = app.add_subcommand("heatmap", "Slice a grid surface into a 2-D accuracy table");
  heat->add_option("--surface", surface_path, "Surface file written by grid (csv or json)")->required();
  heat->add_option("--x", x_axis, "Column parameter")->required();
  heat->add_option("--y", y_axis, "Row parameter")->required();
  heat->add_option("--fix", fixes, "name=value for every other swept parameter");
  heat->add_option("--out", hm_out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitMalformed;
  }

  try {
    if (*validate) return cmd_validate(dir_arg);
    if (*fit) return cmd_fit(fit_o);
    if (*eval) return cmd_eval(eval_o);
    if (*grid) return cmd_grid(grid_o, grid);
    if (*rep) return cmd_reproduce(rep_dir, rep_o, methods, surfaces_dir, rep);
    if (*p2d) return cmd_project2d(p2d_args, p2d_norm);
    if (*heat) return cmd_heatmap(surface_path, x_axis, y_axis, fixes, hm_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == Errc::DataInvalid) return kExitValidation;
    return is_numerical(e.code()) ? kExitNumerical : kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMalformed;
  }
  return kExitOk;
}
