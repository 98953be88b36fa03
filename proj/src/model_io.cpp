#include "driftlens/model_io.hpp"

#include <fstream>
#include <sstream>

#include "driftlens/error.hpp"
#include "json.hpp"

namespace driftlens::subspace {

using nlohmann::json;

std::string model_to_json(const SubspaceModel& model) {
  json j;
  j["format"] = "driftlens-model";
  j["version"] = kModelFormatVersion;
  j["method"] = std::string(to_string(model.method));
  j["params"] = {{"d", model.params.d},
                 {"lambda", model.params.lambda},
                 {"kappa", model.params.kappa},
                 {"mu", model.params.mu},
                 {"ridge_tau", model.params.ridge_tau}};
  j["D"] = model.ambient_dim();
  j["d"] = model.dim();
  j["projection"] = std::vector<double>(model.projection.data().begin(), model.projection.data().end());
  j["eigenvalues"] = model.eigenvalues;
  j["source_mean"] = model.source_mean;
  j["target_mean"] = model.target_mean;
  return j.dump(1) + "\n";
}

SubspaceModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::MalformedLine, std::string("model JSON: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "driftlens-model") fail(Errc::MalformedLine, "not a driftlens model");
    const int version = j.at("version").get<int>();
    if (version != kModelFormatVersion) {
      fail(Errc::MalformedLine, "unsupported model version " + std::to_string(version));
    }
    SubspaceModel m;
    m.method = parse_method(j.at("method").get<std::string>());
    const auto& p = j.at("params");
    m.params.d = p.at("d").get<std::size_t>();
    m.params.lambda = p.at("lambda").get<double>();
    m.params.kappa = p.at("kappa").get<double>();
    m.params.mu = p.at("mu").get<double>();
    m.params.ridge_tau = p.at("ridge_tau").get<double>();
    const auto rows = j.at("D").get<std::size_t>();
    const auto cols = j.at("d").get<std::size_t>();
    m.projection = Matrix(rows, cols, j.at("projection").get<std::vector<double>>());
    m.eigenvalues = j.at("eigenvalues").get<Vector>();
    m.source_mean = j.at("source_mean").get<Vector>();
    m.target_mean = j.at("target_mean").get<Vector>();
    if (m.eigenvalues.size() != cols) fail(Errc::MalformedLine, "eigenvalue count does not match d");
    if (!m.source_mean.empty() && m.source_mean.size() != rows) fail(Errc::MalformedLine, "source_mean length");
    if (!m.target_mean.empty() && m.target_mean.size() != rows) fail(Errc::MalformedLine, "target_mean length");
    return m;
  } catch (const json::exception& e) {
    fail(Errc::MalformedLine, std::string("model JSON: ") + e.what());
  }
}

void save_model(const SubspaceModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(Errc::Io, "cannot write " + path.string());
  out << model_to_json(model);
  if (!out) fail(Errc::Io, "write failed: " + path.string());
}

SubspaceModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace driftlens::subspace
