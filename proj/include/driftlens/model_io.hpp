#pragma once

#include <filesystem>
#include <string>

#include "driftlens/subspace.hpp"

namespace driftlens::subspace {

inline constexpr int kModelFormatVersion = 1;

// JSON document: {"format","version","method","params","D","d","projection"
// (row-major),"eigenvalues","source_mean","target_mean"}. Doubles are written
// in shortest round-trip form, so save/load reproduces every bit.
std::string model_to_json(const SubspaceModel& model);
SubspaceModel model_from_json(const std::string& text);

void save_model(const SubspaceModel& model, const std::filesystem::path& path);
SubspaceModel load_model(const std::filesystem::path& path);

}  // namespace driftlens::subspace
