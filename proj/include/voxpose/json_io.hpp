#pragma once

#include <filesystem>
#include <string>

#include <voxpose/experiment.hpp>

namespace voxpose {

// JSON round-trips for the config structs. Parsing validates ranges and
// throws BadSpec (BadPose for poses) with the offending field in the
// message; unknown keys are rejected so typos cannot silently fall back to
// defaults. Missing keys keep their default values.
std::string to_json(const Pose& pose);
Pose pose_from_json(const std::string& text);

std::string to_json(const SceneSpec& spec);
SceneSpec scene_from_json(const std::string& text);

std::string to_json(const ExperimentSpec& spec);
ExperimentSpec experiment_from_json(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace voxpose
