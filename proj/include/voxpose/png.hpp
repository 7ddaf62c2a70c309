#pragma once

#include <filesystem>

#include <voxpose/renderer.hpp>

namespace voxpose {

// 8-bit RGB PNG. Colors are clamped to [0,1] and scaled; no gamma tag is
// written. Throws IoError on failure. Output depends only on pixel values.
void write_png(const std::filesystem::path& path, const Image& img);

}  // namespace voxpose
