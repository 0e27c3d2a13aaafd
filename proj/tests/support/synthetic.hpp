#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "colorizer/colorspace.hpp"

namespace colorizer::testing {

// Procedural landscape: smooth blue sky with an optional sun, textured green ground and a few
// smooth red discs. Color is predictable from lightness and local texture.
Rgb8Image make_scene(int width, int height, std::uint64_t seed);

// Writes scene_NNN.png files and returns their paths.
std::vector<std::filesystem::path> write_scenes(const std::filesystem::path& dir, int count, int size,
                                                std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path fresh_dir(const std::string& name);

}  // namespace colorizer::testing
