#pragma once

#include <filesystem>
#include <vector>

#include "colorizer/colorspace.hpp"

namespace colorizer {

struct DecodedImage {
    Rgb8Image rgb;
    // Source had a single channel; rgb holds it replicated, which is the same as reading it as
    // sRGB-encoded lightness.
    bool grayscale = false;
};

// PNG (any bit depth / color type) or baseline JPEG, detected by signature.
// Throws IoError when unreadable, InputError when the content cannot be decoded.
DecodedImage read_image(const std::filesystem::path& path);

// 8-bit RGB PNG.
void write_png(const std::filesystem::path& path, const Rgb8Image& img);

bool has_image_extension(const std::filesystem::path& path);

// Regular files with an image extension, sorted by filename.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

}  // namespace colorizer
