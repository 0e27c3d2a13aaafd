#pragma once

#include <span>
#include <vector>

#include "colorizer/colorspace.hpp"

namespace colorizer {

// Half-pixel-centered bilinear resampling of a single plane with edge clamping.
std::vector<double> resize_bilinear(std::span<const double> src, int width, int height, int out_width,
                                    int out_height);
Rgb8Image resize_bilinear(const Rgb8Image& img, int out_width, int out_height);

// Largest centered square.
Rgb8Image center_crop_square(const Rgb8Image& img);

// Mean over non-overlapping factor x factor blocks; width and height must be multiples of factor.
std::vector<double> area_downsample(std::span<const double> src, int width, int height, int factor);

}  // namespace colorizer
