#pragma once

#include "colorizer/colorspace.hpp"
#include "colorizer/model.hpp"
#include "colorizer/quantizer.hpp"

namespace colorizer {

struct ColorizeOptions {
    // Classification heads only.
    DecodeMethod decode = DecodeMethod::AnnealedMean;
    double temperature = 0.38;
    // Multiplies the predicted ab.
    double saturation = 1.0;
    // Pull out-of-gamut predictions toward the neutral axis at constant L before encoding, so
    // the output keeps the input lightness. Off means plain per-channel clamping.
    bool fit_gamut = true;
};

// Throws ConfigError for temperature <= 0 or saturation < 0.
void validate(const ColorizeOptions& opts);

// Predicted ab at the network's output resolution (ab units), before upsampling.
AbPlanes predict_ab(const LightnessPlane& lightness, const Network& network, const ColorBinGrid* grid,
                    const ColorizeOptions& opts);

// Convert to Lab, predict ab from the resized L, upsample ab to the input size, scale by the
// saturation and merge with the full-resolution L, then convert back to RGB.
// Throws InputError for an empty image and ConfigError when a classification network has no grid.
Rgb8Image colorize(const Rgb8Image& img, const Network& network, const ColorBinGrid* grid,
                   const ColorizeOptions& opts = {});

}  // namespace colorizer
