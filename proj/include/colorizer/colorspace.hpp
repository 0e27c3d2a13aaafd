#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace colorizer {

// Interleaved 8-bit RGB raster.
struct Rgb8Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Rgb8Image() = default;
    // Allocates a black image; throws DimensionError unless width, height >= 1.
    Rgb8Image(int width, int height);
    // Adopts existing samples; throws DimensionError when data.size() != width*height*3.
    Rgb8Image(int width, int height, std::vector<std::uint8_t> data);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::uint8_t* pixel(int x, int y) { return data.data() + (static_cast<std::size_t>(y) * width + x) * 3; }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + (static_cast<std::size_t>(y) * width + x) * 3;
    }

    bool operator==(const Rgb8Image&) const = default;
};

// CIELAB planes, double precision. L in [0,100], a and b nominally in [-110,110].
struct LabImage {
    int width = 0;
    int height = 0;
    std::vector<double> L;
    std::vector<double> a;
    std::vector<double> b;

    LabImage() = default;
    LabImage(int width, int height);

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    bool operator==(const LabImage&) const = default;
};

struct LightnessPlane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    bool operator==(const LightnessPlane&) const = default;
};

struct AbPlanes {
    int width = 0;
    int height = 0;
    std::vector<double> a;
    std::vector<double> b;

    AbPlanes() = default;
    AbPlanes(int width, int height);

    bool operator==(const AbPlanes&) const = default;
};

struct Lab {
    double L = 0.0;
    double a = 0.0;
    double b = 0.0;
};

struct LinearRgb {
    double r = 0.0;
    double g = 0.0;
    double b = 0.0;
};

// sRGB transfer function (IEC 61966-2-1), 8-bit code value to linear [0,1].
double srgb_to_linear(std::uint8_t code);
// Clamps to [0,1], applies the inverse transfer function, rounds half up.
std::uint8_t linear_to_srgb(double linear);

Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b);
// Linear RGB before clamping; components outside [0,1] mean the color is out of gamut.
LinearRgb lab_to_linear_rgb(const Lab& lab);
std::array<std::uint8_t, 3> lab_to_rgb(const Lab& lab);

LabImage rgb_to_lab(const Rgb8Image& img);
LabImage rgb_to_lab(std::span<const std::uint8_t> rgb, int width, int height);
Rgb8Image lab_to_rgb(const LabImage& img);

// Largest chroma scale s in [0,1] such that (L, s*a, s*b) is inside the sRGB gamut.
double gamut_chroma_scale(const Lab& lab);

std::pair<LightnessPlane, AbPlanes> split_channels(const LabImage& img);
// Throws DimensionError when the planes disagree in size.
LabImage merge_channels(const LightnessPlane& lightness, const AbPlanes& ab);

enum class PlaneKind { Lightness, Chroma };
enum class Direction { ToNet, FromNet };

// L: v/50 - 1 maps [0,100] onto [-1,1]; ab: v/110 maps [-110,110] onto [-1,1].
double normalize(PlaneKind kind, Direction dir, double v);
void normalize(PlaneKind kind, Direction dir, std::span<double> values);

inline constexpr double kChromaRange = 110.0;

}  // namespace colorizer
