#include "colorizer/colorspace.hpp"

#include <algorithm>
#include <cmath>

#include "colorizer/errors.hpp"

namespace colorizer {

namespace {

// sRGB primaries to XYZ (D65, 2 degree observer), IEC 61966-2-1 coefficients.
constexpr double kRgbToXyz[3][3] = {
    {0.4124, 0.3576, 0.1805},
    {0.2126, 0.7152, 0.0722},
    {0.0193, 0.1192, 0.9505},
};

constexpr double kDelta = 6.0 / 29.0;

struct Matrices {
    // Rows of kRgbToXyz divided by the reference white (its row sums), so each row sums to one.
    double forward[3][3];
    double inverse[3][3];
};

const Matrices& matrices() {
    static const Matrices m = [] {
        Matrices out{};
        for (int i = 0; i < 3; ++i) {
            const double white = kRgbToXyz[i][0] + kRgbToXyz[i][1] + kRgbToXyz[i][2];
            for (int j = 0; j < 3; ++j) out.forward[i][j] = kRgbToXyz[i][j] / white;
        }
        const auto& f = out.forward;
        const double det = f[0][0] * (f[1][1] * f[2][2] - f[1][2] * f[2][1]) -
                           f[0][1] * (f[1][0] * f[2][2] - f[1][2] * f[2][0]) +
                           f[0][2] * (f[1][0] * f[2][1] - f[1][1] * f[2][0]);
        out.inverse[0][0] = (f[1][1] * f[2][2] - f[1][2] * f[2][1]) / det;
        out.inverse[0][1] = (f[0][2] * f[2][1] - f[0][1] * f[2][2]) / det;
        out.inverse[0][2] = (f[0][1] * f[1][2] - f[0][2] * f[1][1]) / det;
        out.inverse[1][0] = (f[1][2] * f[2][0] - f[1][0] * f[2][2]) / det;
        out.inverse[1][1] = (f[0][0] * f[2][2] - f[0][2] * f[2][0]) / det;
        out.inverse[1][2] = (f[0][2] * f[1][0] - f[0][0] * f[1][2]) / det;
        out.inverse[2][0] = (f[1][0] * f[2][1] - f[1][1] * f[2][0]) / det;
        out.inverse[2][1] = (f[0][1] * f[2][0] - f[0][0] * f[2][1]) / det;
        out.inverse[2][2] = (f[0][0] * f[1][1] - f[0][1] * f[1][0]) / det;
        return out;
    }();
    return m;
}

const std::array<double, 256>& linear_lut() {
    static const std::array<double, 256> lut = [] {
        std::array<double, 256> t{};
        for (int c = 0; c < 256; ++c) {
            const double v = c / 255.0;
            t[c] = v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
        }
        return t;
    }();
    return lut;
}

double lab_f(double t) {
    return t > kDelta * kDelta * kDelta ? std::cbrt(t) : t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double lab_f_inv(double t) {
    return t > kDelta ? t * t * t : 3.0 * kDelta * kDelta * (t - 4.0 / 29.0);
}

// Rows sum to one, so expanding around the middle component keeps neutral inputs exactly neutral.
void apply_unit_rows(const double (&m)[3][3], double x, double y, double z, double (&out)[3]) {
    const double dx = x - y;
    const double dz = z - y;
    for (int i = 0; i < 3; ++i) out[i] = y + m[i][0] * dx + m[i][2] * dz;
}

Lab linear_to_lab(double r, double g, double b) {
    double xyz[3];
    apply_unit_rows(matrices().forward, r, g, b, xyz);
    const double fx = lab_f(xyz[0]);
    const double fy = lab_f(xyz[1]);
    const double fz = lab_f(xyz[2]);
    return {116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

bool in_gamut(const LinearRgb& c) {
    constexpr double tol = 1e-12;
    return c.r >= -tol && c.r <= 1.0 + tol && c.g >= -tol && c.g <= 1.0 + tol && c.b >= -tol &&
           c.b <= 1.0 + tol;
}

}  // namespace

Rgb8Image::Rgb8Image(int w, int h) : width(w), height(h) {
    if (w < 1 || h < 1) throw DimensionError("image dimensions must be >= 1");
    data.assign(pixel_count() * 3, 0);
}

Rgb8Image::Rgb8Image(int w, int h, std::vector<std::uint8_t> samples)
    : width(w), height(h), data(std::move(samples)) {
    if (w < 1 || h < 1) throw DimensionError("image dimensions must be >= 1");
    if (data.size() != pixel_count() * 3)
        throw DimensionError("RGB sample count does not match width*height*3");
}

LabImage::LabImage(int w, int h) : width(w), height(h) {
    const auto n = pixel_count();
    L.assign(n, 0.0);
    a.assign(n, 0.0);
    b.assign(n, 0.0);
}

AbPlanes::AbPlanes(int w, int h) : width(w), height(h) {
    const auto n = static_cast<std::size_t>(w) * h;
    a.assign(n, 0.0);
    b.assign(n, 0.0);
}

double srgb_to_linear(std::uint8_t code) { return linear_lut()[code]; }

std::uint8_t linear_to_srgb(double linear) {
    const double l = std::clamp(linear, 0.0, 1.0);
    const double s = l <= 0.0031308 ? 12.92 * l : 1.055 * std::pow(l, 1.0 / 2.4) - 0.055;
    const double code = std::floor(s * 255.0 + 0.5);
    return static_cast<std::uint8_t>(std::clamp(code, 0.0, 255.0));
}

Lab rgb_to_lab(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    const auto& lut = linear_lut();
    return linear_to_lab(lut[r], lut[g], lut[b]);
}

LinearRgb lab_to_linear_rgb(const Lab& lab) {
    const double fy = (lab.L + 16.0) / 116.0;
    const double fx = fy + lab.a / 500.0;
    const double fz = fy - lab.b / 200.0;
    double rgb[3];
    apply_unit_rows(matrices().inverse, lab_f_inv(fx), lab_f_inv(fy), lab_f_inv(fz), rgb);
    return {rgb[0], rgb[1], rgb[2]};
}

std::array<std::uint8_t, 3> lab_to_rgb(const Lab& lab) {
    const LinearRgb c = lab_to_linear_rgb(lab);
    return {linear_to_srgb(c.r), linear_to_srgb(c.g), linear_to_srgb(c.b)};
}

LabImage rgb_to_lab(std::span<const std::uint8_t> rgb, int width, int height) {
    LabImage out(width, height);
    if (rgb.size() != out.pixel_count() * 3)
        throw DimensionError("RGB sample count does not match width*height*3");
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const Lab lab = rgb_to_lab(rgb[3 * i], rgb[3 * i + 1], rgb[3 * i + 2]);
        out.L[i] = lab.L;
        out.a[i] = lab.a;
        out.b[i] = lab.b;
    }
    return out;
}

LabImage rgb_to_lab(const Rgb8Image& img) { return rgb_to_lab(img.data, img.width, img.height); }

Rgb8Image lab_to_rgb(const LabImage& img) {
    Rgb8Image out(img.width, img.height);
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const auto px = lab_to_rgb(Lab{img.L[i], img.a[i], img.b[i]});
        std::copy(px.begin(), px.end(), out.data.begin() + 3 * i);
    }
    return out;
}

double gamut_chroma_scale(const Lab& lab) {
    if (in_gamut(lab_to_linear_rgb(lab))) return 1.0;
    const double L = std::clamp(lab.L, 0.0, 100.0);
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (in_gamut(lab_to_linear_rgb({L, mid * lab.a, mid * lab.b})))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

std::pair<LightnessPlane, AbPlanes> split_channels(const LabImage& img) {
    LightnessPlane l{img.width, img.height, img.L};
    AbPlanes ab;
    ab.width = img.width;
    ab.height = img.height;
    ab.a = img.a;
    ab.b = img.b;
    return {std::move(l), std::move(ab)};
}

LabImage merge_channels(const LightnessPlane& lightness, const AbPlanes& ab) {
    if (lightness.width != ab.width || lightness.height != ab.height)
        throw DimensionError("lightness plane is " + std::to_string(lightness.width) + "x" +
                             std::to_string(lightness.height) + " but ab planes are " +
                             std::to_string(ab.width) + "x" + std::to_string(ab.height));
    const auto n = static_cast<std::size_t>(ab.width) * ab.height;
    if (lightness.values.size() != n || ab.a.size() != n || ab.b.size() != n)
        throw DimensionError("plane sample count does not match its dimensions");
    LabImage out;
    out.width = ab.width;
    out.height = ab.height;
    out.L = lightness.values;
    out.a = ab.a;
    out.b = ab.b;
    return out;
}

double normalize(PlaneKind kind, Direction dir, double v) {
    if (kind == PlaneKind::Lightness)
        return dir == Direction::ToNet ? v / 50.0 - 1.0 : (v + 1.0) * 50.0;
    return dir == Direction::ToNet ? v / kChromaRange : v * kChromaRange;
}

void normalize(PlaneKind kind, Direction dir, std::span<double> values) {
    for (double& v : values) v = normalize(kind, dir, v);
}

}  // namespace colorizer
