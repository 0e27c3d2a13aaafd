#include "colorizer/resample.hpp"

#include <algorithm>
#include <cmath>

#include "colorizer/errors.hpp"

namespace colorizer {

namespace {

struct Tap {
    int i0, i1;
    double w1;
};

std::vector<Tap> taps(int in, int out) {
    std::vector<Tap> t(out);
    const double scale = static_cast<double>(in) / out;
    for (int d = 0; d < out; ++d) {
        const double src = std::clamp((d + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
        const int i0 = static_cast<int>(std::floor(src));
        const int i1 = std::min(i0 + 1, in - 1);
        t[d] = {i0, i1, src - i0};
    }
    return t;
}

void check_size(int w, int h, int ow, int oh) {
    if (w < 1 || h < 1 || ow < 1 || oh < 1) throw DimensionError("resize: dimensions must be >= 1");
}

}  // namespace

std::vector<double> resize_bilinear(std::span<const double> src, int width, int height, int out_width,
                                    int out_height) {
    check_size(width, height, out_width, out_height);
    if (src.size() != static_cast<std::size_t>(width) * height)
        throw DimensionError("resize: plane size does not match its dimensions");
    const auto ty = taps(height, out_height);
    const auto tx = taps(width, out_width);
    std::vector<double> out(static_cast<std::size_t>(out_width) * out_height);
    for (int y = 0; y < out_height; ++y) {
        const double* r0 = src.data() + static_cast<std::size_t>(ty[y].i0) * width;
        const double* r1 = src.data() + static_cast<std::size_t>(ty[y].i1) * width;
        const double wy = ty[y].w1;
        for (int x = 0; x < out_width; ++x) {
            const auto& t = tx[x];
            const double top = r0[t.i0] + t.w1 * (r0[t.i1] - r0[t.i0]);
            const double bottom = r1[t.i0] + t.w1 * (r1[t.i1] - r1[t.i0]);
            out[static_cast<std::size_t>(y) * out_width + x] = top + wy * (bottom - top);
        }
    }
    return out;
}

Rgb8Image resize_bilinear(const Rgb8Image& img, int out_width, int out_height) {
    check_size(img.width, img.height, out_width, out_height);
    if (img.width == out_width && img.height == out_height) return img;
    Rgb8Image out(out_width, out_height);
    std::vector<double> plane(img.pixel_count());
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = img.data[3 * i + c];
        const auto resized = resize_bilinear(plane, img.width, img.height, out_width, out_height);
        for (std::size_t i = 0; i < resized.size(); ++i)
            out.data[3 * i + c] = static_cast<std::uint8_t>(std::clamp(std::floor(resized[i] + 0.5), 0.0, 255.0));
    }
    return out;
}

Rgb8Image center_crop_square(const Rgb8Image& img) {
    const int side = std::min(img.width, img.height);
    if (img.width == side && img.height == side) return img;
    const int x0 = (img.width - side) / 2;
    const int y0 = (img.height - side) / 2;
    Rgb8Image out(side, side);
    for (int y = 0; y < side; ++y) {
        const auto* src = img.pixel(x0, y0 + y);
        std::copy(src, src + 3 * side, out.pixel(0, y));
    }
    return out;
}

std::vector<double> area_downsample(std::span<const double> src, int width, int height, int factor) {
    if (factor < 1 || width % factor != 0 || height % factor != 0)
        throw DimensionError("area_downsample: " + std::to_string(width) + "x" + std::to_string(height) +
                             " is not divisible by " + std::to_string(factor));
    if (src.size() != static_cast<std::size_t>(width) * height)
        throw DimensionError("area_downsample: plane size does not match its dimensions");
    const int ow = width / factor;
    const int oh = height / factor;
    std::vector<double> out(static_cast<std::size_t>(ow) * oh, 0.0);
    const double inv = 1.0 / (factor * factor);
    for (int y = 0; y < oh; ++y)
        for (int x = 0; x < ow; ++x) {
            double sum = 0.0;
            for (int dy = 0; dy < factor; ++dy)
                for (int dx = 0; dx < factor; ++dx)
                    sum += src[static_cast<std::size_t>(y * factor + dy) * width + x * factor + dx];
            out[static_cast<std::size_t>(y) * ow + x] = sum * inv;
        }
    return out;
}

}  // namespace colorizer
