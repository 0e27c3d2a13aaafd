#include "colorizer/colorize.hpp"

#include <cmath>
#include <vector>

#include "colorizer/errors.hpp"
#include "colorizer/nn/ops.hpp"
#include "colorizer/resample.hpp"

namespace colorizer {

void validate(const ColorizeOptions& opts) {
    if (!(opts.temperature > 0.0)) throw ConfigError("temperature must be > 0");
    if (!(opts.saturation >= 0.0)) throw ConfigError("saturation must be >= 0");
}

AbPlanes predict_ab(const LightnessPlane& lightness, const Network& network, const ColorBinGrid* grid,
                    const ColorizeOptions& opts) {
    validate(opts);
    const NetConfig& cfg = network.config();
    if (cfg.head == HeadKind::Classification && (!grid || grid->size() != cfg.num_bins))
        throw ConfigError("classification network needs its bin grid to decode predictions");

    const int size = cfg.input_size;
    const auto resized = resize_bilinear(lightness.values, lightness.width, lightness.height, size, size);
    nn::Tensor input(nn::Shape{1, 1, size, size});
    for (std::size_t i = 0; i < resized.size(); ++i)
        input[i] = static_cast<float>(normalize(PlaneKind::Lightness, Direction::ToNet, resized[i]));
    const nn::Tensor out = network.infer(input);

    const int out_size = network.output_size();
    const std::size_t plane = static_cast<std::size_t>(out_size) * out_size;
    AbPlanes ab(out_size, out_size);
    if (cfg.head == HeadKind::Regression) {
        for (std::size_t p = 0; p < plane; ++p) {
            ab.a[p] = normalize(PlaneKind::Chroma, Direction::FromNet, out[p]);
            ab.b[p] = normalize(PlaneKind::Chroma, Direction::FromNet, out[plane + p]);
        }
        return ab;
    }
    const nn::Tensor probs = nn::softmax(out);
    const int q = cfg.num_bins;
    std::vector<double> dist(q);
    for (std::size_t p = 0; p < plane; ++p) {
        for (int k = 0; k < q; ++k) dist[k] = probs[k * plane + p];
        const AbPoint v = decode_distribution(std::span<const double>(dist), *grid, opts.decode, opts.temperature);
        ab.a[p] = v.a;
        ab.b[p] = v.b;
    }
    return ab;
}

Rgb8Image colorize(const Rgb8Image& img, const Network& network, const ColorBinGrid* grid,
                   const ColorizeOptions& opts) {
    if (img.width < 1 || img.height < 1 || img.data.size() != img.pixel_count() * 3)
        throw InputError("cannot colorize an empty image");
    auto [lightness, original_ab] = split_channels(rgb_to_lab(img));
    const AbPlanes low = predict_ab(lightness, network, grid, opts);

    AbPlanes ab;
    ab.width = img.width;
    ab.height = img.height;
    ab.a = resize_bilinear(low.a, low.width, low.height, img.width, img.height);
    ab.b = resize_bilinear(low.b, low.width, low.height, img.width, img.height);
    for (std::size_t i = 0; i < ab.a.size(); ++i) {
        ab.a[i] *= opts.saturation;
        ab.b[i] *= opts.saturation;
        if (opts.fit_gamut) {
            const double s = gamut_chroma_scale({lightness.values[i], ab.a[i], ab.b[i]});
            ab.a[i] *= s;
            ab.b[i] *= s;
        }
    }
    return lab_to_rgb(merge_channels(lightness, ab));
}

}  // namespace colorizer
