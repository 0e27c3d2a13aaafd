#include "colorizer/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "colorizer/nn/ops.hpp"

namespace colorizer::nn {

GradCheckResult grad_check(const std::function<double()>& objective, std::vector<GradProbe>& probes, double eps) {
    GradCheckResult result;
    for (auto& probe : probes) {
        TensorD& x = *probe.point;
        if (probe.analytic.size() != x.size())
            throw DimensionError("grad_check: probe '" + probe.name + "' analytic gradient has wrong length");
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double saved = x[i];
            x[i] = saved + eps;
            const double up = objective();
            x[i] = saved - eps;
            const double down = objective();
            x[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double analytic = probe.analytic[i];
            const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            const double err = std::abs(analytic - numeric) / denom;
            if (err >= result.max_relative_error) {
                result.max_relative_error = err;
                result.worst_probe = probe.name;
                result.worst_index = i;
                result.worst_analytic = analytic;
                result.worst_numeric = numeric;
            }
        }
    }
    return result;
}

namespace {

class Generator {
public:
    explicit Generator(std::uint64_t seed) : rng_(seed) {}

    TensorD uniform(Shape s, double lo, double hi) {
        std::uniform_real_distribution<double> dist(lo, hi);
        TensorD t(s);
        for (auto& v : t.values()) v = dist(rng_);
        return t;
    }

    // Entries with magnitude in [min_abs, max_abs] and random sign.
    TensorD away_from_zero(Shape s, double min_abs, double max_abs) {
        std::uniform_real_distribution<double> mag(min_abs, max_abs);
        std::bernoulli_distribution sign(0.5);
        TensorD t(s);
        for (auto& v : t.values()) v = sign(rng_) ? mag(rng_) : -mag(rng_);
        return t;
    }

private:
    std::mt19937_64 rng_;
};

double weighted_sum(const TensorD& out, const TensorD& weights) {
    double s = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) s += out[i] * weights[i];
    return s;
}

std::vector<double> as_vector(const TensorD& t) { return {t.values().begin(), t.values().end()}; }

GradCheckResult check_conv(Generator& gen, int stride, int pad, int dilation, double eps) {
    const ConvGeometry g{stride, pad, dilation};
    TensorD x = gen.uniform({2, 3, 7, 6}, -1.0, 1.0);
    TensorD w = gen.uniform({4, 3, 3, 3}, -1.0, 1.0);
    TensorD b = gen.uniform({1, 4, 1, 1}, -1.0, 1.0);
    const TensorD probe_out = conv2d_forward(x, w, b, g);
    const TensorD r = gen.uniform(probe_out.shape(), -1.0, 1.0);
    const auto grads = conv2d_backward(x, w, r, g);
    std::vector<GradProbe> probes{{"input", &x, as_vector(grads.input)},
                                  {"weight", &w, as_vector(grads.weight)},
                                  {"bias", &b, as_vector(grads.bias)}};
    return grad_check([&] { return weighted_sum(conv2d_forward(x, w, b, g), r); }, probes, eps);
}

}  // namespace

std::vector<GradCheckEntry> run_gradcheck_suite(std::uint64_t seed, double eps) {
    Generator gen(seed);
    std::vector<GradCheckEntry> entries;

    for (int stride : {1, 2})
        for (int pad : {0, 1, 2})
            for (int dilation : {1, 2})
                entries.push_back({"conv2d stride=" + std::to_string(stride) + " pad=" + std::to_string(pad) +
                                       " dilation=" + std::to_string(dilation),
                                   check_conv(gen, stride, pad, dilation, eps)});

    {
        // Inputs kept at least 10*eps away from the kink.
        TensorD x = gen.away_from_zero({2, 3, 4, 4}, 10.0 * eps, 1.0);
        const TensorD r = gen.uniform(x.shape(), -1.0, 1.0);
        std::vector<GradProbe> probes{{"input", &x, as_vector(relu_backward(x, r))}};
        entries.push_back({"relu", grad_check([&] { return weighted_sum(relu_forward(x), r); }, probes, eps)});
    }
    {
        TensorD x = gen.uniform({2, 3, 4, 4}, -2.0, 2.0);
        const TensorD r = gen.uniform(x.shape(), -1.0, 1.0);
        std::vector<GradProbe> probes{{"input", &x, as_vector(tanh_backward(tanh_forward(x), r))}};
        entries.push_back({"tanh", grad_check([&] { return weighted_sum(tanh_forward(x), r); }, probes, eps)});
    }
    for (Mode mode : {Mode::Train, Mode::Eval}) {
        TensorD x = gen.uniform({2, 3, 4, 4}, -2.0, 2.0);
        TensorD gamma = gen.uniform({1, 3, 1, 1}, 0.5, 1.5);
        TensorD beta = gen.uniform({1, 3, 1, 1}, -0.5, 0.5);
        const TensorD mean0 = gen.uniform({1, 3, 1, 1}, -0.5, 0.5);
        const TensorD var0 = gen.uniform({1, 3, 1, 1}, 0.5, 1.5);
        const BatchNormOptions opts;
        auto forward = [&](BatchNormCache<double>* cache) {
            TensorD mean = mean0;
            TensorD var = var0;
            return batchnorm_forward(x, gamma, beta, mean, var, opts, mode, cache);
        };
        BatchNormCache<double> cache;
        const TensorD out = forward(&cache);
        const TensorD r = gen.uniform(out.shape(), -1.0, 1.0);
        const auto grads = batchnorm_backward(cache, gamma, r);
        std::vector<GradProbe> probes{{"input", &x, as_vector(grads.input)},
                                      {"gamma", &gamma, as_vector(grads.gamma)},
                                      {"beta", &beta, as_vector(grads.beta)}};
        entries.push_back({mode == Mode::Train ? "batchnorm train" : "batchnorm eval",
                           grad_check([&] { return weighted_sum(forward(nullptr), r); }, probes, eps)});
    }
    for (UpsampleMode mode : {UpsampleMode::Nearest, UpsampleMode::Bilinear}) {
        TensorD x = gen.uniform({2, 2, 3, 4}, -1.0, 1.0);
        constexpr int factor = 2;
        const TensorD r = gen.uniform({2, 2, 6, 8}, -1.0, 1.0);
        std::vector<GradProbe> probes{{"input", &x, as_vector(upsample_backward(r, x.shape(), factor, mode))}};
        entries.push_back({mode == UpsampleMode::Nearest ? "upsample nearest x2" : "upsample bilinear x2",
                           grad_check([&] { return weighted_sum(upsample_forward(x, factor, mode), r); }, probes,
                                      eps)});
    }
    {
        TensorD pred = gen.uniform({2, 2, 3, 3}, -1.0, 1.0);
        const TensorD target = gen.uniform(pred.shape(), -1.0, 1.0);
        std::vector<GradProbe> probes{{"pred", &pred, as_vector(euclidean_loss(pred, target).grad)}};
        entries.push_back(
            {"euclidean_loss", grad_check([&] { return euclidean_loss(pred, target).loss; }, probes, eps)});
    }
    {
        TensorD logits = gen.uniform({2, 5, 3, 3}, -2.0, 2.0);
        TensorD target = gen.uniform(logits.shape(), 0.0, 1.0);
        const Shape& s = target.shape();
        for (int n = 0; n < s.n; ++n)
            for (int p = 0; p < s.h * s.w; ++p) {
                double sum = 0.0;
                for (int q = 0; q < s.c; ++q) sum += target.at(n, q, p / s.w, p % s.w);
                for (int q = 0; q < s.c; ++q) target.at(n, q, p / s.w, p % s.w) /= sum;
            }
        std::vector<GradProbe> probes{{"logits", &logits, as_vector(softmax_cross_entropy(logits, target).grad)}};
        entries.push_back({"softmax_cross_entropy",
                           grad_check([&] { return softmax_cross_entropy(logits, target).loss; }, probes, eps)});
    }
    return entries;
}

}  // namespace colorizer::nn
