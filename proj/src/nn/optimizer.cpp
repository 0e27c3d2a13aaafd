#include "colorizer/nn/optimizer.hpp"

#include <cmath>

namespace colorizer::nn {

Optimizer::Optimizer(OptimConfig config) : config_(config) {
    if (!(config_.lr > 0.0)) throw ConfigError("learning rate must be > 0, got " + std::to_string(config_.lr));
    if (config_.momentum < 0.0 || config_.momentum >= 1.0) throw ConfigError("momentum must be in [0, 1)");
    if (config_.beta1 < 0.0 || config_.beta1 >= 1.0 || config_.beta2 < 0.0 || config_.beta2 >= 1.0)
        throw ConfigError("Adam betas must be in [0, 1)");
    if (!(config_.eps > 0.0)) throw ConfigError("Adam eps must be > 0");
}

void Optimizer::step(const std::vector<ParamRef>& params) {
    ++state_.step;
    const double t = static_cast<double>(state_.step);
    const double correction1 = 1.0 - std::pow(config_.beta1, t);
    const double correction2 = 1.0 - std::pow(config_.beta2, t);
    for (const auto& p : params) {
        Tensor& w = *p.tensor;
        const auto g = w.grad();
        auto& moments = state_.buffers[p.name];
        if (moments.first.size() != w.size()) moments.first.assign(w.size(), 0.0f);
        if (config_.kind == OptimizerKind::Sgd) {
            for (std::size_t i = 0; i < w.size(); ++i) {
                moments.first[i] = static_cast<float>(config_.momentum * moments.first[i] + g[i]);
                w[i] = static_cast<float>(w[i] - config_.lr * moments.first[i]);
            }
            continue;
        }
        if (moments.second.size() != w.size()) moments.second.assign(w.size(), 0.0f);
        for (std::size_t i = 0; i < w.size(); ++i) {
            const double gi = g[i];
            const double m = config_.beta1 * moments.first[i] + (1.0 - config_.beta1) * gi;
            const double v = config_.beta2 * moments.second[i] + (1.0 - config_.beta2) * gi * gi;
            moments.first[i] = static_cast<float>(m);
            moments.second[i] = static_cast<float>(v);
            const double update = config_.lr * (m / correction1) / (std::sqrt(v / correction2) + config_.eps);
            w[i] = static_cast<float>(w[i] - update);
        }
    }
}

}  // namespace colorizer::nn
