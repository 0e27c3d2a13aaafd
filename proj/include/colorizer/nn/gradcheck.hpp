#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "colorizer/nn/tensor.hpp"

namespace colorizer::nn {

// A tensor to perturb and the analytic gradient of the objective with respect to it.
struct GradProbe {
    std::string name;
    TensorD* point = nullptr;
    std::vector<double> analytic;
};

struct GradCheckResult {
    double max_relative_error = 0.0;
    std::string worst_probe;
    std::size_t worst_index = 0;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
};

// Central differences (f(x+eps) - f(x-eps)) / 2eps over every entry of every probe.
// Error per entry: |analytic - numeric| / max(|analytic|, |numeric|, 1e-8).
GradCheckResult grad_check(const std::function<double()>& objective, std::vector<GradProbe>& probes,
                           double eps = 1e-3);

struct GradCheckEntry {
    std::string name;
    GradCheckResult result;
};

// Checks every layer kernel and loss (conv2d over stride {1,2} x pad {0,1,2} x dilation {1,2},
// ReLU, tanh, train/eval batchnorm, both upsample modes, both losses) at seeded random points.
std::vector<GradCheckEntry> run_gradcheck_suite(std::uint64_t seed = 7, double eps = 1e-3);

}  // namespace colorizer::nn
