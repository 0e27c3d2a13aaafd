#pragma once

#include <map>
#include <string>
#include <vector>

#include "colorizer/nn/tensor.hpp"

namespace colorizer::nn {

enum class OptimizerKind { Sgd, Adam };

struct OptimConfig {
    OptimizerKind kind = OptimizerKind::Adam;
    double lr = 3e-4;
    double momentum = 0.0;  // SGD only
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// A trainable tensor; its gradient lives in the tensor's grad buffer.
struct ParamRef {
    std::string name;
    Tensor* tensor = nullptr;
};

struct OptimState {
    struct Moments {
        std::vector<float> first;   // SGD velocity or Adam m
        std::vector<float> second;  // Adam v
    };
    std::map<std::string, Moments> buffers;
    long long step = 0;
};

class Optimizer {
public:
    // Throws ConfigError when lr <= 0 or the betas/eps are out of range.
    explicit Optimizer(OptimConfig config);

    // SGD: v <- mu*v + g; w <- w - lr*v.  Adam: bias-corrected first/second moments.
    void step(const std::vector<ParamRef>& params);

    const OptimConfig& config() const { return config_; }
    const OptimState& state() const { return state_; }

private:
    OptimConfig config_;
    OptimState state_;
};

}  // namespace colorizer::nn
