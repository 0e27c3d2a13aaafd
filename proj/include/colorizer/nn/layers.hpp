#pragma once

#include <memory>
#include <string>
#include <vector>

#include "colorizer/nn/ops.hpp"
#include "colorizer/nn/optimizer.hpp"

namespace colorizer::nn {

// A tensor owned by a layer, visible to checkpoints. Buffers (BN running stats) are not trained.
struct NamedTensor {
    std::string name;
    Tensor* tensor = nullptr;
    bool trainable = true;
};

// Stateful single-precision layer: forward caches what backward needs; backward accumulates
// parameter gradients into each parameter's grad buffer and returns the input gradient.
class Layer {
public:
    virtual ~Layer() = default;

    virtual Tensor forward(const Tensor& input, Mode mode) = 0;
    // Eval-mode forward without touching layer state.
    virtual Tensor infer(const Tensor& input) const = 0;
    virtual Tensor backward(const Tensor& grad_output) = 0;
    virtual void tensors(std::vector<NamedTensor>& out) { (void)out; }
    virtual std::string describe() const = 0;
};

class Conv2dLayer : public Layer {
public:
    Conv2dLayer(std::string name, int in_channels, int out_channels, int kernel, ConvGeometry geometry);

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor infer(const Tensor& input) const override;
    Tensor backward(const Tensor& grad_output) override;
    void tensors(std::vector<NamedTensor>& out) override;
    std::string describe() const override;

    Tensor& weight() { return weight_; }
    Tensor& bias() { return bias_; }
    const ConvGeometry& geometry() const { return geometry_; }

private:
    std::string name_;
    ConvGeometry geometry_;
    Tensor weight_;
    Tensor bias_;
    Tensor input_;
};

class BatchNormLayer : public Layer {
public:
    BatchNormLayer(std::string name, int channels, BatchNormOptions opts = {});

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor infer(const Tensor& input) const override;
    Tensor backward(const Tensor& grad_output) override;
    void tensors(std::vector<NamedTensor>& out) override;
    std::string describe() const override;

    Tensor& gamma() { return gamma_; }
    Tensor& beta() { return beta_; }

private:
    std::string name_;
    BatchNormOptions opts_;
    Tensor gamma_;
    Tensor beta_;
    Tensor running_mean_;
    Tensor running_var_;
    BatchNormCache<float> cache_;
};

class ReluLayer : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor infer(const Tensor& input) const override;
    Tensor backward(const Tensor& grad_output) override;
    std::string describe() const override { return "relu"; }

private:
    Tensor input_;
};

class TanhLayer : public Layer {
public:
    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor infer(const Tensor& input) const override;
    Tensor backward(const Tensor& grad_output) override;
    std::string describe() const override { return "tanh"; }

private:
    Tensor output_;
};

class UpsampleLayer : public Layer {
public:
    UpsampleLayer(int factor, UpsampleMode mode) : factor_(factor), mode_(mode) {}

    Tensor forward(const Tensor& input, Mode mode) override;
    Tensor infer(const Tensor& input) const override;
    Tensor backward(const Tensor& grad_output) override;
    std::string describe() const override;

private:
    int factor_;
    UpsampleMode mode_;
    Shape input_shape_;
};

}  // namespace colorizer::nn
