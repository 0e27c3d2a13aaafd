#include "colorizer/nn/layers.hpp"

namespace colorizer::nn {

namespace {

void accumulate(Tensor& param, const Tensor& grad) {
    auto g = param.grad();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += grad[i];
}

}  // namespace

Conv2dLayer::Conv2dLayer(std::string name, int in_channels, int out_channels, int kernel, ConvGeometry geometry)
    : name_(std::move(name)),
      geometry_(geometry),
      weight_(Shape{out_channels, in_channels, kernel, kernel}),
      bias_(Shape{1, out_channels, 1, 1}) {}

Tensor Conv2dLayer::forward(const Tensor& input, Mode mode) {
    if (mode == Mode::Train) input_ = input;
    return conv2d_forward(input, weight_, bias_, geometry_);
}

Tensor Conv2dLayer::infer(const Tensor& input) const { return conv2d_forward(input, weight_, bias_, geometry_); }

Tensor Conv2dLayer::backward(const Tensor& grad_output) {
    auto grads = conv2d_backward(input_, weight_, grad_output, geometry_);
    accumulate(weight_, grads.weight);
    accumulate(bias_, grads.bias);
    return std::move(grads.input);
}

void Conv2dLayer::tensors(std::vector<NamedTensor>& out) {
    out.push_back({name_ + ".weight", &weight_, true});
    out.push_back({name_ + ".bias", &bias_, true});
}

std::string Conv2dLayer::describe() const {
    const Shape& w = weight_.shape();
    return name_ + ": conv " + std::to_string(w.h) + "x" + std::to_string(w.w) + " " + std::to_string(w.c) + "->" +
           std::to_string(w.n) + " stride " + std::to_string(geometry_.stride) + " pad " +
           std::to_string(geometry_.pad) + " dilation " + std::to_string(geometry_.dilation);
}

BatchNormLayer::BatchNormLayer(std::string name, int channels, BatchNormOptions opts)
    : name_(std::move(name)),
      opts_(opts),
      gamma_(Shape{1, channels, 1, 1}, 1.0f),
      beta_(Shape{1, channels, 1, 1}, 0.0f),
      running_mean_(Shape{1, channels, 1, 1}, 0.0f),
      running_var_(Shape{1, channels, 1, 1}, 1.0f) {}

Tensor BatchNormLayer::forward(const Tensor& input, Mode mode) {
    return batchnorm_forward(input, gamma_, beta_, running_mean_, running_var_, opts_, mode,
                             mode == Mode::Train ? &cache_ : nullptr);
}

Tensor BatchNormLayer::infer(const Tensor& input) const {
    Tensor mean = running_mean_;
    Tensor var = running_var_;
    return batchnorm_forward(input, gamma_, beta_, mean, var, opts_, Mode::Eval);
}

Tensor BatchNormLayer::backward(const Tensor& grad_output) {
    auto grads = batchnorm_backward(cache_, gamma_, grad_output);
    accumulate(gamma_, grads.gamma);
    accumulate(beta_, grads.beta);
    return std::move(grads.input);
}

void BatchNormLayer::tensors(std::vector<NamedTensor>& out) {
    out.push_back({name_ + ".gamma", &gamma_, true});
    out.push_back({name_ + ".beta", &beta_, true});
    out.push_back({name_ + ".running_mean", &running_mean_, false});
    out.push_back({name_ + ".running_var", &running_var_, false});
}

std::string BatchNormLayer::describe() const {
    return name_ + ": batchnorm " + std::to_string(gamma_.shape().c) + " channels";
}

Tensor ReluLayer::forward(const Tensor& input, Mode mode) {
    if (mode == Mode::Train) input_ = input;
    return relu_forward(input);
}

Tensor ReluLayer::infer(const Tensor& input) const { return relu_forward(input); }

Tensor ReluLayer::backward(const Tensor& grad_output) { return relu_backward(input_, grad_output); }

Tensor TanhLayer::forward(const Tensor& input, Mode mode) {
    Tensor out = tanh_forward(input);
    if (mode == Mode::Train) output_ = out;
    return out;
}

Tensor TanhLayer::infer(const Tensor& input) const { return tanh_forward(input); }

Tensor TanhLayer::backward(const Tensor& grad_output) { return tanh_backward(output_, grad_output); }

Tensor UpsampleLayer::forward(const Tensor& input, Mode mode) {
    if (mode == Mode::Train) input_shape_ = input.shape();
    return upsample_forward(input, factor_, mode_);
}

Tensor UpsampleLayer::infer(const Tensor& input) const { return upsample_forward(input, factor_, mode_); }

Tensor UpsampleLayer::backward(const Tensor& grad_output) {
    return upsample_backward(grad_output, input_shape_, factor_, mode_);
}

std::string UpsampleLayer::describe() const {
    return std::string("upsample ") + (mode_ == UpsampleMode::Nearest ? "nearest" : "bilinear") + " x" +
           std::to_string(factor_);
}

}  // namespace colorizer::nn
