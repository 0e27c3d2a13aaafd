#pragma once

#include <vector>

#include "colorizer/nn/tensor.hpp"

namespace colorizer::nn {

enum class Mode { Train, Eval };

struct ConvGeometry {
    int stride = 1;
    int pad = 0;
    int dilation = 1;
};

// floor((in + 2*pad - dilation*(k-1) - 1) / stride) + 1; throws DimensionError when < 1.
int conv_output_size(int in, int kernel, const ConvGeometry& g, const char* axis = "spatial");

// Cross-correlation. weight is [out_ch, in_ch, k, k], bias is [1, out_ch, 1, 1].
template <typename T>
BasicTensor<T> conv2d_forward(const BasicTensor<T>& input, const BasicTensor<T>& weight, const BasicTensor<T>& bias,
                              const ConvGeometry& g);

template <typename T>
struct Conv2dGrads {
    BasicTensor<T> input;
    BasicTensor<T> weight;
    BasicTensor<T> bias;
};

template <typename T>
Conv2dGrads<T> conv2d_backward(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                               const BasicTensor<T>& grad_output, const ConvGeometry& g);

template <typename T>
BasicTensor<T> relu_forward(const BasicTensor<T>& input);
// Passes the gradient where input > 0 (zero at exactly 0).
template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input, const BasicTensor<T>& grad_output);

template <typename T>
BasicTensor<T> tanh_forward(const BasicTensor<T>& input);
template <typename T>
BasicTensor<T> tanh_backward(const BasicTensor<T>& output, const BasicTensor<T>& grad_output);

enum class UpsampleMode { Nearest, Bilinear };

// Bilinear sampling is half-pixel centered with edge clamping.
template <typename T>
BasicTensor<T> upsample_forward(const BasicTensor<T>& input, int factor, UpsampleMode mode);
template <typename T>
BasicTensor<T> upsample_backward(const BasicTensor<T>& grad_output, const Shape& input_shape, int factor,
                                 UpsampleMode mode);

struct BatchNormOptions {
    double eps = 1e-5;
    double momentum = 0.1;
};

template <typename T>
struct BatchNormCache {
    Mode mode = Mode::Train;
    BasicTensor<T> normalized;
    std::vector<double> inv_std;
};

// gamma, beta, running_mean, running_var are [1, C, 1, 1]. Train mode normalizes with batch
// statistics over N,H,W and blends them into the running stats (unbiased variance).
template <typename T>
BasicTensor<T> batchnorm_forward(const BasicTensor<T>& input, const BasicTensor<T>& gamma, const BasicTensor<T>& beta,
                                 BasicTensor<T>& running_mean, BasicTensor<T>& running_var,
                                 const BatchNormOptions& opts, Mode mode, BatchNormCache<T>* cache = nullptr);

template <typename T>
struct BatchNormGrads {
    BasicTensor<T> input;
    BasicTensor<T> gamma;
    BasicTensor<T> beta;
};

template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormCache<T>& cache, const BasicTensor<T>& gamma,
                                     const BasicTensor<T>& grad_output);

template <typename T>
struct LossResult {
    double loss = 0.0;
    BasicTensor<T> grad;
};

// (1/N) * sum over batch of 1/2 * sum_{h,w} ||target - pred||^2; gradient (pred - target)/N.
template <typename T>
LossResult<T> euclidean_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target);

// Per-pixel cross entropy against a dense target distribution over the channel axis, averaged
// over pixels and batch. Throws InvalidTargetError when a target sum is off by more than 1e-4.
template <typename T>
LossResult<T> softmax_cross_entropy(const BasicTensor<T>& logits, const BasicTensor<T>& target);

// Softmax over the channel axis.
template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits);

}  // namespace colorizer::nn
