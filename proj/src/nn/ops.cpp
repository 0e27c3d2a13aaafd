#include "colorizer/nn/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "colorizer/parallel.hpp"

namespace colorizer::nn {

namespace {

// C[M][N] += A(m,k) * B[K][N], with A addressed as a[m*a_row + k*a_col]. Every output element
// accumulates over k in ascending order regardless of blocking or threading.
template <typename T>
void gemm_accumulate(int M, int N, int K, const T* a, std::size_t a_row, std::size_t a_col, const T* b,
                     std::size_t ldb, T* c, std::size_t ldc) {
    constexpr int kRowBlock = 8;
    constexpr int kColBlock = 256;
    const std::size_t row_blocks = (M + kRowBlock - 1) / kRowBlock;
    const auto work = static_cast<std::size_t>(M) * N * K;
    parallel_for(
        row_blocks,
        [&](std::size_t rb_begin, std::size_t rb_end) {
            for (int n0 = 0; n0 < N; n0 += kColBlock) {
                const int nb = std::min(kColBlock, N - n0);
                for (std::size_t rb = rb_begin; rb < rb_end; ++rb) {
                    const int m0 = static_cast<int>(rb) * kRowBlock;
                    const int m1 = std::min(M, m0 + kRowBlock);
                    for (int k = 0; k < K; ++k) {
                        const T* brow = b + static_cast<std::size_t>(k) * ldb + n0;
                        for (int m = m0; m < m1; ++m) {
                            const T av = a[m * a_row + k * a_col];
                            T* crow = c + static_cast<std::size_t>(m) * ldc + n0;
                            for (int j = 0; j < nb; ++j) crow[j] += av * brow[j];
                        }
                    }
                }
            }
        },
        work > (1u << 20) ? 1 : row_blocks);
}

struct ConvDims {
    int n, in_c, in_h, in_w, out_c, k, out_h, out_w;
    int patch() const { return in_c * k * k; }
    int pixels() const { return out_h * out_w; }
};

template <typename T>
ConvDims conv_dims(const BasicTensor<T>& input, const BasicTensor<T>& weight, const ConvGeometry& g) {
    const Shape& x = input.shape();
    const Shape& w = weight.shape();
    if (w.h != w.w) throw DimensionError("conv2d: kernel must be square, got " + w.str());
    if (w.c != x.c)
        throw DimensionError("conv2d: input channels " + std::to_string(x.c) + " do not match kernel in-channels " +
                             std::to_string(w.c));
    if (g.stride < 1 || g.dilation < 1 || g.pad < 0) throw DimensionError("conv2d: invalid stride/pad/dilation");
    ConvDims d{x.n, x.c, x.h, x.w, w.n, w.h, 0, 0};
    d.out_h = conv_output_size(x.h, w.h, g, "height");
    d.out_w = conv_output_size(x.w, w.w, g, "width");
    return d;
}

// col[(c*k + ky)*k + kx][oy*out_w + ox] = x[c][oy*s - p + ky*d][ox*s - p + kx*d] (zero outside).
template <typename T>
void im2col(const T* x, const ConvDims& d, const ConvGeometry& g, T* col) {
    const int P = d.pixels();
    for (int c = 0; c < d.in_c; ++c)
        for (int ky = 0; ky < d.k; ++ky)
            for (int kx = 0; kx < d.k; ++kx) {
                T* row = col + static_cast<std::size_t>((c * d.k + ky) * d.k + kx) * P;
                const T* plane = x + static_cast<std::size_t>(c) * d.in_h * d.in_w;
                for (int oy = 0; oy < d.out_h; ++oy) {
                    const int iy = oy * g.stride - g.pad + ky * g.dilation;
                    T* out = row + oy * d.out_w;
                    if (iy < 0 || iy >= d.in_h) {
                        std::fill(out, out + d.out_w, T{});
                        continue;
                    }
                    const T* src = plane + static_cast<std::size_t>(iy) * d.in_w;
                    for (int ox = 0; ox < d.out_w; ++ox) {
                        const int ix = ox * g.stride - g.pad + kx * g.dilation;
                        out[ox] = (ix >= 0 && ix < d.in_w) ? src[ix] : T{};
                    }
                }
            }
}

// Transposed layout: colT[pixel][patch].
template <typename T>
void im2col_transposed(const T* x, const ConvDims& d, const ConvGeometry& g, T* colT) {
    const int K = d.patch();
    for (int oy = 0; oy < d.out_h; ++oy)
        for (int ox = 0; ox < d.out_w; ++ox) {
            T* row = colT + static_cast<std::size_t>(oy * d.out_w + ox) * K;
            for (int c = 0; c < d.in_c; ++c) {
                const T* plane = x + static_cast<std::size_t>(c) * d.in_h * d.in_w;
                for (int ky = 0; ky < d.k; ++ky) {
                    const int iy = oy * g.stride - g.pad + ky * g.dilation;
                    for (int kx = 0; kx < d.k; ++kx) {
                        const int ix = ox * g.stride - g.pad + kx * g.dilation;
                        const bool inside = iy >= 0 && iy < d.in_h && ix >= 0 && ix < d.in_w;
                        *row++ = inside ? plane[static_cast<std::size_t>(iy) * d.in_w + ix] : T{};
                    }
                }
            }
        }
}

template <typename T>
void col2im_accumulate(const T* col, const ConvDims& d, const ConvGeometry& g, T* dx) {
    const int P = d.pixels();
    for (int c = 0; c < d.in_c; ++c)
        for (int ky = 0; ky < d.k; ++ky)
            for (int kx = 0; kx < d.k; ++kx) {
                const T* row = col + static_cast<std::size_t>((c * d.k + ky) * d.k + kx) * P;
                T* plane = dx + static_cast<std::size_t>(c) * d.in_h * d.in_w;
                for (int oy = 0; oy < d.out_h; ++oy) {
                    const int iy = oy * g.stride - g.pad + ky * g.dilation;
                    if (iy < 0 || iy >= d.in_h) continue;
                    T* dst = plane + static_cast<std::size_t>(iy) * d.in_w;
                    for (int ox = 0; ox < d.out_w; ++ox) {
                        const int ix = ox * g.stride - g.pad + kx * g.dilation;
                        if (ix >= 0 && ix < d.in_w) dst[ix] += row[oy * d.out_w + ox];
                    }
                }
            }
}

struct BilinearTap {
    int i0, i1;
    double w0, w1;
};

BilinearTap bilinear_tap(int dst, int factor, int in_size) {
    double src = (dst + 0.5) / factor - 0.5;
    if (src < 0.0) src = 0.0;
    int i0 = static_cast<int>(std::floor(src));
    if (i0 > in_size - 1) i0 = in_size - 1;
    const int i1 = std::min(i0 + 1, in_size - 1);
    const double frac = std::min(1.0, src - i0);
    return {i0, i1, 1.0 - frac, frac};
}

}  // namespace

int conv_output_size(int in, int kernel, const ConvGeometry& g, const char* axis) {
    const int span = in + 2 * g.pad - g.dilation * (kernel - 1) - 1;
    if (span < 0)
        throw DimensionError(std::string("conv2d: input ") + axis + " " + std::to_string(in) +
                             " too small for kernel " + std::to_string(kernel) + " with dilation " +
                             std::to_string(g.dilation) + " and pad " + std::to_string(g.pad));
    return span / g.stride + 1;
}

template <typename T>
BasicTensor<T> conv2d_forward(const BasicTensor<T>& input, const BasicTensor<T>& weight, const BasicTensor<T>& bias,
                              const ConvGeometry& g) {
    const ConvDims d = conv_dims(input, weight, g);
    if (bias.size() != static_cast<std::size_t>(d.out_c))
        throw DimensionError("conv2d: bias has " + std::to_string(bias.size()) + " entries, expected " +
                             std::to_string(d.out_c));
    BasicTensor<T> out(Shape{d.n, d.out_c, d.out_h, d.out_w});
    const int K = d.patch();
    const int P = d.pixels();
    std::vector<T> col(static_cast<std::size_t>(K) * P);
    const std::size_t in_stride = static_cast<std::size_t>(d.in_c) * d.in_h * d.in_w;
    const std::size_t out_stride = static_cast<std::size_t>(d.out_c) * P;
    for (int n = 0; n < d.n; ++n) {
        im2col(input.data() + n * in_stride, d, g, col.data());
        T* y = out.data() + n * out_stride;
        for (int co = 0; co < d.out_c; ++co) std::fill(y + co * P, y + (co + 1) * P, bias[co]);
        gemm_accumulate(d.out_c, P, K, weight.data(), K, 1, col.data(), P, y, P);
    }
    return out;
}

template <typename T>
Conv2dGrads<T> conv2d_backward(const BasicTensor<T>& input, const BasicTensor<T>& weight,
                               const BasicTensor<T>& grad_output, const ConvGeometry& g) {
    const ConvDims d = conv_dims(input, weight, g);
    const Shape expected{d.n, d.out_c, d.out_h, d.out_w};
    if (!(grad_output.shape() == expected))
        throw DimensionError("conv2d backward: output gradient " + grad_output.shape().str() + " expected " +
                             expected.str());
    Conv2dGrads<T> grads{BasicTensor<T>(input.shape()), BasicTensor<T>(weight.shape()),
                         BasicTensor<T>(Shape{1, d.out_c, 1, 1})};
    const int K = d.patch();
    const int P = d.pixels();
    std::vector<T> buffer(static_cast<std::size_t>(K) * P);
    const std::size_t in_stride = static_cast<std::size_t>(d.in_c) * d.in_h * d.in_w;
    const std::size_t out_stride = static_cast<std::size_t>(d.out_c) * P;
    for (int n = 0; n < d.n; ++n) {
        const T* dy = grad_output.data() + n * out_stride;
        for (int co = 0; co < d.out_c; ++co) {
            T acc{};
            for (int p = 0; p < P; ++p) acc += dy[co * P + p];
            grads.bias[co] += acc;
        }
        // dW[co][kk] += sum_p dy[co][p] * colT[p][kk]
        im2col_transposed(input.data() + n * in_stride, d, g, buffer.data());
        gemm_accumulate(d.out_c, K, P, dy, P, 1, buffer.data(), K, grads.weight.data(), K);
        // dcol[kk][p] = sum_co W[co][kk] * dy[co][p]
        std::fill(buffer.begin(), buffer.end(), T{});
        gemm_accumulate(K, P, d.out_c, weight.data(), 1, K, dy, P, buffer.data(), P);
        col2im_accumulate(buffer.data(), d, g, grads.input.data() + n * in_stride);
    }
    return grads;
}

template <typename T>
BasicTensor<T> relu_forward(const BasicTensor<T>& input) {
    BasicTensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > T{} ? input[i] : T{};
    return out;
}

template <typename T>
BasicTensor<T> relu_backward(const BasicTensor<T>& input, const BasicTensor<T>& grad_output) {
    require_same_shape(input, grad_output, "relu backward");
    BasicTensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = input[i] > T{} ? grad_output[i] : T{};
    return out;
}

template <typename T>
BasicTensor<T> tanh_forward(const BasicTensor<T>& input) {
    BasicTensor<T> out(input.shape());
    for (std::size_t i = 0; i < input.size(); ++i) out[i] = std::tanh(input[i]);
    return out;
}

template <typename T>
BasicTensor<T> tanh_backward(const BasicTensor<T>& output, const BasicTensor<T>& grad_output) {
    require_same_shape(output, grad_output, "tanh backward");
    BasicTensor<T> out(output.shape());
    for (std::size_t i = 0; i < output.size(); ++i) out[i] = grad_output[i] * (T{1} - output[i] * output[i]);
    return out;
}

template <typename T>
BasicTensor<T> upsample_forward(const BasicTensor<T>& input, int factor, UpsampleMode mode) {
    if (factor < 1) throw DimensionError("upsample: factor must be >= 1");
    const Shape& s = input.shape();
    BasicTensor<T> out(Shape{s.n, s.c, s.h * factor, s.w * factor});
    const int oh = s.h * factor;
    const int ow = s.w * factor;
    if (mode == UpsampleMode::Nearest) {
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c)
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) out.at(n, c, y, x) = input.at(n, c, y / factor, x / factor);
        return out;
    }
    std::vector<BilinearTap> ty(oh), tx(ow);
    for (int y = 0; y < oh; ++y) ty[y] = bilinear_tap(y, factor, s.h);
    for (int x = 0; x < ow; ++x) tx[x] = bilinear_tap(x, factor, s.w);
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int y = 0; y < oh; ++y)
                for (int x = 0; x < ow; ++x) {
                    const auto& a = ty[y];
                    const auto& b = tx[x];
                    const double v =
                        a.w0 * (b.w0 * input.at(n, c, a.i0, b.i0) + b.w1 * input.at(n, c, a.i0, b.i1)) +
                        a.w1 * (b.w0 * input.at(n, c, a.i1, b.i0) + b.w1 * input.at(n, c, a.i1, b.i1));
                    out.at(n, c, y, x) = static_cast<T>(v);
                }
    return out;
}

template <typename T>
BasicTensor<T> upsample_backward(const BasicTensor<T>& grad_output, const Shape& input_shape, int factor,
                                 UpsampleMode mode) {
    if (factor < 1) throw DimensionError("upsample: factor must be >= 1");
    const Shape& s = input_shape;
    const Shape expected{s.n, s.c, s.h * factor, s.w * factor};
    if (!(grad_output.shape() == expected))
        throw DimensionError("upsample backward: gradient " + grad_output.shape().str() + " expected " + expected.str());
    BasicTensor<T> out(input_shape);
    const int oh = expected.h;
    const int ow = expected.w;
    if (mode == UpsampleMode::Nearest) {
        for (int n = 0; n < s.n; ++n)
            for (int c = 0; c < s.c; ++c)
                for (int y = 0; y < oh; ++y)
                    for (int x = 0; x < ow; ++x) out.at(n, c, y / factor, x / factor) += grad_output.at(n, c, y, x);
        return out;
    }
    std::vector<BilinearTap> ty(oh), tx(ow);
    for (int y = 0; y < oh; ++y) ty[y] = bilinear_tap(y, factor, s.h);
    for (int x = 0; x < ow; ++x) tx[x] = bilinear_tap(x, factor, s.w);
    for (int n = 0; n < s.n; ++n)
        for (int c = 0; c < s.c; ++c)
            for (int y = 0; y < oh; ++y)
                for (int x = 0; x < ow; ++x) {
                    const auto& a = ty[y];
                    const auto& b = tx[x];
                    const double g = grad_output.at(n, c, y, x);
                    out.at(n, c, a.i0, b.i0) += static_cast<T>(a.w0 * b.w0 * g);
                    out.at(n, c, a.i0, b.i1) += static_cast<T>(a.w0 * b.w1 * g);
                    out.at(n, c, a.i1, b.i0) += static_cast<T>(a.w1 * b.w0 * g);
                    out.at(n, c, a.i1, b.i1) += static_cast<T>(a.w1 * b.w1 * g);
                }
    return out;
}

template <typename T>
BasicTensor<T> batchnorm_forward(const BasicTensor<T>& input, const BasicTensor<T>& gamma, const BasicTensor<T>& beta,
                                 BasicTensor<T>& running_mean, BasicTensor<T>& running_var,
                                 const BatchNormOptions& opts, Mode mode, BatchNormCache<T>* cache) {
    const Shape& s = input.shape();
    const auto C = static_cast<std::size_t>(s.c);
    for (const BasicTensor<T>* p : {&gamma, &beta, static_cast<const BasicTensor<T>*>(&running_mean), static_cast<const BasicTensor<T>*>(&running_var)})
        if (p->size() != C)
            throw DimensionError("batchnorm: parameter has " + std::to_string(p->size()) + " entries, expected " +
                                 std::to_string(C));
    const std::size_t plane = s.plane();
    const std::size_t count = static_cast<std::size_t>(s.n) * plane;
    BasicTensor<T> out(s);
    BasicTensor<T> normalized(s);
    std::vector<double> inv_std(C);
    for (std::size_t c = 0; c < C; ++c) {
        double mean = 0.0;
        double var = 0.0;
        if (mode == Mode::Train) {
            for (int n = 0; n < s.n; ++n) {
                const T* x = input.data() + (n * C + c) * plane;
                for (std::size_t i = 0; i < plane; ++i) mean += x[i];
            }
            mean /= static_cast<double>(count);
            for (int n = 0; n < s.n; ++n) {
                const T* x = input.data() + (n * C + c) * plane;
                for (std::size_t i = 0; i < plane; ++i) {
                    const double dv = x[i] - mean;
                    var += dv * dv;
                }
            }
            var /= static_cast<double>(count);
            const double unbiased = count > 1 ? var * count / (count - 1) : var;
            running_mean[c] = static_cast<T>((1.0 - opts.momentum) * running_mean[c] + opts.momentum * mean);
            running_var[c] = static_cast<T>((1.0 - opts.momentum) * running_var[c] + opts.momentum * unbiased);
        } else {
            mean = running_mean[c];
            var = running_var[c];
        }
        const double istd = 1.0 / std::sqrt(var + opts.eps);
        inv_std[c] = istd;
        for (int n = 0; n < s.n; ++n) {
            const std::size_t base = (n * C + c) * plane;
            for (std::size_t i = 0; i < plane; ++i) {
                const double xhat = (input[base + i] - mean) * istd;
                normalized[base + i] = static_cast<T>(xhat);
                out[base + i] = static_cast<T>(gamma[c] * xhat + beta[c]);
            }
        }
    }
    if (cache) {
        cache->mode = mode;
        cache->normalized = std::move(normalized);
        cache->inv_std = std::move(inv_std);
    }
    return out;
}

template <typename T>
BatchNormGrads<T> batchnorm_backward(const BatchNormCache<T>& cache, const BasicTensor<T>& gamma,
                                     const BasicTensor<T>& grad_output) {
    require_same_shape(cache.normalized, grad_output, "batchnorm backward");
    const Shape& s = grad_output.shape();
    const auto C = static_cast<std::size_t>(s.c);
    const std::size_t plane = s.plane();
    const double m = static_cast<double>(s.n) * plane;
    BatchNormGrads<T> g{BasicTensor<T>(s), BasicTensor<T>(Shape{1, s.c, 1, 1}), BasicTensor<T>(Shape{1, s.c, 1, 1})};
    for (std::size_t c = 0; c < C; ++c) {
        double sum_dy = 0.0;
        double sum_dy_xhat = 0.0;
        for (int n = 0; n < s.n; ++n) {
            const std::size_t base = (n * C + c) * plane;
            for (std::size_t i = 0; i < plane; ++i) {
                sum_dy += grad_output[base + i];
                sum_dy_xhat += static_cast<double>(grad_output[base + i]) * cache.normalized[base + i];
            }
        }
        g.beta[c] = static_cast<T>(sum_dy);
        g.gamma[c] = static_cast<T>(sum_dy_xhat);
        const double scale = gamma[c] * cache.inv_std[c];
        for (int n = 0; n < s.n; ++n) {
            const std::size_t base = (n * C + c) * plane;
            for (std::size_t i = 0; i < plane; ++i) {
                const double dy = grad_output[base + i];
                if (cache.mode == Mode::Train) {
                    const double xhat = cache.normalized[base + i];
                    g.input[base + i] = static_cast<T>(scale * (dy - sum_dy / m - xhat * sum_dy_xhat / m));
                } else {
                    g.input[base + i] = static_cast<T>(scale * dy);
                }
            }
        }
    }
    return g;
}

template <typename T>
LossResult<T> euclidean_loss(const BasicTensor<T>& pred, const BasicTensor<T>& target) {
    require_same_shape(pred, target, "euclidean loss");
    const int N = std::max(pred.shape().n, 1);
    LossResult<T> r{0.0, BasicTensor<T>(pred.shape())};
    double sum = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = static_cast<double>(pred[i]) - target[i];
        sum += diff * diff;
        r.grad[i] = static_cast<T>(diff / N);
    }
    r.loss = 0.5 * sum / N;
    return r;
}

template <typename T>
BasicTensor<T> softmax(const BasicTensor<T>& logits) {
    const Shape& s = logits.shape();
    const std::size_t plane = s.plane();
    BasicTensor<T> out(s);
    for (int n = 0; n < s.n; ++n)
        for (std::size_t p = 0; p < plane; ++p) {
            const std::size_t base = static_cast<std::size_t>(n) * s.c * plane + p;
            double peak = -INFINITY;
            for (int q = 0; q < s.c; ++q) peak = std::max(peak, static_cast<double>(logits[base + q * plane]));
            double z = 0.0;
            for (int q = 0; q < s.c; ++q) z += std::exp(logits[base + q * plane] - peak);
            for (int q = 0; q < s.c; ++q)
                out[base + q * plane] = static_cast<T>(std::exp(logits[base + q * plane] - peak) / z);
        }
    return out;
}

template <typename T>
LossResult<T> softmax_cross_entropy(const BasicTensor<T>& logits, const BasicTensor<T>& target) {
    require_same_shape(logits, target, "softmax cross entropy");
    const Shape& s = logits.shape();
    const std::size_t plane = s.plane();
    const double pixels = static_cast<double>(s.n) * plane;
    LossResult<T> r{0.0, BasicTensor<T>(s)};
    double total = 0.0;
    for (int n = 0; n < s.n; ++n)
        for (std::size_t p = 0; p < plane; ++p) {
            const std::size_t base = static_cast<std::size_t>(n) * s.c * plane + p;
            double tsum = 0.0;
            double peak = -INFINITY;
            for (int q = 0; q < s.c; ++q) {
                const double t = target[base + q * plane];
                if (t < 0.0) throw InvalidTargetError("cross entropy target has a negative entry");
                tsum += t;
                peak = std::max(peak, static_cast<double>(logits[base + q * plane]));
            }
            if (std::abs(tsum - 1.0) > 1e-4)
                throw InvalidTargetError("cross entropy target sums to " + std::to_string(tsum) + " at pixel " +
                                         std::to_string(p) + " of sample " + std::to_string(n));
            double z = 0.0;
            for (int q = 0; q < s.c; ++q) z += std::exp(logits[base + q * plane] - peak);
            const double log_z = std::log(z) + peak;
            for (int q = 0; q < s.c; ++q) {
                const std::size_t i = base + q * plane;
                const double t = target[i];
                const double log_p = logits[i] - log_z;
                if (t > 0.0) total -= t * log_p;
                r.grad[i] = static_cast<T>((std::exp(log_p) - t) / pixels);
            }
        }
    r.loss = total / pixels;
    return r;
}

#define COLORIZER_INSTANTIATE_OPS(T)                                                                               \
    template BasicTensor<T> conv2d_forward(const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&,    \
                                           const ConvGeometry&);                                                   \
    template Conv2dGrads<T> conv2d_backward(const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&,   \
                                            const ConvGeometry&);                                                  \
    template BasicTensor<T> relu_forward(const BasicTensor<T>&);                                                   \
    template BasicTensor<T> relu_backward(const BasicTensor<T>&, const BasicTensor<T>&);                           \
    template BasicTensor<T> tanh_forward(const BasicTensor<T>&);                                                   \
    template BasicTensor<T> tanh_backward(const BasicTensor<T>&, const BasicTensor<T>&);                           \
    template BasicTensor<T> upsample_forward(const BasicTensor<T>&, int, UpsampleMode);                            \
    template BasicTensor<T> upsample_backward(const BasicTensor<T>&, const Shape&, int, UpsampleMode);             \
    template BasicTensor<T> batchnorm_forward(const BasicTensor<T>&, const BasicTensor<T>&, const BasicTensor<T>&, \
                                              BasicTensor<T>&, BasicTensor<T>&, const BatchNormOptions&, Mode,     \
                                              BatchNormCache<T>*);                                                 \
    template BatchNormGrads<T> batchnorm_backward(const BatchNormCache<T>&, const BasicTensor<T>&,                 \
                                                  const BasicTensor<T>&);                                          \
    template LossResult<T> euclidean_loss(const BasicTensor<T>&, const BasicTensor<T>&);                           \
    template LossResult<T> softmax_cross_entropy(const BasicTensor<T>&, const BasicTensor<T>&);                    \
    template BasicTensor<T> softmax(const BasicTensor<T>&);

COLORIZER_INSTANTIATE_OPS(float)
COLORIZER_INSTANTIATE_OPS(double)

#undef COLORIZER_INSTANTIATE_OPS

}  // namespace colorizer::nn
