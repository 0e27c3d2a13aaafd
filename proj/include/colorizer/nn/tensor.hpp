#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "colorizer/errors.hpp"

namespace colorizer::nn {

struct Shape {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;

    std::size_t count() const { return static_cast<std::size_t>(n) * c * h * w; }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }
    bool operator==(const Shape&) const = default;
    std::string str() const {
        return "[" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
               std::to_string(w) + "]";
    }
};

// N x C x H x W array, row-major with W fastest, plus an optional gradient buffer.
template <typename T>
class BasicTensor {
public:
    using value_type = T;

    BasicTensor() = default;
    explicit BasicTensor(Shape shape, T fill = T{}) : shape_(shape), values_(shape.count(), fill) {
        if (shape.n < 0 || shape.c < 0 || shape.h < 0 || shape.w < 0)
            throw DimensionError("negative tensor dimension " + shape.str());
    }
    BasicTensor(Shape shape, std::vector<T> values) : shape_(shape), values_(std::move(values)) {
        if (values_.size() != shape_.count())
            throw DimensionError("tensor " + shape_.str() + " given " + std::to_string(values_.size()) + " values");
    }

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return values_.size(); }

    std::span<T> values() { return values_; }
    std::span<const T> values() const { return values_; }
    T* data() { return values_.data(); }
    const T* data() const { return values_.data(); }
    T& operator[](std::size_t i) { return values_[i]; }
    const T& operator[](std::size_t i) const { return values_[i]; }

    std::size_t offset(int n, int c, int h, int w) const {
        return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + h) * shape_.w + w;
    }
    T& at(int n, int c, int h, int w) { return values_[offset(n, c, h, w)]; }
    const T& at(int n, int c, int h, int w) const { return values_[offset(n, c, h, w)]; }

    bool has_grad() const { return grad_.size() == values_.size(); }
    // Allocates the gradient buffer (zeroed) if absent.
    std::span<T> grad() {
        if (grad_.size() != values_.size()) grad_.assign(values_.size(), T{});
        return grad_;
    }
    std::span<const T> grad() const { return grad_; }
    void zero_grad() { std::fill(grad_.begin(), grad_.end(), T{}); }
    void drop_grad() { grad_.clear(); }

    void fill(T v) { std::fill(values_.begin(), values_.end(), v); }

    // Bitwise value equality; gradients are ignored.
    bool same_values(const BasicTensor& other) const { return shape_ == other.shape_ && values_ == other.values_; }

private:
    Shape shape_;
    std::vector<T> values_;
    std::vector<T> grad_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

template <typename T>
void require_same_shape(const BasicTensor<T>& x, const BasicTensor<T>& y, const char* what) {
    if (!(x.shape() == y.shape()))
        throw DimensionError(std::string(what) + ": shape " + x.shape().str() + " does not match " + y.shape().str());
}

template <typename To, typename From>
BasicTensor<To> tensor_cast(const BasicTensor<From>& src) {
    std::vector<To> v(src.values().begin(), src.values().end());
    return BasicTensor<To>(src.shape(), std::move(v));
}

}  // namespace colorizer::nn
