#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace codnet {

/// NCHW shape of a rank-4 tensor. All dimensions are >= 1 for a usable
/// tensor; a default-constructed Tensor is empty and has numel() == 0.
struct Shape {
    int n = 0;
    int c = 0;
    int h = 0;
    int w = 0;

    std::size_t numel() const {
        return static_cast<std::size_t>(n) * c * h * w;
    }
    bool operator==(const Shape&) const = default;

    std::string str() const {
        return std::to_string(n) + "x" + std::to_string(c) + "x" +
               std::to_string(h) + "x" + std::to_string(w);
    }
};

/// Dense rank-4 NCHW tensor over float or double, row-major:
/// (n,c,y,x) lives at data[((n*C + c)*H + y)*W + x].
template <typename T>
class Tensor {
    static_assert(std::is_floating_point_v<T>, "Tensor requires float or double");

public:
    Tensor() = default;

    explicit Tensor(Shape s) : shape_(s) {
        check_shape(s);
        data_.assign(s.numel(), T(0));
    }

    Tensor(int n, int c, int h, int w) : Tensor(Shape{n, c, h, w}) {}

    static Tensor full(Shape s, T v) {
        Tensor t(s);
        std::fill(t.data_.begin(), t.data_.end(), v);
        return t;
    }

    static Tensor from_data(Shape s, std::vector<T> d) {
        check_shape(s);
        if (d.size() != s.numel())
            throw std::invalid_argument("Tensor::from_data: got " +
                                        std::to_string(d.size()) +
                                        " values for shape " + s.str());
        Tensor t;
        t.shape_ = s;
        t.data_ = std::move(d);
        return t;
    }

    const Shape& shape() const { return shape_; }
    int n() const { return shape_.n; }
    int c() const { return shape_.c; }
    int h() const { return shape_.h; }
    int w() const { return shape_.w; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    T& operator[](std::size_t i) { return data_[i]; }
    T operator[](std::size_t i) const { return data_[i]; }

    std::size_t index(int n, int c, int y, int x) const {
        return ((static_cast<std::size_t>(n) * shape_.c + c) * shape_.h + y) * shape_.w + x;
    }
    T& at(int n, int c, int y, int x) { return data_[index(n, c, y, x)]; }
    T at(int n, int c, int y, int x) const { return data_[index(n, c, y, x)]; }

    template <typename U>
    Tensor<U> cast() const {
        std::vector<U> d(data_.size());
        for (std::size_t i = 0; i < data_.size(); ++i) d[i] = static_cast<U>(data_[i]);
        return Tensor<U>::from_data(shape_, std::move(d));
    }

    bool all_finite() const {
        for (T v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

private:
    static void check_shape(Shape s) {
        if (s.n < 1 || s.c < 1 || s.h < 1 || s.w < 1)
            throw std::invalid_argument("Tensor: all dimensions must be >= 1, got " + s.str());
    }

    Shape shape_{};
    std::vector<T> data_;
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

template <typename T>
void require_same_shape(const Tensor<T>& a, const Tensor<T>& b, const char* op) {
    if (!(a.shape() == b.shape()))
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    a.shape().str() + " vs " + b.shape().str());
}

// Debug-build guard: finite inputs must yield finite outputs.
template <typename T>
void debug_check_finite(const Tensor<T>& t, const char* op) {
#ifndef NDEBUG
    if (!t.all_finite())
        throw std::runtime_error(std::string(op) + ": non-finite value in result");
#else
    (void)t;
    (void)op;
#endif
}

}  // namespace detail

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
    Tensor<T> out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > T(0) ? x[i] : T(0);
    return out;
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& x) {
    Tensor<T> out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = T(1) / (T(1) + std::exp(-x[i]));
    detail::debug_check_finite(out, "sigmoid");
    return out;
}

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    detail::require_same_shape(a, b, "add");
    Tensor<T> out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    detail::require_same_shape(a, b, "sub");
    Tensor<T> out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

template <typename T>
Tensor<T> hadamard(const Tensor<T>& a, const Tensor<T>& b) {
    detail::require_same_shape(a, b, "hadamard");
    Tensor<T> out(a.shape());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return out;
}

/// out = a*x + b elementwise.
template <typename T>
Tensor<T> affine(const Tensor<T>& x, T a, T b) {
    Tensor<T> out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b;
    return out;
}

template <typename T>
Tensor<T> clamp(const Tensor<T>& x, T lo, T hi) {
    Tensor<T> out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(std::max(x[i], lo), hi);
    return out;
}

template <typename T>
T sum(const Tensor<T>& x) {
    T acc = 0;
    for (std::size_t i = 0; i < x.size(); ++i) acc += x[i];
    return acc;
}

/// Per-pixel maximum over the channel dimension; output has one channel.
template <typename T>
Tensor<T> channel_max(const Tensor<T>& x) {
    Tensor<T> out(x.n(), 1, x.h(), x.w());
    for (int n = 0; n < x.n(); ++n)
        for (int y = 0; y < x.h(); ++y)
            for (int xx = 0; xx < x.w(); ++xx) {
                T m = x.at(n, 0, y, xx);
                for (int c = 1; c < x.c(); ++c) m = std::max(m, x.at(n, c, y, xx));
                out.at(n, 0, y, xx) = m;
            }
    return out;
}

/// Per-pixel mean over the channel dimension; output has one channel.
template <typename T>
Tensor<T> channel_mean(const Tensor<T>& x) {
    Tensor<T> out(x.n(), 1, x.h(), x.w());
    const T inv = T(1) / static_cast<T>(x.c());
    for (int n = 0; n < x.n(); ++n)
        for (int y = 0; y < x.h(); ++y)
            for (int xx = 0; xx < x.w(); ++xx) {
                T acc = 0;
                for (int c = 0; c < x.c(); ++c) acc += x.at(n, c, y, xx);
                out.at(n, 0, y, xx) = acc * inv;
            }
    return out;
}

/// Softmax over all h*w positions of a single-channel map, per sample.
/// Stabilized by max subtraction; each sample's outputs sum to 1.
template <typename T>
Tensor<T> spatial_softmax(const Tensor<T>& m) {
    if (m.c() != 1)
        throw std::invalid_argument("spatial_softmax: expected 1 channel, got " +
                                    std::to_string(m.c()));
    Tensor<T> out(m.shape());
    const int hw = m.h() * m.w();
    for (int n = 0; n < m.n(); ++n) {
        const T* src = m.data() + static_cast<std::size_t>(n) * hw;
        T* dst = out.data() + static_cast<std::size_t>(n) * hw;
        T mx = src[0];
        for (int i = 1; i < hw; ++i) mx = std::max(mx, src[i]);
        T total = 0;
        for (int i = 0; i < hw; ++i) {
            dst[i] = std::exp(src[i] - mx);
            total += dst[i];
        }
        for (int i = 0; i < hw; ++i) dst[i] /= total;
    }
    detail::debug_check_finite(out, "spatial_softmax");
    return out;
}

struct ResizeSpec {
    int target_h = 1;
    int target_w = 1;
};

namespace detail {

struct LerpTap {
    int i0, i1;  // source indices
    double frac; // interpolation weight toward i1
};

inline LerpTap resize_tap(int dst_idx, int dst_size, int src_size) {
    double s = (dst_idx + 0.5) * (static_cast<double>(src_size) / dst_size) - 0.5;
    s = std::min(std::max(s, 0.0), static_cast<double>(src_size - 1));
    int i0 = static_cast<int>(std::floor(s));
    int i1 = std::min(i0 + 1, src_size - 1);
    return {i0, i1, s - i0};
}

}  // namespace detail

/// Bilinear resize with pixel-center (half-pixel) alignment:
/// source coord s = (d + 0.5)*(src/dst) - 0.5, clamped to [0, src-1].
/// Exact on constants and the identity when target == source.
template <typename T>
Tensor<T> bilinear_resize(const Tensor<T>& x, ResizeSpec spec) {
    if (spec.target_h < 1 || spec.target_w < 1)
        throw std::invalid_argument("bilinear_resize: target dims must be >= 1");
    if (spec.target_h == x.h() && spec.target_w == x.w()) return x;

    Tensor<T> out(x.n(), x.c(), spec.target_h, spec.target_w);
    std::vector<detail::LerpTap> col(spec.target_w);
    for (int d = 0; d < spec.target_w; ++d) col[d] = detail::resize_tap(d, spec.target_w, x.w());

    for (int n = 0; n < x.n(); ++n)
        for (int c = 0; c < x.c(); ++c)
            for (int dy = 0; dy < spec.target_h; ++dy) {
                auto row = detail::resize_tap(dy, spec.target_h, x.h());
                const T fy = static_cast<T>(row.frac);
                for (int dx = 0; dx < spec.target_w; ++dx) {
                    const auto& cl = col[dx];
                    const T fx = static_cast<T>(cl.frac);
                    const T v00 = x.at(n, c, row.i0, cl.i0);
                    const T v01 = x.at(n, c, row.i0, cl.i1);
                    const T v10 = x.at(n, c, row.i1, cl.i0);
                    const T v11 = x.at(n, c, row.i1, cl.i1);
                    // lerp form keeps constants bit-exact
                    const T r0 = v00 + fx * (v01 - v00);
                    const T r1 = v10 + fx * (v11 - v10);
                    out.at(n, c, dy, dx) = r0 + fy * (r1 - r0);
                }
            }
    return out;
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.n() != b.n() || a.h() != b.h() || a.w() != b.w())
        throw std::invalid_argument("concat_channels: spatial/batch mismatch " +
                                    a.shape().str() + " vs " + b.shape().str());
    Tensor<T> out(a.n(), a.c() + b.c(), a.h(), a.w());
    const std::size_t plane = static_cast<std::size_t>(a.h()) * a.w();
    for (int n = 0; n < a.n(); ++n) {
        T* dst = out.data() + static_cast<std::size_t>(n) * out.c() * plane;
        std::copy_n(a.data() + static_cast<std::size_t>(n) * a.c() * plane, a.c() * plane, dst);
        std::copy_n(b.data() + static_cast<std::size_t>(n) * b.c() * plane, b.c() * plane,
                    dst + a.c() * plane);
    }
    return out;
}

/// Channels [c0, c1) of x as a new tensor.
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& x, int c0, int c1) {
    if (c0 < 0 || c1 > x.c() || c0 >= c1)
        throw std::invalid_argument("slice_channels: bad range [" + std::to_string(c0) + "," +
                                    std::to_string(c1) + ") for c=" + std::to_string(x.c()));
    Tensor<T> out(x.n(), c1 - c0, x.h(), x.w());
    const std::size_t plane = static_cast<std::size_t>(x.h()) * x.w();
    for (int n = 0; n < x.n(); ++n)
        std::copy_n(x.data() + (static_cast<std::size_t>(n) * x.c() + c0) * plane,
                    static_cast<std::size_t>(c1 - c0) * plane,
                    out.data() + static_cast<std::size_t>(n) * out.c() * plane);
    return out;
}

/// out(n,c,y,x) = x(n,c,y,x) * m(n,0,y,x): broadcast a one-channel map
/// across channels.
template <typename T>
Tensor<T> mul_spatial_map(const Tensor<T>& x, const Tensor<T>& m) {
    if (m.c() != 1 || m.n() != x.n() || m.h() != x.h() || m.w() != x.w())
        throw std::invalid_argument("mul_spatial_map: map " + m.shape().str() +
                                    " does not match " + x.shape().str());
    Tensor<T> out(x.shape());
    for (int n = 0; n < x.n(); ++n)
        for (int c = 0; c < x.c(); ++c)
            for (int y = 0; y < x.h(); ++y)
                for (int xx = 0; xx < x.w(); ++xx)
                    out.at(n, c, y, xx) = x.at(n, c, y, xx) * m.at(n, 0, y, xx);
    return out;
}

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

}  // namespace codnet
