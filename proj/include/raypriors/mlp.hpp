// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "raypriors/common.hpp"

namespace rp {

enum class Activation : uint8_t { linear = 0, relu = 1, sigmoid = 2, softplus = 3 };

template <typename S>
S stable_sigmoid(S x) {
    if (x >= S(0)) return S(1) / (S(1) + std::exp(-x));
    const S e = std::exp(x);
    return e / (S(1) + e);
}

template <typename S>
S stable_softplus(S x) {
    return x >= S(0) ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

template <typename S>
void apply_activation(Activation act, const MatX<S>& z, MatX<S>& a) {
    switch (act) {
        case Activation::linear: a = z; break;
        case Activation::relu: a = z.cwiseMax(S(0)); break;
        case Activation::sigmoid:
            a = z.unaryExpr([](S x) { return stable_sigmoid(x); });
            break;
        case Activation::softplus:
            a = z.unaryExpr([](S x) { return stable_softplus(x); });
            break;
    }
}

/// d a / d z evaluated from the pre-activation z and activation a.
template <typename S>
MatX<S> activation_grad(Activation act, const MatX<S>& z, const MatX<S>& a) {
    switch (act) {
        case Activation::linear: return MatX<S>::Ones(z.rows(), z.cols());
        case Activation::relu:
            return (z.array() > S(0)).template cast<S>().matrix();
        case Activation::sigmoid: return (a.array() * (S(1) - a.array())).matrix();
        case Activation::softplus:
            return z.unaryExpr([](S x) { return stable_sigmoid(x); });
    }
    return MatX<S>();
}

template <typename S>
struct DenseLayer {
    MatX<S> weight;  // out x in
    VecX<S> bias;    // out
    Activation act = Activation::linear;
};

/// Plain fully connected network. Batches are stored column-wise
/// (features x batch) so a layer is one GEMM.
template <typename S>
struct Mlp {
    std::vector<DenseLayer<S>> layers;

    Index input_dim() const { return layers.empty() ? 0 : layers.front().weight.cols(); }
    Index output_dim() const { return layers.empty() ? 0 : layers.back().weight.rows(); }

    Index param_count() const {
        Index n = 0;
        for (const auto& l : layers) n += l.weight.size() + l.bias.size();
        return n;
    }

    template <typename T>
    Mlp<T> cast() const {
        Mlp<T> out;
        out.layers.reserve(layers.size());
        for (const auto& l : layers)
            out.layers.push_back({l.weight.template cast<T>(), l.bias.template cast<T>(), l.act});
        return out;
    }
};

/// Kaiming-style uniform fan-in init, biases zero, deterministic per stream.
template <typename S>
Mlp<S> make_mlp(const std::vector<Index>& widths, const std::vector<Activation>& acts,
                Stream& init) {
    if (widths.size() < 2 || acts.size() != widths.size() - 1)
        throw std::invalid_argument("make_mlp: widths/activations mismatch");
    Mlp<S> mlp;
    mlp.layers.resize(widths.size() - 1);
    for (size_t l = 0; l + 1 < widths.size(); ++l) {
        const Index fan_in = widths[l];
        const Index fan_out = widths[l + 1];
        const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
        MatX<S>& w = mlp.layers[l].weight;
        w.resize(fan_out, fan_in);
        // Row-major fill order so the draw sequence is layout independent.
        for (Index r = 0; r < fan_out; ++r)
            for (Index c = 0; c < fan_in; ++c)
                w(r, c) = static_cast<S>(init.uniform(-bound, bound));
        mlp.layers[l].bias = VecX<S>::Zero(fan_out);
        mlp.layers[l].act = acts[l];
    }
    return mlp;
}

template <typename S>
struct MlpCache {
    MatX<S> input;
    std::vector<MatX<S>> pre;   // z_l = W_l a_{l-1} + b_l
    std::vector<MatX<S>> post;  // a_l = act(z_l)
};

template <typename S>
const MatX<S>& mlp_forward(const Mlp<S>& mlp, const MatX<S>& x,
                           MlpCache<S>& cache) {
    if (x.rows() != mlp.input_dim())
        throw std::invalid_argument("mlp_forward: input width mismatch");
    const size_t n = mlp.layers.size();
    cache.input = x;
    cache.pre.resize(n);
    cache.post.resize(n);
    const MatX<S>* a = &cache.input;
    for (size_t l = 0; l < n; ++l) {
        const auto& layer = mlp.layers[l];
        cache.pre[l].noalias() = layer.weight * (*a);
        cache.pre[l].colwise() += layer.bias;
        apply_activation(layer.act, cache.pre[l], cache.post[l]);
        a = &cache.post[l];
    }
    return cache.post.back();
}

template <typename S>
MatX<S> mlp_forward(const Mlp<S>& mlp, const MatX<S>& x) {
    MlpCache<S> cache;
    return mlp_forward(mlp, x, cache);
}

template <typename S>
struct LayerTensors {
    MatX<S> weight;
    VecX<S> bias;
};

/// Per-layer tensors mirroring an Mlp's shapes; used for gradients and for
/// the Adam moment accumulators.
template <typename S>
struct MlpGrads {
    std::vector<LayerTensors<S>> layers;

    static MlpGrads zeros_like(const Mlp<S>& mlp) {
        MlpGrads g;
        g.layers.resize(mlp.layers.size());
        for (size_t l = 0; l < mlp.layers.size(); ++l) {
            g.layers[l].weight = MatX<S>::Zero(mlp.layers[l].weight.rows(),
                                               mlp.layers[l].weight.cols());
            g.layers[l].bias = VecX<S>::Zero(mlp.layers[l].bias.size());
        }
        return g;
    }

    void set_zero() {
        for (auto& l : layers) {
            l.weight.setZero();
            l.bias.setZero();
        }
    }

    MlpGrads& operator+=(const MlpGrads& o) {
        for (size_t l = 0; l < layers.size(); ++l) {
            layers[l].weight += o.layers[l].weight;
            layers[l].bias += o.layers[l].bias;
        }
        return *this;
    }
};

/// Reverse-mode gradients of the forward map. Accumulates into `grads`
/// (callers zero it first); optionally emits the gradient w.r.t. the input.
template <typename S>
void mlp_backward(const Mlp<S>& mlp, const MlpCache<S>& cache,
                  const MatX<S>& d_out, MlpGrads<S>& grads,
                  MatX<S>* d_input = nullptr) {
    const size_t n = mlp.layers.size();
    if (cache.pre.size() != n || cache.post.size() != n ||
        d_out.rows() != mlp.output_dim() || d_out.cols() != cache.input.cols())
        throw std::invalid_argument("mlp_backward: cache does not match forward call");
    if (grads.layers.size() != n)
        throw std::invalid_argument("mlp_backward: gradient buffer shape mismatch");

    MatX<S> delta;
    for (size_t l = n; l-- > 0;) {
        const auto& layer = mlp.layers[l];
        const MatX<S> act_g = activation_grad(layer.act, cache.pre[l], cache.post[l]);
        if (l == n - 1)
            delta = d_out.cwiseProduct(act_g);
        else
            delta = delta.cwiseProduct(act_g);
        const MatX<S>& below = (l == 0) ? cache.input : cache.post[l - 1];
        grads.layers[l].weight.noalias() += delta * below.transpose();
        grads.layers[l].bias += delta.rowwise().sum();
        if (l > 0 || d_input != nullptr) {
            MatX<S> d_below;
            d_below.noalias() = layer.weight.transpose() * delta;
            if (l == 0) {
                *d_input = std::move(d_below);
            } else {
                delta = std::move(d_below);
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Adam

template <typename S>
struct AdamState {
    std::vector<LayerTensors<S>> m;  // first moments, mirror param shapes
    std::vector<LayerTensors<S>> v;  // second moments
    int64_t step = 0;
    S beta1 = S(0.9);
    S beta2 = S(0.999);
    S eps = S(1e-8);
    S lr = S(5e-4);
};

template <typename S>
AdamState<S> make_adam_state(const Mlp<S>& mlp, S lr) {
    AdamState<S> st;
    st.lr = lr;
    const auto zeros = MlpGrads<S>::zeros_like(mlp);
    st.m = zeros.layers;
    st.v = zeros.layers;
    return st;
}

/// Bias-corrected Adam update in place. Throws on non-finite gradients,
/// naming the offending tensor.
template <typename S>
void adam_step(Mlp<S>& mlp, const MlpGrads<S>& grads, AdamState<S>& st) {
    if (grads.layers.size() != mlp.layers.size() || st.m.size() != mlp.layers.size())
        throw std::invalid_argument("adam_step: shape mismatch");
    st.step += 1;
    const S c1 = S(1) - std::pow(st.beta1, static_cast<S>(st.step));
    const S c2 = S(1) - std::pow(st.beta2, static_cast<S>(st.step));
    for (size_t l = 0; l < mlp.layers.size(); ++l) {
        const auto& gw = grads.layers[l].weight;
        const auto& gb = grads.layers[l].bias;
        if (!all_finite(gw))
            throw std::runtime_error("adam_step: non-finite gradient at layer " +
                                     std::to_string(l) + " weight");
        if (!all_finite(gb))
            throw std::runtime_error("adam_step: non-finite gradient at layer " +
                                     std::to_string(l) + " bias");
        auto update = [&](auto& p, auto& m, auto& v, const auto& g) {
            m = st.beta1 * m + (S(1) - st.beta1) * g;
            v.array() = st.beta2 * v.array() + (S(1) - st.beta2) * g.array().square();
            p.array() -=
                st.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + st.eps);
        };
        update(mlp.layers[l].weight, st.m[l].weight, st.v[l].weight, gw);
        update(mlp.layers[l].bias, st.m[l].bias, st.v[l].bias, gb);
    }
}

}  // namespace rp
