// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

#include "raypriors/common.hpp"
#include "raypriors/geometry.hpp"

namespace rp {

/// Sample positions and spacings along one ray. t is strictly ascending in
/// [t_near, t_far]; delta[i] = t[i+1] - t[i] with the final spacing capped at
/// the ray extent so depth stays bounded. Spacings are carried as data:
/// compositing consumes (t, delta, sigma, color) tuples as given.
template <typename S>
struct RayQuadrature {
    VecX<S> t;
    VecX<S> delta;

    Index count() const { return t.size(); }

    /// Sample positions as a 3 x N matrix for batched field evaluation.
    MatX<S> positions(const Vec3<S>& origin, const Vec3<S>& dir) const {
        MatX<S> p(3, t.size());
        for (Index i = 0; i < t.size(); ++i) p.col(i) = origin + t[i] * dir;
        return p;
    }
};

/// One uniform draw per equal-width bin of [t_near, t_far]; bin centers in
/// test mode.
template <typename S>
RayQuadrature<S> stratified_sample(const Ray3<S>& ray, Index n, Stream& stream,
                                   bool test_mode = false) {
    if (n < 1) throw std::invalid_argument("stratified_sample: need at least one sample");
    RayQuadrature<S> q;
    q.t.resize(n);
    q.delta.resize(n);
    const S extent = ray.t_far - ray.t_near;
    const S bin = extent / static_cast<S>(n);
    for (Index i = 0; i < n; ++i) {
        const S jitter = test_mode ? S(0.5) : static_cast<S>(stream.uniform());
        q.t[i] = ray.t_near + (static_cast<S>(i) + jitter) * bin;
    }
    for (Index i = 0; i + 1 < n; ++i) q.delta[i] = q.t[i + 1] - q.t[i];
    q.delta[n - 1] = extent;
    return q;
}

/// Per-ray compositing output: color, per-sample weights, residual
/// transmittance after the final sample, and expected depth.
template <typename S>
struct CompositeResult {
    Vec3<S> color = Vec3<S>::Zero();
    VecX<S> weights;
    S transmittance = S(1);
    S depth = S(0);
};

/// Emission-absorption compositing. weights[i] = T_i (1 - exp(-sigma_i
/// delta_i)) with T_i the transmittance accumulated before sample i; color is
/// the weighted sum of sample colors, depth the weighted sum of sample
/// depths. Optical depth accumulates in double.
template <typename S>
CompositeResult<S> composite(const RayQuadrature<S>& quad,
                             const VecX<S>& sigma,
                             const MatX<S>& colors) {
    const Index n = quad.count();
    if (sigma.size() != n || colors.cols() != n || colors.rows() != 3)
        throw std::invalid_argument("composite: batch shapes do not match quadrature");
    if ((sigma.array() < S(0)).any())
        throw std::invalid_argument("composite: negative density");

    CompositeResult<S> out;
    out.weights.resize(n);
    double optical_depth = 0.0;
    Vec3<double> color_acc = Vec3<double>::Zero();
    double depth_acc = 0.0;
    for (Index i = 0; i < n; ++i) {
        const double trans = std::exp(-optical_depth);
        const double tau = static_cast<double>(sigma[i]) * static_cast<double>(quad.delta[i]);
        const double alpha = -std::expm1(-tau);  // 1 - exp(-tau)
        const double w = trans * alpha;
        out.weights[i] = static_cast<S>(w);
        color_acc += w * colors.col(i).template cast<double>();
        depth_acc += w * static_cast<double>(quad.t[i]);
        optical_depth += tau;
    }
    out.transmittance = static_cast<S>(std::exp(-optical_depth));
    out.color = color_acc.template cast<S>();
    out.depth = static_cast<S>(depth_acc);
    return out;
}

/// Exact gradients of the composite w.r.t. per-sample density and color.
/// d_color is the upstream gradient on the composited color and
/// d_transmittance the upstream gradient on the residual transmittance
/// (opacity losses feed through here).
template <typename S>
void composite_backward(const RayQuadrature<S>& quad,
                        const VecX<S>& sigma,
                        const MatX<S>& colors,
                        const Vec3<S>& d_color, S d_transmittance,
                        VecX<S>& d_sigma, MatX<S>& d_colors) {
    const Index n = quad.count();
    d_sigma.resize(n);
    d_colors.resize(3, n);

    // Recompute transmittances and weights (cheap relative to field eval).
    VecX<double> trans(n + 1);
    VecX<double> weights(n);
    double optical_depth = 0.0;
    for (Index i = 0; i < n; ++i) {
        trans[i] = std::exp(-optical_depth);
        const double tau = static_cast<double>(sigma[i]) * static_cast<double>(quad.delta[i]);
        weights[i] = trans[i] * -std::expm1(-tau);
        optical_depth += tau;
    }
    trans[n] = std::exp(-optical_depth);

    // g_i = d_color . c_i; dL/dsigma_i = delta_i * (T_i exp(-tau_i) g_i
    //   - sum_{k>i} w_k g_k - T_N * d_transmittance).
    const Vec3<double> up = d_color.template cast<double>();
    VecX<double> g(n);
    for (Index i = 0; i < n; ++i) {
        g[i] = up.dot(colors.col(i).template cast<double>());
        d_colors.col(i) = (weights[i] * up).template cast<S>();
    }
    double suffix = trans[n] * static_cast<double>(d_transmittance);
    for (Index i = n; i-- > 0;) {
        const double survived = trans[i + 1];  // T_i * exp(-tau_i)
        d_sigma[i] = static_cast<S>(static_cast<double>(quad.delta[i]) *
                                    (survived * g[i] - suffix));
        suffix += weights[i] * g[i];
    }
}

}  // namespace rp
