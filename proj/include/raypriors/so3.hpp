// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include "raypriors/common.hpp"

namespace rp {

template <typename S>
bool is_rotation(const Mat3<S>& r, S tol = S(1e-8)) {
    const Mat3<S> err = r.transpose() * r - Mat3<S>::Identity();
    return err.cwiseAbs().maxCoeff() < tol && r.determinant() > S(0);
}

template <typename S>
Mat3<S> skew(const Vec3<S>& w) {
    Mat3<S> m;
    m << S(0), -w.z(), w.y(), w.z(), S(0), -w.x(), -w.y(), w.x(), S(0);
    return m;
}

/// Rodrigues exponential: rotation vector -> rotation matrix.
template <typename S>
Mat3<S> so3_exp(const Vec3<S>& w) {
    const S theta = w.norm();
    if (theta < S(1e-12)) return Mat3<S>::Identity() + skew(w);
    const Vec3<S> axis = w / theta;
    const Mat3<S> k = skew(axis);
    return Mat3<S>::Identity() + std::sin(theta) * k +
           (S(1) - std::cos(theta)) * k * k;
}

/// Rotation-vector logarithm with angle in [0, pi]. The angle-pi case is
/// recovered from the symmetric part; the axis sign there is taken from the
/// skew part when it is nonzero and fixed canonically otherwise.
template <typename S>
Vec3<S> so3_log(const Mat3<S>& r, S tol = S(1e-8)) {
    if (!is_rotation(r, tol))
        throw std::invalid_argument("so3_log: input is not a rotation matrix");

    const S cos_theta =
        std::clamp((r.trace() - S(1)) / S(2), S(-1), S(1));
    Vec3<S> s;  // vee(R - R^T) / 2 = sin(theta) * axis
    s << (r(2, 1) - r(1, 2)) / S(2), (r(0, 2) - r(2, 0)) / S(2),
        (r(1, 0) - r(0, 1)) / S(2);
    const S sin_theta = std::min(s.norm(), S(1));

    if (cos_theta > S(-0.99)) {
        // acos is well conditioned away from theta = pi.
        const S theta = std::acos(cos_theta);
        if (theta < S(1e-9)) return s;  // first-order: omega ~ vee/2
        return (theta / std::sin(theta)) * s;
    }

    // Near pi: magnitude from asin of the skew norm, axis from the symmetric
    // part, (R + R^T)/2 = cos*I + (1 - cos)*a*a^T.
    const S theta = S(kPi) - std::asin(sin_theta);
    const Mat3<S> outer =
        ((r + r.transpose()) / S(2) - cos_theta * Mat3<S>::Identity()) /
        (S(1) - cos_theta);
    int k = 0;
    outer.diagonal().maxCoeff(&k);
    Vec3<S> axis;
    axis[k] = std::sqrt(std::max(outer(k, k), S(0)));
    const int i = (k + 1) % 3, j = (k + 2) % 3;
    axis[i] = outer(k, i) / axis[k];
    axis[j] = outer(k, j) / axis[k];
    axis.normalize();
    if (sin_theta > S(1e-7)) {
        if (axis.dot(s) < S(0)) axis = -axis;
    } else {
        // theta == pi: +a and -a are equivalent; pick a canonical sign.
        if (axis[k] < S(0) || (axis[k] == S(0) && axis[i] < S(0))) axis = -axis;
    }
    return theta * axis;
}

/// Minimum rotation-vector distance between pose y and a non-empty pose set.
template <typename S>
S pose_distance(const Mat3<S>& y, std::span<const Mat3<S>> train_poses, S tol = S(1e-8)) {
    if (train_poses.empty())
        throw std::invalid_argument("pose_distance: empty training pose set");
    const Vec3<S> log_y = so3_log(y, tol);
    S best = std::numeric_limits<S>::infinity();
    for (const Mat3<S>& x : train_poses)
        best = std::min(best, (so3_log(x, tol) - log_y).norm());
    return best;
}

template <typename S>
S pose_distance(const Mat3<S>& y, const std::vector<Mat3<S>>& train_poses,
                S tol = S(1e-8)) {
    return pose_distance<S>(y, std::span<const Mat3<S>>(train_poses), tol);
}

}  // namespace rp
