// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

#include "raypriors/common.hpp"

namespace rp {

/// Pinhole camera with a rigid camera-to-world pose. The camera looks along
/// its +z axis; +x is image right, +y is image down. Pixel (u, v) covers the
/// unit square [u, u+1) x [v, v+1) and its ray passes through the center
/// (u + 0.5, v + 0.5).
struct Camera {
    double fx = 0, fy = 0;
    double cx = 0, cy = 0;
    int width = 0, height = 0;
    Mat3d rotation = Mat3d::Identity();   // camera -> world
    Vec3d translation = Vec3d::Zero();    // camera center in world

    Vec3d center() const { return translation; }

    bool valid(double tol = 1e-9) const {
        if (!(fx > 0) || !(fy > 0)) return false;
        if (!(cx >= 0 && cx < width && cy >= 0 && cy < height)) return false;
        const Mat3d err = rotation.transpose() * rotation - Mat3d::Identity();
        if (err.cwiseAbs().maxCoeff() >= tol) return false;
        return rotation.determinant() > 0;
    }
};

template <typename S>
struct Ray3 {
    Vec3<S> origin = Vec3<S>::Zero();
    Vec3<S> dir = Vec3<S>::UnitZ();
    S t_near = S(0);
    S t_far = S(1);

    Vec3<S> at(S t) const { return origin + t * dir; }

    template <typename T>
    Ray3<T> cast() const {
        return {origin.template cast<T>(), dir.template cast<T>(),
                static_cast<T>(t_near), static_cast<T>(t_far)};
    }
};

using Rayd = Ray3<double>;
using Rayf = Ray3<float>;

/// Direction in spherical coordinates: theta is the elevation measured from
/// the xy-plane in [-pi/2, pi/2], phi the azimuth in (-pi, pi].
struct SphericalDir {
    double theta = 0;
    double phi = 0;
};

template <typename S>
Vec3<S> dir_from_spherical(S theta, S phi) {
    const S ct = std::cos(theta);
    return Vec3<S>(ct * std::cos(phi), ct * std::sin(phi), std::sin(theta));
}

inline Vec3d dir_from_spherical(const SphericalDir& s) {
    return dir_from_spherical(s.theta, s.phi);
}

template <typename S>
SphericalDir spherical_from_dir(const Vec3<S>& d, S tol = S(1e-6)) {
    if (std::abs(d.norm() - S(1)) > tol)
        throw std::invalid_argument("spherical_from_dir: direction must be unit length");
    const double z = std::clamp(static_cast<double>(d.z()), -1.0, 1.0);
    SphericalDir s;
    s.theta = std::asin(z);
    // phi undefined at the poles; fixed to 0 there.
    if (std::abs(d.x()) < 1e-300 && std::abs(d.y()) < 1e-300)
        s.phi = 0.0;
    else
        s.phi = std::atan2(static_cast<double>(d.y()), static_cast<double>(d.x()));
    if (s.phi <= -kPi) s.phi = kPi;  // canonical range (-pi, pi]
    return s;
}

/// Ray through the center of pixel (u, v), in world space.
inline Rayd pixel_ray(const Camera& cam, double u, double v, double t_near = 0.0,
                      double t_far = 1e9) {
    if (!(u >= 0 && u < cam.width && v >= 0 && v < cam.height))
        throw std::invalid_argument("pixel_ray: pixel out of bounds");
    if (!(t_near >= 0 && t_near < t_far))
        throw std::invalid_argument("pixel_ray: invalid t range");
    const Vec3d d_cam((u + 0.5 - cam.cx) / cam.fx, (v + 0.5 - cam.cy) / cam.fy, 1.0);
    Rayd ray;
    ray.origin = cam.translation;
    ray.dir = (cam.rotation * d_cam).normalized();
    ray.t_near = t_near;
    ray.t_far = t_far;
    return ray;
}

inline Vec3d world_to_camera(const Camera& cam, const Vec3d& p) {
    return cam.rotation.transpose() * (p - cam.translation);
}

/// Camera at `eye` looking at `target`, with `up` steering the image vertical.
/// `up` is remapped internally when the view direction is (anti)parallel to it.
inline Mat3d look_at_rotation(const Vec3d& eye, const Vec3d& target,
                              const Vec3d& up = Vec3d::UnitZ()) {
    const Vec3d fwd = (target - eye).normalized();
    Vec3d u = up;
    if (std::abs(fwd.dot(u)) > 0.999) u = Vec3d::UnitX();
    const Vec3d down = (-u + u.dot(fwd) * fwd).normalized();
    const Vec3d right = down.cross(fwd);
    Mat3d r;
    r.col(0) = right;
    r.col(1) = down;
    r.col(2) = fwd;
    return r;
}

}  // namespace rp
