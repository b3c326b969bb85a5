// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "raypriors/geometry.hpp"

using namespace rp;

TEST_CASE("pixel_ray principal point gives the forward axis") {
    Camera cam;
    cam.fx = cam.fy = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 100;
    const Rayd r = pixel_ray(cam, 49.5, 49.5, 0.0, 10.0);
    CHECK(r.origin.norm() == doctest::Approx(0.0));
    CHECK((r.dir - Vec3d(0, 0, 1)).norm() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pixel_ray 45 degree ray") {
    Camera cam;
    cam.fx = cam.fy = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 200;
    // (u + 0.5 - cx)/fx = 1  ->  u = 149.5
    const Rayd r = pixel_ray(cam, 149.5, 49.5);
    const Vec3d expect = Vec3d(1, 0, 1).normalized();
    CHECK((r.dir - expect).norm() < 1e-12);
}

TEST_CASE("pixel_ray translation moves the origin only") {
    Camera cam;
    cam.fx = cam.fy = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 100;
    cam.translation = Vec3d(0, 0, -4);
    const Rayd r = pixel_ray(cam, 49.5, 49.5);
    CHECK((r.origin - Vec3d(0, 0, -4)).norm() < 1e-12);
    CHECK((r.dir - Vec3d(0, 0, 1)).norm() < 1e-12);
}

TEST_CASE("pixel_ray rejects out-of-bounds pixels") {
    Camera cam;
    cam.fx = cam.fy = 100;
    cam.cx = cam.cy = 50;
    cam.width = cam.height = 100;
    CHECK_THROWS_AS(pixel_ray(cam, -1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(pixel_ray(cam, 0.0, 100.0), std::invalid_argument);
}

TEST_CASE("spherical conversion examples") {
    CHECK((dir_from_spherical(0.0, 0.0) - Vec3d(1, 0, 0)).norm() < 1e-15);
    CHECK((dir_from_spherical(kPi / 2, 1.234) - Vec3d(0, 0, 1)).norm() < 1e-12);
    CHECK((dir_from_spherical(0.0, kPi / 2) - Vec3d(0, 1, 0)).norm() < 1e-15);

    const SphericalDir pole = spherical_from_dir(Vec3d(0, 0, 1));
    CHECK(pole.theta == doctest::Approx(kPi / 2));
    CHECK(pole.phi == 0.0);

    const SphericalDir sx = spherical_from_dir(Vec3d(1, 0, 0));
    CHECK(sx.theta == doctest::Approx(0.0));
    CHECK(sx.phi == doctest::Approx(0.0));

    const SphericalDir sy = spherical_from_dir(Vec3d(0, -1, 0));
    CHECK(sy.theta == doctest::Approx(0.0));
    CHECK(sy.phi == doctest::Approx(-kPi / 2));

    CHECK_THROWS_AS(spherical_from_dir(Vec3d(1, 1, 0)), std::invalid_argument);
}

TEST_CASE("spherical round-trip away from the poles") {
    Stream st(stream_key({42, 1}));
    for (int i = 0; i < 2000; ++i) {
        SphericalDir s;
        s.theta = st.uniform(-kPi / 2 + 1e-6, kPi / 2 - 1e-6);
        s.phi = st.uniform(-kPi + 1e-9, kPi);
        const SphericalDir back = spherical_from_dir(dir_from_spherical(s));
        CHECK(std::abs(back.theta - s.theta) < 1e-9);
        CHECK(std::abs(back.phi - s.phi) < 1e-9);
    }
}

TEST_CASE("pixel_ray directions are unit for fuzzed cameras and pixels") {
    Stream st(stream_key({42, 2}));
    for (int i = 0; i < 500; ++i) {
        Camera cam;
        cam.width = 8 + static_cast<int>(st.next_below(120));
        cam.height = 8 + static_cast<int>(st.next_below(120));
        cam.fx = st.uniform(20, 300);
        cam.fy = st.uniform(20, 300);
        cam.cx = st.uniform(0, cam.width - 1e-6);
        cam.cy = st.uniform(0, cam.height - 1e-6);
        const Vec3d axis =
            Vec3d(st.uniform(-1, 1), st.uniform(-1, 1), st.uniform(-1, 1)).normalized();
        cam.rotation = Eigen::AngleAxisd(st.uniform(0, kPi), axis).toRotationMatrix();
        cam.translation = Vec3d(st.uniform(-5, 5), st.uniform(-5, 5), st.uniform(-5, 5));
        REQUIRE(cam.valid());
        const double u = st.uniform(0, cam.width);
        const double v = st.uniform(0, cam.height);
        const Rayd r = pixel_ray(cam, u, v);
        CHECK(std::abs(r.dir.norm() - 1.0) < 1e-9);
    }
}

TEST_CASE("look_at_rotation is a proper rotation that faces the target") {
    Stream st(stream_key({42, 3}));
    for (int i = 0; i < 200; ++i) {
        const Vec3d eye(st.uniform(-4, 4), st.uniform(-4, 4), st.uniform(-4, 4));
        if (eye.norm() < 1e-3) continue;
        const Mat3d r = look_at_rotation(eye, Vec3d::Zero());
        CHECK((r.transpose() * r - Mat3d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(r.determinant() == doctest::Approx(1.0));
        CHECK((r.col(2) - (-eye).normalized()).norm() < 1e-12);
    }
}
