// SPDX-License-Identifier: Apache-2.0
//
// nfmimo: noncoherent MIMO detection under near-field spatial correlation
// Copyright (C) 2026 The nfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <nfmimo/geometry.hpp>

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace nfmimo;
using Catch::Approx;

TEST_CASE("antenna positions follow row-major UPA indexing", "[geometry]")
{
    const ArrayGeometry g(16, 16, 0.01, 0.01);
    CHECK(antenna_position(1, g).isApprox(Vec3(0, 0, 0)));
    CHECK((antenna_position(2, g) - Vec3(0, 0.01, 0)).norm() < 1e-15);
    CHECK((antenna_position(17, g) - Vec3(0, 0, 0.01)).norm() < 1e-15);
    CHECK((antenna_position(256, g) - Vec3(0, 0.15, 0.15)).norm() < 1e-15);

    const ArrayGeometry rect(5, 3, 0.02, 0.04);
    CHECK((antenna_position(6, rect) - Vec3(0, 0, 0.02)).norm() < 1e-15);
    CHECK(antenna_positions(rect).cols() == 15);
}

TEST_CASE("element index round trip", "[geometry]")
{
    for (auto [nh, nv] : {std::pair{16, 16}, std::pair{7, 3}, std::pair{1, 9}, std::pair{9, 1}})
    {
        const ArrayGeometry g(nh, nv, 0.01, 0.01);
        for (int n = 1; n <= g.size(); ++n)
        {
            const int i = g.horizontal_index(n);
            const int j = g.vertical_index(n);
            REQUIRE(n == 1 + i + j * nh);
            REQUIRE(i >= 0);
            REQUIRE(i < nh);
            REQUIRE(j < nv);
        }
    }
}

TEST_CASE("invalid geometry and indices are rejected", "[geometry]")
{
    CHECK_THROWS_AS(ArrayGeometry(0, 4, 0.01, 0.01), Error);
    CHECK_THROWS_AS(ArrayGeometry(4, 4, 0.0, 0.01), Error);
    CHECK_THROWS_AS(ArrayGeometry(4, 4, 0.01, -1.0), Error);
    const ArrayGeometry g(4, 4, 0.01, 0.01);
    try
    {
        antenna_position(17, g);
        FAIL("expected an exception");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::IndexOutOfRange);
    }
    CHECK_THROWS_AS(antenna_position(0, g), Error);
}

TEST_CASE("spherical to cartesian convention", "[geometry]")
{
    CHECK((spherical_to_cartesian({1.0, 0.0, 0.0}) - Vec3(1, 0, 0)).norm() < 1e-15);
    CHECK((spherical_to_cartesian({1.0, pi / 2, 0.0}) - Vec3(0, 0, 1)).norm() < 1e-15);

    const Vec3 p = spherical_to_cartesian(SphericalPoint::from_degrees(5.0, -30.0, -10.0));
    CHECK(p.x() == Approx(4.2643).margin(1e-4));
    CHECK(p.y() == Approx(-0.7519).margin(1e-4));
    CHECK(p.z() == Approx(-2.5000).margin(1e-4));

    // independent evaluation with the angles written out in radians
    const double t = -30.0 / 180.0 * 3.14159265358979323846;
    const double f = -10.0 / 180.0 * 3.14159265358979323846;
    CHECK(p.x() == Approx(5 * std::cos(t) * std::cos(f)).epsilon(1e-14));
    CHECK(p.y() == Approx(5 * std::cos(t) * std::sin(f)).epsilon(1e-14));
    CHECK(p.z() == Approx(5 * std::sin(t)).epsilon(1e-14));
}

TEST_CASE("cartesian to spherical inverts the forward map", "[geometry]")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> r(0.1, 300.0), th(-pi / 2 + 1e-6, pi / 2 - 1e-6), ph(-pi + 1e-6, pi);
    for (int i = 0; i < 500; ++i)
    {
        const SphericalPoint s{r(rng), th(rng), ph(rng)};
        const SphericalPoint back = cartesian_to_spherical(spherical_to_cartesian(s));
        REQUIRE(back.valid());
        REQUIRE(back.r == Approx(s.r).epsilon(1e-12));
        REQUIRE(back.theta == Approx(s.theta).margin(1e-9));
        REQUIRE(back.phi == Approx(s.phi).margin(1e-9));
    }
    CHECK(cartesian_to_spherical(Vec3(-1, 0, 0)).phi == Approx(pi));
}

TEST_CASE("field boundaries for the 16x16 array", "[geometry]")
{
    const double ticks[] = {10.24, 23.04, 40.96};
    const int sides[] = {16, 24, 32};
    for (int i = 0; i < 3; ++i)
    {
        const FieldBoundaries fb = field_boundaries(ArrayGeometry::square(sides[i], 0.01, 0.01));
        CHECK(fb.fraunhofer == Approx(ticks[i]).epsilon(1e-12));
        CHECK(fb.aperture == Approx(0.01 * std::sqrt(2.0) * sides[i]).epsilon(1e-14));
    }

    const FieldBoundaries fb = field_boundaries(ArrayGeometry(16, 16, 0.01, 0.01));
    const double d = std::sqrt(0.0512);
    CHECK(fb.fresnel == Approx(0.62 * std::sqrt(d * d * d / 0.01)).epsilon(1e-14));
    // stated as 0.67 m in the text
    CHECK(fb.fresnel == Approx(0.67).margin(0.005));
}

TEST_CASE("fresnel distance stays below fraunhofer distance", "[geometry][property]")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> side(1, 64);
    std::uniform_real_distribution<double> spacing(0.001, 0.1), lambda(0.001, 0.1);
    int checked = 0;
    for (int i = 0; i < 2000; ++i)
    {
        const ArrayGeometry g(side(rng), side(rng), spacing(rng), lambda(rng));
        const FieldBoundaries fb = field_boundaries(g);
        if (fb.aperture <= 0.24 * g.wavelength())
            continue;
        ++checked;
        REQUIRE(fb.fresnel > 0.0);
        REQUIRE(fb.fresnel < fb.fraunhofer);
    }
    CHECK(checked > 1000);
}

TEST_CASE("trajectory points lie on the segment at the requested range", "[geometry]")
{
    const SphericalPoint a = SphericalPoint::from_degrees(1.0, -30.0, -10.0);
    const SphericalPoint b = SphericalPoint::from_degrees(200.0, -0.15, -10.0);
    const Vec3 pa = spherical_to_cartesian(a);
    const Vec3 pb = spherical_to_cartesian(b);
    for (double r : {1.0, 2.0, 10.24, 50.0, 199.0, 200.0})
    {
        const SphericalPoint p = point_on_segment_at_range(a, b, r);
        const Vec3 c = spherical_to_cartesian(p);
        CHECK(p.r == Approx(r).epsilon(1e-12));
        // collinear and between the endpoints
        CHECK((c - pa).cross(pb - pa).norm() < 1e-9 * (pb - pa).norm() * std::max(1.0, (c - pa).norm()));
        CHECK((c - pa).dot(pb - pa) >= -1e-9);
        CHECK((c - pa).norm() <= (pb - pa).norm() + 1e-9);
    }
    CHECK_THROWS_AS(point_on_segment_at_range(a, b, 500.0), Error);
}
