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

#ifndef NFMIMO_GEOMETRY_HPP
#define NFMIMO_GEOMETRY_HPP

#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace nfmimo
{

using Vec3 = Eigen::Vector3d;

inline constexpr double pi = std::numbers::pi;

inline constexpr double deg_to_rad(double deg) noexcept { return deg * pi / 180.0; }
inline constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / pi; }

// Uniform planar array in the yz-plane. Element n (1-based) sits at
// (0, i_n * spacing, j_n * spacing) with i_n = (n-1) mod n_h and
// j_n = floor((n-1) / n_h).
class ArrayGeometry
{
public:
    ArrayGeometry(int n_h, int n_v, double spacing, double wavelength)
        : n_h_(n_h), n_v_(n_v), spacing_(spacing), wavelength_(wavelength)
    {
        if (n_h < 1 || n_v < 1)
            throw Error(ErrorCode::InvalidArgument, "array needs at least one row and one column");
        if (!(spacing > 0.0) || !std::isfinite(spacing))
            throw Error(ErrorCode::InvalidArgument, "element spacing must be positive");
        if (!(wavelength > 0.0) || !std::isfinite(wavelength))
            throw Error(ErrorCode::InvalidArgument, "wavelength must be positive");
    }

    // Square n x n array.
    static ArrayGeometry square(int n_side, double spacing, double wavelength)
    {
        return ArrayGeometry(n_side, n_side, spacing, wavelength);
    }

    int n_h() const noexcept { return n_h_; }
    int n_v() const noexcept { return n_v_; }
    double spacing() const noexcept { return spacing_; }
    double wavelength() const noexcept { return wavelength_; }
    int size() const noexcept { return n_h_ * n_v_; }
    double wavenumber() const noexcept { return 2.0 * pi / wavelength_; }

    // Zero-based horizontal / vertical indices of the 1-based element n.
    int horizontal_index(int n) const { return (check(n) - 1) % n_h_; }
    int vertical_index(int n) const { return (check(n) - 1) / n_h_; }

    bool operator==(const ArrayGeometry &) const = default;

private:
    int check(int n) const
    {
        if (n < 1 || n > size())
            throw Error(ErrorCode::IndexOutOfRange,
                        "element " + std::to_string(n) + " outside 1.." + std::to_string(size()));
        return n;
    }

    int n_h_;
    int n_v_;
    double spacing_;
    double wavelength_;
};

// r in meters, theta (elevation, from the xy-plane) and phi (azimuth, from
// the x-axis) in radians.
struct SphericalPoint
{
    double r = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    static SphericalPoint from_degrees(double r, double theta_deg, double phi_deg)
    {
        return SphericalPoint{r, deg_to_rad(theta_deg), deg_to_rad(phi_deg)};
    }

    bool valid() const noexcept
    {
        return std::isfinite(r) && r >= 0.0 && theta >= -pi / 2 && theta <= pi / 2 && phi > -pi && phi <= pi;
    }

    bool operator==(const SphericalPoint &) const = default;
};

struct FieldBoundaries
{
    double fresnel = 0.0;    // reactive / radiative near-field boundary
    double fraunhofer = 0.0; // radiative near field / far field boundary
    double aperture = 0.0;
};

inline Vec3 antenna_position(int n, const ArrayGeometry &geom)
{
    return Vec3(0.0, geom.horizontal_index(n) * geom.spacing(), geom.vertical_index(n) * geom.spacing());
}

// 3 x N matrix with one antenna position per column, element order n = 1..N.
inline Eigen::Matrix3Xd antenna_positions(const ArrayGeometry &geom)
{
    Eigen::Matrix3Xd out(3, geom.size());
    for (int n = 1; n <= geom.size(); ++n)
        out.col(n - 1) = antenna_position(n, geom);
    return out;
}

inline Vec3 spherical_to_cartesian(const SphericalPoint &p)
{
    const double ct = std::cos(p.theta);
    return p.r * Vec3(ct * std::cos(p.phi), ct * std::sin(p.phi), std::sin(p.theta));
}

// Inverse of spherical_to_cartesian. The origin maps to (0, 0, 0).
inline SphericalPoint cartesian_to_spherical(const Vec3 &v)
{
    const double r = v.norm();
    if (r == 0.0)
        return {};
    double theta = std::asin(std::clamp(v.z() / r, -1.0, 1.0));
    double phi = std::atan2(v.y(), v.x());
    if (phi <= -pi)
        phi = pi;
    return SphericalPoint{r, theta, phi};
}

// Aperture is the diagonal spacing * sqrt(n_h^2 + n_v^2).
inline FieldBoundaries field_boundaries(const ArrayGeometry &geom)
{
    const double nh = geom.n_h();
    const double nv = geom.n_v();
    const double aperture = geom.spacing() * std::sqrt(nh * nh + nv * nv);
    const double lambda = geom.wavelength();
    return FieldBoundaries{0.62 * std::sqrt(aperture * aperture * aperture / lambda),
                           2.0 * aperture * aperture / lambda, aperture};
}

// Point on the straight segment from `from` to `to` whose distance to the
// origin equals `range`. |p(t)|^2 is a convex quadratic in t, so the
// solution is the larger root; the range must lie between the two endpoint
// ranges and the segment must move away from the origin.
inline SphericalPoint point_on_segment_at_range(const SphericalPoint &from, const SphericalPoint &to, double range)
{
    const Vec3 a = spherical_to_cartesian(from);
    const Vec3 d = spherical_to_cartesian(to) - a;
    const double qa = d.squaredNorm();
    const double qb = 2.0 * a.dot(d);
    const double qc = a.squaredNorm() - range * range;
    if (qa == 0.0)
        throw Error(ErrorCode::InvalidArgument, "degenerate trajectory");
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0)
        throw Error(ErrorCode::InvalidArgument, "range not reached on trajectory");
    const double t = (-qb + std::sqrt(disc)) / (2.0 * qa);
    if (t < -1e-12 || t > 1.0 + 1e-12)
        throw Error(ErrorCode::InvalidArgument, "range " + std::to_string(range) + " m outside trajectory");
    SphericalPoint p = cartesian_to_spherical(a + t * d);
    p.r = range;
    return p;
}

} // namespace nfmimo

#endif
