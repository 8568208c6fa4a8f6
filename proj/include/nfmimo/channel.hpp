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

#ifndef NFMIMO_CHANNEL_HPP
#define NFMIMO_CHANNEL_HPP

#include "errors.hpp"
#include "geometry.hpp"
#include "linalg.hpp"
#include "random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace nfmimo
{

enum class CorrelationModel
{
    NearField, // spherical wavefront, exact distances
    FarField,  // planar wavefront, angles only
};

inline const char *to_string(CorrelationModel m) noexcept
{
    return m == CorrelationModel::NearField ? "nf" : "ff";
}

enum class SphereSampling
{
    Surface,
    Volume,
};

struct ClusterOptions
{
    SphereSampling sampling = SphereSampling::Volume;
    // Allow the scattering sphere to enclose the array origin. Needed for the
    // short-range end of the trajectory presets (1 m range, 3 m radius).
    bool allow_enclosing_array = false;

    bool operator==(const ClusterOptions &) const = default;
};

// Local scattering cluster around one UE.
struct ScatteringCluster
{
    SphericalPoint ue;
    double radius = 0.0;
    std::vector<Vec3> scatterers; // Cartesian positions
    std::vector<double> gains;

    std::size_t size() const noexcept { return scatterers.size(); }

    void validate() const
    {
        if (gains.size() != scatterers.size())
            throw Error(ErrorCode::InvalidArgument, "one gain per scatterer required");
        const Vec3 centre = spherical_to_cartesian(ue);
        for (std::size_t i = 0; i < scatterers.size(); ++i)
        {
            if (!(gains[i] > 0.0) || !std::isfinite(gains[i]))
                throw Error(ErrorCode::InvalidArgument, "path gains must be positive and finite");
            if ((scatterers[i] - centre).norm() > radius * (1.0 + 1e-12) + 1e-12)
                throw Error(ErrorCode::InvalidArgument, "scatterer outside cluster sphere");
        }
    }
};

// L scatterers uniform in the ball (or on its surface) of the given radius
// around the UE, equal gains 1/L.
inline ScatteringCluster draw_scatterers(const SphericalPoint &ue, double radius, int count, std::uint64_t seed,
                                         const ClusterOptions &options = {})
{
    if (!ue.valid())
        throw Error(ErrorCode::InvalidArgument, "invalid UE position");
    if (!(radius >= 0.0) || !std::isfinite(radius) || count < 0)
        throw Error(ErrorCode::InvalidArgument, "cluster radius and scatterer count must be nonnegative");
    if (!options.allow_enclosing_array && ue.r <= radius)
        throw Error(ErrorCode::ClusterContainsArray, "UE range " + std::to_string(ue.r) +
                                                         " m does not exceed cluster radius " +
                                                         std::to_string(radius) + " m");

    ScatteringCluster cluster;
    cluster.ue = ue;
    cluster.radius = radius;
    cluster.scatterers.reserve(static_cast<std::size_t>(count));
    cluster.gains.assign(static_cast<std::size_t>(count), count > 0 ? 1.0 / count : 0.0);

    const Vec3 centre = spherical_to_cartesian(ue);
    Engine rng = make_stream(seed, StreamDomain::Scatterers);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> uniform;
    for (int i = 0; i < count; ++i)
    {
        Vec3 dir;
        double norm = 0.0;
        do
        {
            dir = Vec3(normal(rng), normal(rng), normal(rng));
            norm = dir.norm();
        } while (norm < 1e-12);
        dir /= norm;
        double scale = radius;
        if (options.sampling == SphereSampling::Volume)
            scale *= std::cbrt(uniform(rng));
        cluster.scatterers.push_back(centre + scale * dir);
    }
    return cluster;
}

// Spherical-wavefront response, [a]_n = exp(-j k |s - u_n|).
inline Eigen::VectorXcd nf_response(const Vec3 &scatterer, const ArrayGeometry &geom)
{
    const int n_total = geom.size();
    const double k = geom.wavenumber();
    Eigen::VectorXcd a(n_total);
    for (int n = 0; n < n_total; ++n)
    {
        const double dy = scatterer.y() - (n % geom.n_h()) * geom.spacing();
        const double dz = scatterer.z() - (n / geom.n_h()) * geom.spacing();
        const double dist = std::sqrt(scatterer.x() * scatterer.x() + dy * dy + dz * dz);
        const double phase = -k * dist;
        a[n] = cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

inline Eigen::VectorXcd nf_response(const SphericalPoint &scatterer, const ArrayGeometry &geom)
{
    return nf_response(spherical_to_cartesian(scatterer), geom);
}

// Planar-wavefront response,
// [a]_n = exp(+j k spacing (i_n cos(theta) sin(phi) + j_n sin(theta))).
inline Eigen::VectorXcd ff_response(double theta, double phi, const ArrayGeometry &geom)
{
    const int n_total = geom.size();
    const double ks = geom.wavenumber() * geom.spacing();
    const double uh = std::cos(theta) * std::sin(phi);
    const double uv = std::sin(theta);
    Eigen::VectorXcd a(n_total);
    for (int n = 0; n < n_total; ++n)
    {
        const double phase = ks * ((n % geom.n_h()) * uh + (n / geom.n_h()) * uv);
        a[n] = cplx(std::cos(phase), std::sin(phase));
    }
    return a;
}

// Spatial correlation matrix R = F F^H held through its N x r generator F.
// For a scattering cluster the columns of F are sqrt(beta_i) a_i, so r = L
// and the dense N x N matrix is only materialised on request.
class CovarianceMatrix
{
public:
    CovarianceMatrix(Eigen::MatrixXcd factor, CorrelationModel model) : factor_(std::move(factor)), model_(model)
    {
        if (!factor_.allFinite())
            throw Error(ErrorCode::NonFiniteInput, "covariance factor has non-finite entries");
    }

    // Factor a dense Hermitian PSD matrix. Eigenvalues at or below
    // 1e-14 * largest are dropped.
    static CovarianceMatrix from_dense(const Eigen::MatrixXcd &dense, CorrelationModel model)
    {
        const EigenPairs eig = hermitian_eigenpairs(dense);
        const double cutoff = 1e-14 * std::max(0.0, eig.values.size() ? eig.values[0] : 0.0);
        Eigen::Index rank = 0;
        while (rank < eig.values.size() && eig.values[rank] > cutoff)
            ++rank;
        Eigen::MatrixXcd factor = eig.vectors.leftCols(rank) * eig.values.head(rank).cwiseSqrt().asDiagonal();
        if (rank == 0)
            factor.resize(dense.rows(), 0);
        return CovarianceMatrix(std::move(factor), model);
    }

    Eigen::Index dimension() const noexcept { return factor_.rows(); }
    Eigen::Index factor_rank() const noexcept { return factor_.cols(); }
    const Eigen::MatrixXcd &factor() const noexcept { return factor_; }
    CorrelationModel model() const noexcept { return model_; }
    double trace() const { return factor_.squaredNorm(); }

    Eigen::MatrixXcd dense() const { return factor_ * factor_.adjoint(); }

private:
    Eigen::MatrixXcd factor_;
    CorrelationModel model_;
};

// R = sum_i beta_i a_i a_i^H. Far-field responses use each scatterer's own
// angles as seen from the array origin.
inline CovarianceMatrix build_covariance(const ScatteringCluster &cluster, const ArrayGeometry &geom,
                                         CorrelationModel model)
{
    if (cluster.size() == 0)
        throw Error(ErrorCode::InvalidArgument, "covariance needs at least one scatterer");
    if (cluster.gains.size() != cluster.size())
        throw Error(ErrorCode::InvalidArgument, "one gain per scatterer required");
    Eigen::MatrixXcd factor(geom.size(), static_cast<Eigen::Index>(cluster.size()));
    for (std::size_t i = 0; i < cluster.size(); ++i)
    {
        const double amp = std::sqrt(cluster.gains[i]);
        if (model == CorrelationModel::NearField)
        {
            factor.col(static_cast<Eigen::Index>(i)) = amp * nf_response(cluster.scatterers[i], geom);
        }
        else
        {
            const SphericalPoint dir = cartesian_to_spherical(cluster.scatterers[i]);
            factor.col(static_cast<Eigen::Index>(i)) = amp * ff_response(dir.theta, dir.phi, geom);
        }
    }
    return CovarianceMatrix(std::move(factor), model);
}

// Draws h ~ CN(0, R) as h = U diag(sqrt(lambda)) w over the nonzero
// eigenpairs of R, w ~ CN(0, I).
class ChannelSampler
{
public:
    explicit ChannelSampler(const CovarianceMatrix &cov)
    {
        const EigenPairs eig = eigenpairs_from_factor(cov.factor());
        Eigen::Index rank = 0;
        while (rank < eig.values.size() && eig.values[rank] > 0.0)
            ++rank;
        coloring_ = eig.vectors.leftCols(rank) * eig.values.head(rank).cwiseSqrt().asDiagonal();
        if (rank == 0)
            coloring_.resize(cov.dimension(), 0);
    }

    Eigen::Index dimension() const noexcept { return coloring_.rows(); }
    Eigen::Index rank() const noexcept { return coloring_.cols(); }

    void draw(Engine &rng, ComplexNormal &normal, Eigen::Ref<Eigen::VectorXcd> out) const
    {
        Eigen::VectorXcd w(coloring_.cols());
        normal.fill(rng, w);
        out.noalias() = coloring_ * w;
    }

    Eigen::VectorXcd draw(Engine &rng) const
    {
        ComplexNormal normal;
        Eigen::VectorXcd h(dimension());
        draw(rng, normal, h);
        return h;
    }

private:
    Eigen::MatrixXcd coloring_;
};

inline Eigen::VectorXcd sample_channel(const CovarianceMatrix &cov, std::uint64_t seed)
{
    Engine rng = make_stream(seed, StreamDomain::Auxiliary);
    return ChannelSampler(cov).draw(rng);
}

// Debug dump, one matrix row per line as "re,im" pairs.
inline void write_covariance_csv(std::ostream &os, const CovarianceMatrix &cov)
{
    const Eigen::MatrixXcd r = cov.dense();
    const auto old_precision = os.precision(17);
    for (Eigen::Index i = 0; i < r.rows(); ++i)
    {
        for (Eigen::Index j = 0; j < r.cols(); ++j)
        {
            if (j)
                os << ',';
            os << r(i, j).real() << ',' << r(i, j).imag();
        }
        os << '\n';
    }
    os.precision(old_precision);
}

} // namespace nfmimo

#endif
