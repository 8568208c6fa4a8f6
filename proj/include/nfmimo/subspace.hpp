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

#ifndef NFMIMO_SUBSPACE_HPP
#define NFMIMO_SUBSPACE_HPP

#include "channel.hpp"
#include "errors.hpp"
#include "linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace nfmimo
{

// Orthonormal basis of a dominant eigenspace together with its eigenvalues
// (descending, nonnegative).
struct SubspaceBasis
{
    Eigen::MatrixXcd columns;
    Eigen::VectorXd eigenvalues;

    Eigen::Index ambient_dimension() const noexcept { return columns.rows(); }
    Eigen::Index rank() const noexcept { return columns.cols(); }
};

namespace detail
{

inline SubspaceBasis truncate(const EigenPairs &eig, Eigen::Index count)
{
    SubspaceBasis out;
    out.columns = eig.vectors.leftCols(count);
    out.eigenvalues = eig.values.head(count).cwiseMax(0.0);
    return out;
}

inline void require_same_shape(const SubspaceBasis &a, const SubspaceBasis &b)
{
    if (a.ambient_dimension() != b.ambient_dimension() || a.rank() != b.rank())
        throw Error(ErrorCode::DimensionMismatch, "subspaces must share ambient dimension and rank");
}

// Singular values of a^H b, clamped to [0, 1], descending.
inline Eigen::VectorXd principal_cosines(const SubspaceBasis &a, const SubspaceBasis &b)
{
    require_same_shape(a, b);
    if (a.rank() == 0)
        return Eigen::VectorXd(0);
    const Eigen::MatrixXcd cross = a.columns.adjoint() * b.columns;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cross);
    if (svd.info() != Eigen::Success)
        throw Error(ErrorCode::ConvergenceFailure, "SVD of cross-Gram matrix did not converge");
    return svd.singularValues().cwiseMax(0.0).cwiseMin(1.0);
}

} // namespace detail

// Top-`count` eigenpairs of a covariance matrix. Works on the N x L
// generator (thin SVD) whenever count <= L, which keeps N = 1024 and above
// cheap; otherwise falls back to the dense Hermitian solver.
inline SubspaceBasis dominant_eigs(const CovarianceMatrix &cov, Eigen::Index count)
{
    if (count < 0 || count > cov.dimension())
        throw Error(ErrorCode::DimensionMismatch, "requested rank exceeds matrix dimension");
    if (count <= cov.factor_rank())
        return detail::truncate(eigenpairs_from_factor(cov.factor()), count);
    return detail::truncate(hermitian_eigenpairs(cov.dense()), count);
}

// Dense route, kept as an independent cross-check of the factor route.
inline SubspaceBasis dominant_eigs_dense(const Eigen::MatrixXcd &matrix, Eigen::Index count)
{
    if (count < 0 || count > matrix.rows())
        throw Error(ErrorCode::DimensionMismatch, "requested rank exceeds matrix dimension");
    return detail::truncate(hermitian_eigenpairs(matrix), count);
}

// Principal angles in [0, pi/2], ascending.
inline std::vector<double> principal_angles(const SubspaceBasis &a, const SubspaceBasis &b)
{
    const Eigen::VectorXd cosines = detail::principal_cosines(a, b);
    std::vector<double> angles(static_cast<std::size_t>(cosines.size()));
    for (Eigen::Index i = 0; i < cosines.size(); ++i)
        angles[static_cast<std::size_t>(i)] = std::acos(cosines[i]);
    std::sort(angles.begin(), angles.end());
    return angles;
}

// sqrt(sum_i sin^2(alpha_i)); 0 for equal subspaces, sqrt(L) for orthogonal.
inline double chordal_distance(const SubspaceBasis &a, const SubspaceBasis &b)
{
    const Eigen::VectorXd cosines = detail::principal_cosines(a, b);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < cosines.size(); ++i)
        acc += 1.0 - cosines[i] * cosines[i];
    return std::sqrt(std::max(acc, 0.0));
}

// Chordal distance divided by its maximum sqrt(L).
inline double normalized_chordal_distance(const SubspaceBasis &a, const SubspaceBasis &b)
{
    if (a.rank() == 0)
        return 0.0;
    return chordal_distance(a, b) / std::sqrt(static_cast<double>(a.rank()));
}

} // namespace nfmimo

#endif
