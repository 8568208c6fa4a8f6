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

#ifndef NFMIMO_LINALG_HPP
#define NFMIMO_LINALG_HPP

#include "errors.hpp"

#include <Eigen/Dense>

#include <complex>

namespace nfmimo
{

using cplx = std::complex<double>;

// Eigenpairs of a Hermitian PSD matrix, eigenvalues in descending order.
struct EigenPairs
{
    Eigen::MatrixXcd vectors;
    Eigen::VectorXd values;
};

// Eigenpairs of R = F F^H through the thin SVD of F. Cost is O(N r^2) for an
// N x r factor and the accuracy of the small eigenvalues is that of the SVD,
// not of R itself.
inline EigenPairs eigenpairs_from_factor(const Eigen::MatrixXcd &factor)
{
    EigenPairs out;
    if (factor.cols() == 0)
    {
        out.vectors.resize(factor.rows(), 0);
        out.values.resize(0);
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(factor, Eigen::ComputeThinU);
    if (svd.info() != Eigen::Success)
        throw Error(ErrorCode::ConvergenceFailure, "SVD of covariance factor did not converge");
    // JacobiSVD already sorts singular values in decreasing order.
    out.vectors = svd.matrixU();
    out.values = svd.singularValues().array().square();
    return out;
}

// Full eigendecomposition of a dense Hermitian matrix, descending order.
inline EigenPairs hermitian_eigenpairs(const Eigen::MatrixXcd &matrix)
{
    if (matrix.rows() != matrix.cols())
        throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
    EigenPairs out;
    out.vectors = solver.eigenvectors().rowwise().reverse();
    out.values = solver.eigenvalues().reverse();
    return out;
}

} // namespace nfmimo

#endif
