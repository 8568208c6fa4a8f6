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

#ifndef NFMIMO_TEST_SUPPORT_HPP
#define NFMIMO_TEST_SUPPORT_HPP

#include <nfmimo/channel.hpp>
#include <nfmimo/geometry.hpp>
#include <nfmimo/random.hpp>

#include <Eigen/Dense>

#include <random>

namespace nfmimo::test
{

// Random complex Gaussian matrix from a plain seeded engine.
inline Eigen::MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n;
    Eigen::MatrixXcd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i)
            m(i, j) = {n(rng), n(rng)};
    return m;
}

inline Eigen::MatrixXcd orthonormal_columns(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed)
{
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(random_matrix(rows, cols, seed));
    return qr.householderQ() * Eigen::MatrixXcd::Identity(rows, cols);
}

inline double rel_frobenius(const Eigen::MatrixXcd &a, const Eigen::MatrixXcd &b)
{
    return (a - b).norm() / b.norm();
}

} // namespace nfmimo::test

#endif
