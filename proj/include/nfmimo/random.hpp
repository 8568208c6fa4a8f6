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

#ifndef NFMIMO_RANDOM_HPP
#define NFMIMO_RANDOM_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace nfmimo
{

using Engine = std::mt19937_64;

// Stream domains keep scatterer, symbol and auxiliary streams apart even when
// the caller reuses one seed for all of them.
enum class StreamDomain : std::uint64_t
{
    Scatterers = 0x5ca7,
    Trial = 0x7a1a,
    Auxiliary = 0xa0c5,
};

// Independent engine keyed by (seed, domain, keys...). The same key tuple
// always yields the same stream, whatever thread asks for it.
inline Engine make_stream(std::uint64_t seed, StreamDomain domain, std::initializer_list<std::uint64_t> keys = {})
{
    std::vector<std::uint32_t> words;
    words.reserve(4 + 2 * keys.size());
    auto push = [&words](std::uint64_t v) {
        words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    push(static_cast<std::uint64_t>(domain));
    for (auto k : keys)
        push(k);
    std::seed_seq seq(words.begin(), words.end());
    return Engine(seq);
}

// Circularly-symmetric complex Gaussian with unit variance, CN(0, 1).
class ComplexNormal
{
public:
    std::complex<double> operator()(Engine &rng) { return {dist_(rng), dist_(rng)}; }

    void fill(Engine &rng, Eigen::Ref<Eigen::VectorXcd> out)
    {
        for (Eigen::Index i = 0; i < out.size(); ++i)
            out[i] = (*this)(rng);
    }

private:
    std::normal_distribution<double> dist_{0.0, 0.70710678118654752440};
};

} // namespace nfmimo

#endif
