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

#ifndef NFMIMO_CONSTELLATION_HPP
#define NFMIMO_CONSTELLATION_HPP

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace nfmimo
{

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// All squared magnitudes pairwise distinct.
inline bool check_identifiability(std::span<const double> levels)
{
    std::vector<double> energies(levels.size());
    std::transform(levels.begin(), levels.end(), energies.begin(), [](double x) { return x * x; });
    std::sort(energies.begin(), energies.end());
    return std::adjacent_find(energies.begin(), energies.end()) == energies.end();
}

// Unipolar amplitude constellation: sorted, nonnegative, first level 0,
// unit average energy, uniquely identifiable.
class Constellation
{
public:
    // Levels are rescaled to unit average energy before validation.
    static Constellation from_levels(std::vector<double> levels)
    {
        if (levels.size() < 2)
            throw Error(ErrorCode::InvalidArgument, "constellation needs at least two levels");
        double energy = 0.0;
        for (double x : levels)
        {
            if (!std::isfinite(x) || x < 0.0)
                throw Error(ErrorCode::InvalidArgument, "levels must be finite and nonnegative");
            energy += x * x;
        }
        energy /= static_cast<double>(levels.size());
        if (!(energy > 0.0))
            throw Error(ErrorCode::InvalidArgument, "constellation has zero energy");
        const double scale = 1.0 / std::sqrt(energy);
        for (double &x : levels)
            x *= scale;
        if (levels.front() != 0.0)
            throw Error(ErrorCode::InvalidArgument, "first level must be 0");
        if (!std::is_sorted(levels.begin(), levels.end()))
            throw Error(ErrorCode::InvalidArgument, "levels must be sorted ascending");
        if (!check_identifiability(levels))
            throw Error(ErrorCode::InvalidArgument, "levels are not uniquely identifiable");
        return Constellation(std::move(levels));
    }

    std::span<const double> levels() const noexcept { return levels_; }
    double level(std::size_t m) const { return levels_.at(m); }
    double energy(std::size_t m) const { return levels_.at(m) * levels_.at(m); }
    std::size_t order() const noexcept { return levels_.size(); }

    double average_energy() const
    {
        double e = 0.0;
        for (double x : levels_)
            e += x * x;
        return e / static_cast<double>(levels_.size());
    }

    bool operator==(const Constellation &) const = default;

private:
    explicit Constellation(std::vector<double> levels) : levels_(std::move(levels)) {}

    std::vector<double> levels_;
};

// a * (0, 1, ..., M-1) with a = sqrt(6 / ((M-1)(2M-1))), the unit-energy scale.
inline Constellation make_unipolar_pam(std::size_t order)
{
    if (order < 2)
        throw Error(ErrorCode::InvalidArgument, "PAM order must be at least 2");
    const double m = static_cast<double>(order);
    const double a = std::sqrt(6.0 / ((m - 1.0) * (2.0 * m - 1.0)));
    std::vector<double> levels(order);
    for (std::size_t i = 0; i < order; ++i)
        levels[i] = a * static_cast<double>(i);
    return Constellation::from_levels(std::move(levels));
}

enum class PowerMode
{
    EqualSinr,
    EqualSnr,
};

inline const char *to_string(PowerMode mode) noexcept
{
    return mode == PowerMode::EqualSinr ? "equal_sinr" : "equal_snr";
}

struct PowerControl
{
    std::vector<double> powers;
    double target = 0.0; // linear
    PowerMode mode = PowerMode::EqualSnr;
};

// SINR of user k: p_k tr(R_k) / (tr(R_z) + sum_{j != k} p_j tr(R_j)).
inline double sinr(std::span<const double> powers, std::span<const double> channel_traces, double noise_trace,
                   std::size_t k)
{
    double interference = 0.0;
    for (std::size_t j = 0; j < powers.size(); ++j)
        if (j != k)
            interference += powers[j] * channel_traces[j];
    return powers[k] * channel_traces[k] / (noise_trace + interference);
}

// EqualSinr: p_k = s / tr(R_k) with s = target tr(R_z) / (1 - target (K-1)),
// the unique positive solution giving every user the same SINR.
// EqualSnr: p_k = target tr(R_z) / tr(R_k), interference ignored.
inline PowerControl power_control(std::span<const double> channel_traces, double noise_trace, double target,
                                  PowerMode mode)
{
    if (channel_traces.empty())
        throw Error(ErrorCode::InvalidArgument, "power control needs at least one user");
    if (!(noise_trace > 0.0) || !(target > 0.0) || !std::isfinite(target))
        throw Error(ErrorCode::InvalidArgument, "noise trace and target must be positive");
    for (double t : channel_traces)
        if (!(t > 0.0) || !std::isfinite(t))
            throw Error(ErrorCode::InvalidArgument, "channel traces must be positive");

    const double k_users = static_cast<double>(channel_traces.size());
    double received = target * noise_trace;
    if (mode == PowerMode::EqualSinr)
    {
        const double load = target * (k_users - 1.0);
        if (load >= 1.0)
            throw Error(ErrorCode::InfeasibleSinr, "target SINR " + std::to_string(linear_to_db(target)) +
                                                       " dB not reachable with " +
                                                       std::to_string(channel_traces.size()) + " users");
        received /= 1.0 - load;
    }
    PowerControl pc;
    pc.target = target;
    pc.mode = mode;
    pc.powers.reserve(channel_traces.size());
    for (double t : channel_traces)
        pc.powers.push_back(received / t);
    return pc;
}

} // namespace nfmimo

#endif
