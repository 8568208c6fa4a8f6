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

#ifndef NFMIMO_EXPERIMENT_HPP
#define NFMIMO_EXPERIMENT_HPP

#include "channel.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "simulation.hpp"
#include "subspace.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace nfmimo
{

inline constexpr const char *version_string = "0.1.0";

inline constexpr const char *csv_columns = "experiment,sweep_name,sweep_value,model,detector,metric,value,ci95,seed,draws,trials";

struct ResultRow
{
    std::string experiment;
    std::string sweep_name;
    double sweep_value = 0.0;
    std::string model;
    std::string detector;
    std::string metric;
    double value = 0.0;
    double ci95 = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t draws = 0;
    std::uint64_t trials = 0;

    bool operator==(const ResultRow &) const = default;
};

// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string format_row(const ResultRow &r)
{
    std::string s;
    s.reserve(128);
    s += r.experiment;
    s += ',';
    s += r.sweep_name;
    s += ',';
    s += format_double(r.sweep_value);
    s += ',';
    s += r.model;
    s += ',';
    s += r.detector;
    s += ',';
    s += r.metric;
    s += ',';
    s += format_double(r.value);
    s += ',';
    s += format_double(r.ci95);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += std::to_string(r.draws);
    s += ',';
    s += std::to_string(r.trials);
    return s;
}

inline ResultRow parse_row(const std::string &line)
{
    std::vector<std::string> f;
    std::string cur;
    for (char ch : line)
    {
        if (ch == ',')
        {
            f.push_back(cur);
            cur.clear();
        }
        else
        {
            cur += ch;
        }
    }
    f.push_back(cur);
    if (f.size() != 11)
        throw Error(ErrorCode::ParseError, "result row needs 11 fields, got " + std::to_string(f.size()));

    auto to_double = [&](const std::string &s) {
        double v = 0.0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw Error(ErrorCode::ParseError, "bad number '" + s + "' in result row");
        return v;
    };
    auto to_uint = [&](const std::string &s) {
        std::uint64_t v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc() || res.ptr != s.data() + s.size())
            throw Error(ErrorCode::ParseError, "bad integer '" + s + "' in result row");
        return v;
    };
    ResultRow r{f[0], f[1], to_double(f[2]), f[3], f[4], f[5], to_double(f[6]), to_double(f[7]),
                to_uint(f[8]), to_uint(f[9]), to_uint(f[10])};
    if (!std::isfinite(r.value) || !(r.ci95 >= 0.0))
        throw Error(ErrorCode::ParseError, "result row value must be finite and ci95 nonnegative");
    return r;
}

namespace detail
{

inline const char *model_of(const std::string &detector)
{
    return detector == to_string(DetectorKind::SingleUserMismatched) ? "ff" : "nf";
}

inline double mean_ci95(const std::vector<double> &v, double &mean)
{
    mean = 0.0;
    for (double x : v)
        mean += x;
    mean /= static_cast<double>(v.size());
    if (v.size() < 2)
        return 0.0;
    double var = 0.0;
    for (double x : v)
        var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size() - 1);
    return 1.959963984540054 * std::sqrt(var / static_cast<double>(v.size()));
}

inline void spectrum_rows(const ExperimentConfig &c, std::vector<ResultRow> &rows)
{
    const Scenario s = to_scenario(c);
    for (int d = 0; d < s.scatterer_draws; ++d)
        for (std::size_t k = 0; k < s.ues.size(); ++k)
        {
            const UeSpec &ue = s.ues[k];
            const std::uint64_t seed = cluster_seed(s, d, k);
            ScatteringCluster cluster = draw_scatterers(ue.position, ue.cluster_radius, ue.scatterers, seed, s.cluster);
            if (!ue.gains.empty())
                cluster.gains = ue.gains;
            for (auto model : {CorrelationModel::NearField, CorrelationModel::FarField})
            {
                const CovarianceMatrix cov = build_covariance(cluster, s.geometry, model);
                const SubspaceBasis basis = dominant_eigs(cov, std::min<Eigen::Index>(cov.factor_rank(), cov.dimension()));
                for (Eigen::Index i = 0; i < basis.rank(); ++i)
                    rows.push_back(ResultRow{to_string(c.experiment), "eigen_index", static_cast<double>(i + 1),
                                             to_string(model), "ue" + std::to_string(k + 1), "eigenvalue",
                                             basis.eigenvalues[i], 0.0, seed, 1, 0});
            }
        }
}

inline void chordal_rows(const ExperimentConfig &c, std::vector<ResultRow> &rows)
{
    std::vector<int> sides = c.array_sides;
    if (sides.empty())
        sides.push_back(c.n_h); // the configured array when no list is given
    std::vector<double> values = c.sweep.values;
    const bool along_trajectory = c.sweep.axis == SweepAxis::Distance;
    if (!along_trajectory)
        values = {c.ues.front().position.r_m};

    for (int side : sides)
    {
        ExperimentConfig ci = c;
        if (!c.array_sides.empty())
            ci.n_h = ci.n_v = side;
        const std::string tag = std::to_string(ci.n_h) + "x" + std::to_string(ci.n_v);
        for (double r : values)
        {
            const Scenario s = along_trajectory ? to_scenario(ci, r) : to_scenario(ci);
            const UeSpec &ue = s.ues.front();
            std::vector<double> per_seed;
            for (int d = 0; d < s.scatterer_draws; ++d)
            {
                const std::uint64_t seed = cluster_seed(s, d, 0);
                ScatteringCluster cluster =
                    draw_scatterers(ue.position, ue.cluster_radius, ue.scatterers, seed, s.cluster);
                if (!ue.gains.empty())
                    cluster.gains = ue.gains;
                const CovarianceMatrix nf = build_covariance(cluster, s.geometry, CorrelationModel::NearField);
                const CovarianceMatrix ff = build_covariance(cluster, s.geometry, CorrelationModel::FarField);
                const Eigen::Index rank = std::min<Eigen::Index>(ue.scatterers, s.geometry.size());
                const double dist = normalized_chordal_distance(dominant_eigs(nf, rank), dominant_eigs(ff, rank));
                per_seed.push_back(dist);
                if (c.per_draw_rows)
                    rows.push_back(ResultRow{to_string(c.experiment), "distance_m", r, "nf_vs_ff", tag,
                                             "chordal_normalized", dist, 0.0, seed, 1, 0});
            }
            double mean = 0.0;
            const double ci95 = mean_ci95(per_seed, mean);
            rows.push_back(ResultRow{to_string(c.experiment), "distance_m", r, "nf_vs_ff", tag,
                                     "chordal_normalized_mean", mean, ci95, c.scatterer_seed,
                                     static_cast<std::uint64_t>(per_seed.size()), 0});
        }
    }
}

inline void ser_rows(const ExperimentConfig &c, unsigned workers, std::vector<ResultRow> &rows)
{
    std::vector<DetectorKind> kinds;
    for (const auto &name : c.detectors)
        kinds.push_back(detector_kind_from_string(name));

    std::vector<std::optional<double>> points;
    if (c.sweep.axis == SweepAxis::None)
        points.push_back(std::nullopt);
    else
        for (double v : c.sweep.values)
            points.push_back(v);

    for (const auto &point : points)
    {
        const Scenario s = to_scenario(c, point);
        const SerReport report = estimate_ser(s, std::span<const DetectorKind>(kinds), workers);
        const double x = point.value_or(0.0);
        const std::string axis = to_string(c.sweep.axis);
        const std::uint64_t draws = static_cast<std::uint64_t>(s.scatterer_draws);
        const bool multi = s.ues.size() > 1;

        auto emit = [&](const std::string &det, const SerEstimate &e, const std::string &suffix, std::uint64_t seed,
                        std::uint64_t n_draws) {
            const std::string exp = to_string(c.experiment);
            rows.push_back(ResultRow{exp, axis, x, model_of(det), det, "ser_joint" + suffix, e.joint_ser,
                                     e.wilson_95_halfwidth, seed, n_draws, e.trials});
            if (multi)
                for (std::size_t k = 0; k < e.per_user_ser.size(); ++k)
                    rows.push_back(ResultRow{exp, axis, x, model_of(det), det,
                                             "ser_user" + std::to_string(k + 1) + suffix, e.per_user_ser[k],
                                             e.per_user_halfwidth[k], seed, n_draws, e.trials});
        };

        for (const auto &name : c.detectors)
        {
            emit(name, report.pooled.at(name), "", c.symbol_seed, draws);
            if (c.per_draw_rows && s.scatterer_draws > 1)
                for (std::size_t d = 0; d < report.per_draw.size(); ++d)
                    emit(name, report.per_draw[d].at(name), "_draw", cluster_seed(s, static_cast<int>(d), 0), 1);
        }
    }
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace detail

// All result rows of an experiment, in a fixed order.
inline std::vector<ResultRow> compute_rows(const ExperimentConfig &c, unsigned workers = 0)
{
    validate_config(c);
    std::vector<ResultRow> rows;
    switch (c.experiment)
    {
    case ExperimentKind::Spectrum:
        detail::spectrum_rows(c, rows);
        break;
    case ExperimentKind::Chordal:
        detail::chordal_rows(c, rows);
        break;
    case ExperimentKind::SerDistance:
    case ExperimentKind::SerMultiuser:
    case ExperimentKind::Custom:
        detail::ser_rows(c, workers, rows);
        break;
    }
    return rows;
}

struct RunOptions
{
    unsigned workers = 0;
    bool timestamp = true;
};

// Header lines start with '#'. Everything after them (column line and rows)
// depends only on the configuration, never on worker count or wall clock.
inline void run_experiment(const ExperimentConfig &c, std::ostream &out, const RunOptions &opt = {})
{
    const std::vector<ResultRow> rows = compute_rows(c, opt.workers);
    out << "# nfmimo simulate " << version_string << '\n';
    if (opt.timestamp)
        out << "# generated " << detail::utc_timestamp() << '\n';
    out << "# seeds scatterer=" << c.scatterer_seed << " symbol=" << c.symbol_seed << '\n';
    out << "# config " << write_config(c, -1) << '\n';
    out << csv_columns << '\n';
    for (const auto &r : rows)
        out << format_row(r) << '\n';
}

// CSV body of a previously written file: the column line and the rows.
inline std::string csv_body(const std::string &text)
{
    std::istringstream in(text);
    std::string line;
    std::string body;
    while (std::getline(in, line))
        if (line.empty() || line.front() != '#')
            body += line + '\n';
    return body;
}

} // namespace nfmimo

#endif
