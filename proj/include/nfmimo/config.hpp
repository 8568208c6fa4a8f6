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

#ifndef NFMIMO_CONFIG_HPP
#define NFMIMO_CONFIG_HPP

// Experiment configuration: a JSON document with strict key checking.
// Angles are degrees here and converted to radians when a Scenario is built.

#include "channel.hpp"
#include "constellation.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "simulation.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace nfmimo
{

enum class ExperimentKind
{
    Spectrum,
    Chordal,
    SerDistance,
    SerMultiuser,
    Custom,
};

enum class SweepAxis
{
    None,
    Distance, // UE range along the trajectory, meters
    ArraySize, // total element count N of a square array
    SnrDb,    // power target in dB
};

inline const char *to_string(ExperimentKind k) noexcept
{
    switch (k)
    {
    case ExperimentKind::Spectrum:
        return "spectrum";
    case ExperimentKind::Chordal:
        return "chordal";
    case ExperimentKind::SerDistance:
        return "ser_distance";
    case ExperimentKind::SerMultiuser:
        return "ser_multiuser";
    case ExperimentKind::Custom:
        return "custom";
    }
    return "unknown";
}

inline const char *to_string(SweepAxis a) noexcept
{
    switch (a)
    {
    case SweepAxis::None:
        return "none";
    case SweepAxis::Distance:
        return "distance_m";
    case SweepAxis::ArraySize:
        return "n";
    case SweepAxis::SnrDb:
        return "snr_db";
    }
    return "unknown";
}

inline const char *to_string(SphereSampling s) noexcept
{
    return s == SphereSampling::Surface ? "surface" : "volume";
}

struct PositionConfig
{
    double r_m = 0.0;
    double theta_deg = 0.0;
    double phi_deg = 0.0;

    SphericalPoint to_point() const { return SphericalPoint::from_degrees(r_m, theta_deg, phi_deg); }
    bool operator==(const PositionConfig &) const = default;
};

struct UeConfig
{
    PositionConfig position;
    double cluster_radius_m = 3.0;
    int scatterers = 10;
    std::vector<double> gains;

    bool operator==(const UeConfig &) const = default;
};

struct TrajectoryConfig
{
    PositionConfig from;
    PositionConfig to;

    bool operator==(const TrajectoryConfig &) const = default;
};

struct SweepConfig
{
    SweepAxis axis = SweepAxis::None;
    std::vector<double> values;

    bool operator==(const SweepConfig &) const = default;
};

struct ExperimentConfig
{
    ExperimentKind experiment = ExperimentKind::Custom;
    int n_h = 16;
    int n_v = 16;
    double spacing_m = 0.01;
    double wavelength_m = 0.01;
    std::vector<UeConfig> ues;
    std::optional<TrajectoryConfig> trajectory;
    int constellation_order = 4;
    std::vector<double> constellation_levels; // empty: uniform unipolar PAM
    PowerMode power_mode = PowerMode::EqualSnr;
    double target_db = 20.0;
    double noise_power = 1.0;
    SphereSampling sampling = SphereSampling::Volume;
    bool allow_enclosing_cluster = false;
    std::uint64_t scatterer_seed = 1;
    std::uint64_t symbol_seed = 2;
    int scatterer_draws = 20;
    int trials_per_draw = 50000;
    SweepConfig sweep;
    std::vector<int> array_sides; // extra square apertures (chordal)
    std::vector<std::string> detectors;
    bool per_draw_rows = true;
    std::string output;
    unsigned workers = 0;

    bool operator==(const ExperimentConfig &) const = default;
};

inline std::vector<double> log_spaced(double from, double to, int points)
{
    if (points < 1 || !(from > 0.0) || !(to > 0.0))
        throw Error(ErrorCode::ValidationError, "log grid needs positive bounds and at least one point");
    std::vector<double> out;
    if (points == 1)
        return {from};
    const double a = std::log10(from);
    const double b = std::log10(to);
    for (int i = 0; i < points; ++i)
        out.push_back(std::pow(10.0, a + (b - a) * i / (points - 1)));
    out.back() = to;
    out.front() = from;
    return out;
}

inline TrajectoryConfig default_trajectory()
{
    return TrajectoryConfig{PositionConfig{1.0, -30.0, -10.0}, PositionConfig{200.0, -0.15, -10.0}};
}

// Defaults for each experiment family, sized to run on a desktop.
inline ExperimentConfig preset_config(ExperimentKind kind)
{
    ExperimentConfig c;
    c.experiment = kind;
    switch (kind)
    {
    case ExperimentKind::Spectrum:
        c.ues = {UeConfig{{5.0, -30.0, -10.0}, 3.0, 10, {}}, UeConfig{{5.0, -20.0, 0.0}, 3.0, 10, {}},
                 UeConfig{{25.0, -10.0, 10.0}, 3.0, 10, {}}};
        c.scatterer_draws = 1;
        c.trials_per_draw = 1;
        break;
    case ExperimentKind::Chordal:
        c.ues = {UeConfig{{1.0, -30.0, -10.0}, 3.0, 10, {}}};
        c.trajectory = default_trajectory();
        c.allow_enclosing_cluster = true;
        c.sweep = SweepConfig{SweepAxis::Distance, log_spaced(1.0, 200.0, 10)};
        c.array_sides = {16, 24, 32};
        c.trials_per_draw = 1;
        break;
    case ExperimentKind::SerDistance:
        c.ues = {UeConfig{{1.0, -30.0, -10.0}, 3.0, 10, {}}};
        c.trajectory = default_trajectory();
        c.allow_enclosing_cluster = true;
        c.sweep = SweepConfig{SweepAxis::Distance, log_spaced(1.0, 200.0, 20)};
        c.detectors = {"su_exact", "su_mismatched"};
        break;
    case ExperimentKind::SerMultiuser:
        c.ues = {UeConfig{{5.0, -30.0, -20.0}, 1.0, 10, {}}, UeConfig{{10.0, -25.0, -10.0}, 1.0, 10, {}},
                 UeConfig{{15.0, -20.0, 0.0}, 1.0, 10, {}}, UeConfig{{20.0, -15.0, 10.0}, 1.0, 10, {}},
                 UeConfig{{25.0, -10.0, 20.0}, 1.0, 10, {}}};
        c.sweep = SweepConfig{SweepAxis::ArraySize, {64.0, 144.0, 256.0, 400.0}};
        c.detectors = {"su_exact", "su_alone", "su_mismatched"};
        c.trials_per_draw = 20000;
        break;
    case ExperimentKind::Custom:
        c.ues = {UeConfig{{10.0, -20.0, 0.0}, 3.0, 10, {}}};
        c.detectors = {"su_exact"};
        break;
    }
    return c;
}

inline ExperimentKind experiment_kind_from_string(const std::string &s)
{
    for (auto k : {ExperimentKind::Spectrum, ExperimentKind::Chordal, ExperimentKind::SerDistance,
                   ExperimentKind::SerMultiuser, ExperimentKind::Custom})
        if (s == to_string(k))
            return k;
    throw Error(ErrorCode::ValidationError, "experiment: unknown value '" + s + "'");
}

inline Constellation make_constellation(const ExperimentConfig &c)
{
    if (c.constellation_levels.empty())
        return make_unipolar_pam(static_cast<std::size_t>(c.constellation_order));
    return Constellation::from_levels(c.constellation_levels);
}

inline bool is_perfect_square(double n, int &side)
{
    if (!(n >= 1.0) || n != std::floor(n))
        return false;
    side = static_cast<int>(std::lround(std::sqrt(n)));
    return side * side == static_cast<int>(n);
}

// Scenario for one sweep point (or the base scenario when the axis is None).
inline Scenario to_scenario(const ExperimentConfig &c, std::optional<double> sweep_value = std::nullopt)
{
    Scenario s;
    int n_h = c.n_h;
    int n_v = c.n_v;
    double target_db = c.target_db;
    std::vector<UeSpec> ues;
    for (const auto &u : c.ues)
        ues.push_back(UeSpec{u.position.to_point(), u.cluster_radius_m, u.scatterers, u.gains});

    if (sweep_value)
    {
        switch (c.sweep.axis)
        {
        case SweepAxis::Distance:
            if (!c.trajectory)
                throw Error(ErrorCode::ValidationError, "sweep.axis=distance requires a trajectory");
            ues.at(0).position = point_on_segment_at_range(c.trajectory->from.to_point(), c.trajectory->to.to_point(),
                                                           *sweep_value);
            break;
        case SweepAxis::ArraySize: {
            int side = 0;
            if (!is_perfect_square(*sweep_value, side))
                throw Error(ErrorCode::ValidationError, "sweep.values: array sizes must be perfect squares");
            n_h = n_v = side;
            break;
        }
        case SweepAxis::SnrDb:
            target_db = *sweep_value;
            break;
        case SweepAxis::None:
            break;
        }
    }

    s.geometry = ArrayGeometry(n_h, n_v, c.spacing_m, c.wavelength_m);
    s.ues = std::move(ues);
    s.constellation = make_constellation(c);
    s.power_mode = c.power_mode;
    s.target_db = target_db;
    s.noise_power = c.noise_power;
    s.scatterer_seed = c.scatterer_seed;
    s.symbol_seed = c.symbol_seed;
    s.scatterer_draws = c.scatterer_draws;
    s.trials_per_draw = c.trials_per_draw;
    s.cluster = ClusterOptions{c.sampling, c.allow_enclosing_cluster};
    return s;
}

inline void validate_config(const ExperimentConfig &c)
{
    auto fail = [](const std::string &msg) { throw Error(ErrorCode::ValidationError, msg); };
    if (c.ues.empty())
        fail("ues: at least one UE required");
    if (c.scatterer_draws < 1)
        fail("counts.scatterer_draws must be >= 1");
    if (c.trials_per_draw < 1)
        fail("counts.trials_per_draw must be >= 1");
    if (c.constellation_order < 2)
        fail("constellation.order must be >= 2");
    if (!c.constellation_levels.empty() && c.constellation_levels.size() != static_cast<std::size_t>(c.constellation_order))
        fail("constellation.levels must have 'order' entries");
    if (c.sweep.axis != SweepAxis::None)
    {
        if (c.sweep.values.empty())
            fail("sweep.values must be nonempty");
        for (std::size_t i = 1; i < c.sweep.values.size(); ++i)
            if (!(c.sweep.values[i] > c.sweep.values[i - 1]))
                fail("sweep.values must be strictly increasing");
        for (double v : c.sweep.values)
            if (!std::isfinite(v))
                fail("sweep.values must be finite");
    }
    else if (!c.sweep.values.empty())
    {
        fail("sweep.values given without an axis");
    }
    if (c.sweep.axis == SweepAxis::Distance)
    {
        if (!c.trajectory)
            fail("sweep.axis=distance requires a trajectory");
        if (c.ues.size() != 1)
            fail("sweep.axis=distance supports exactly one UE");
    }
    if (c.sweep.axis == SweepAxis::ArraySize)
        for (double v : c.sweep.values)
        {
            int side = 0;
            if (!is_perfect_square(v, side))
                fail("sweep.values: array sizes must be perfect squares");
        }
    for (int side : c.array_sides)
        if (side < 1)
            fail("arrays: side lengths must be >= 1");
    for (const auto &d : c.detectors)
        detector_kind_from_string(d);
    if ((c.experiment == ExperimentKind::SerDistance || c.experiment == ExperimentKind::SerMultiuser ||
         c.experiment == ExperimentKind::Custom) &&
        c.detectors.empty())
        fail("detectors: at least one detector required");
    for (const auto &u : c.ues)
        if (!u.position.to_point().valid() || !(u.position.r_m > 0.0))
            fail("ues: position out of range (r > 0, theta in [-90, 90], phi in (-180, 180])");

    // Builds every sweep point, which checks geometry, constellation and
    // power feasibility.
    auto check = [&](const Scenario &s) {
        s.validate();
        if (!c.allow_enclosing_cluster)
            for (const auto &ue : s.ues)
                if (ue.position.r <= ue.cluster_radius)
                    fail("ues: cluster radius " + std::to_string(ue.cluster_radius) + " m reaches the array at range " +
                         std::to_string(ue.position.r) + " m (set allow_enclosing_cluster to permit)");
    };
    if (c.sweep.axis == SweepAxis::None)
        check(to_scenario(c));
    else
        for (double v : c.sweep.values)
            check(to_scenario(c, v));
}

namespace detail
{

using nlohmann::json;

inline void check_keys(const json &obj, const std::string &path, std::initializer_list<const char *> allowed)
{
    if (!obj.is_object())
        throw Error(ErrorCode::ValidationError, path + ": expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto &item : obj.items())
        if (!keys.count(item.key()))
            throw Error(ErrorCode::ValidationError,
                        "unknown field '" + (path.empty() ? item.key() : path + "." + item.key()) + "'");
}

template <typename T>
T get_as(const json &v, const std::string &path)
{
    try
    {
        if constexpr (std::is_same_v<T, double>)
        {
            if (!v.is_number())
                throw Error(ErrorCode::ValidationError, path + ": expected a number");
        }
        else if constexpr (std::is_integral_v<T> && !std::is_same_v<T, bool>)
        {
            if (!v.is_number_integer() && !v.is_number_unsigned())
                throw Error(ErrorCode::ValidationError, path + ": expected an integer");
            if constexpr (std::is_unsigned_v<T>)
                if (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)
                    throw Error(ErrorCode::ValidationError, path + ": expected a nonnegative integer");
            if constexpr (std::is_signed_v<T>)
                if (v.is_number_unsigned() ? v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max())
                                           : v.get<std::int64_t>() < std::numeric_limits<T>::min() ||
                                                 v.get<std::int64_t>() > std::numeric_limits<T>::max())
                    throw Error(ErrorCode::ValidationError, path + ": integer out of range");
        }
        else if constexpr (std::is_same_v<T, bool>)
        {
            if (!v.is_boolean())
                throw Error(ErrorCode::ValidationError, path + ": expected true or false");
        }
        else if constexpr (std::is_same_v<T, std::string>)
        {
            if (!v.is_string())
                throw Error(ErrorCode::ValidationError, path + ": expected a string");
        }
        return v.get<T>();
    }
    catch (const json::exception &e)
    {
        throw Error(ErrorCode::ValidationError, path + ": " + e.what());
    }
}

template <typename T>
void read(const json &obj, const char *key, const std::string &path, T &out)
{
    if (obj.contains(key))
        out = get_as<T>(obj.at(key), path.empty() ? std::string(key) : path + "." + key);
}

template <typename T>
void read_list(const json &obj, const char *key, const std::string &path, std::vector<T> &out)
{
    if (!obj.contains(key))
        return;
    const std::string p = path.empty() ? std::string(key) : path + "." + key;
    const json &arr = obj.at(key);
    if (!arr.is_array())
        throw Error(ErrorCode::ValidationError, p + ": expected an array");
    out.clear();
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(get_as<T>(arr[i], p + "[" + std::to_string(i) + "]"));
}

inline PositionConfig read_position(const json &obj, const std::string &path, PositionConfig base = {})
{
    check_keys(obj, path, {"r_m", "theta_deg", "phi_deg"});
    read(obj, "r_m", path, base.r_m);
    read(obj, "theta_deg", path, base.theta_deg);
    read(obj, "phi_deg", path, base.phi_deg);
    return base;
}

inline json position_json(const PositionConfig &p)
{
    return json{{"r_m", p.r_m}, {"theta_deg", p.theta_deg}, {"phi_deg", p.phi_deg}};
}

inline std::string line_context(const std::string &text, std::size_t byte)
{
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i)
    {
        if (text[i] == '\n')
        {
            ++line;
            col = 1;
        }
        else
        {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

// Parses and validates a configuration document. Missing fields take the
// defaults of the chosen experiment preset.
inline ExperimentConfig parse_config(const std::string &text)
{
    using detail::json;
    json doc;
    try
    {
        doc = json::parse(text);
    }
    catch (const json::parse_error &e)
    {
        throw Error(ErrorCode::ParseError, detail::line_context(text, e.byte) + ": " + e.what());
    }
    detail::check_keys(doc, "",
                       {"experiment", "array", "ues", "trajectory", "constellation", "power", "noise_power",
                        "sampling", "allow_enclosing_cluster", "seeds", "counts", "sweep", "arrays", "detectors",
                        "per_draw_rows", "output", "workers"});
    if (!doc.contains("experiment"))
        throw Error(ErrorCode::ValidationError, "experiment: field is required");
    ExperimentConfig c = preset_config(experiment_kind_from_string(detail::get_as<std::string>(doc["experiment"], "experiment")));

    if (doc.contains("array"))
    {
        const json &a = doc["array"];
        detail::check_keys(a, "array", {"n_h", "n_v", "spacing_m", "wavelength_m"});
        detail::read(a, "n_h", "array", c.n_h);
        detail::read(a, "n_v", "array", c.n_v);
        detail::read(a, "spacing_m", "array", c.spacing_m);
        detail::read(a, "wavelength_m", "array", c.wavelength_m);
    }
    if (doc.contains("ues"))
    {
        const json &list = doc["ues"];
        if (!list.is_array())
            throw Error(ErrorCode::ValidationError, "ues: expected an array");
        const double default_radius = c.ues.empty() ? 3.0 : c.ues.front().cluster_radius_m;
        const int default_scatterers = c.ues.empty() ? 10 : c.ues.front().scatterers;
        c.ues.clear();
        for (std::size_t i = 0; i < list.size(); ++i)
        {
            const std::string path = "ues[" + std::to_string(i) + "]";
            const json &u = list[i];
            detail::check_keys(u, path, {"position", "cluster_radius_m", "scatterers", "gains"});
            UeConfig ue;
            ue.cluster_radius_m = default_radius;
            ue.scatterers = default_scatterers;
            if (!u.contains("position"))
                throw Error(ErrorCode::ValidationError, path + ".position: field is required");
            ue.position = detail::read_position(u["position"], path + ".position");
            detail::read(u, "cluster_radius_m", path, ue.cluster_radius_m);
            detail::read(u, "scatterers", path, ue.scatterers);
            detail::read_list(u, "gains", path, ue.gains);
            c.ues.push_back(std::move(ue));
        }
    }
    if (doc.contains("trajectory"))
    {
        const json &t = doc["trajectory"];
        if (t.is_null())
        {
            c.trajectory.reset();
        }
        else
        {
            detail::check_keys(t, "trajectory", {"from", "to"});
            TrajectoryConfig tr = c.trajectory.value_or(default_trajectory());
            if (t.contains("from"))
                tr.from = detail::read_position(t["from"], "trajectory.from", tr.from);
            if (t.contains("to"))
                tr.to = detail::read_position(t["to"], "trajectory.to", tr.to);
            c.trajectory = tr;
        }
    }
    if (doc.contains("constellation"))
    {
        const json &k = doc["constellation"];
        detail::check_keys(k, "constellation", {"order", "levels"});
        detail::read(k, "order", "constellation", c.constellation_order);
        detail::read_list(k, "levels", "constellation", c.constellation_levels);
        if (!k.contains("order") && !c.constellation_levels.empty())
            c.constellation_order = static_cast<int>(c.constellation_levels.size());
    }
    if (doc.contains("power"))
    {
        const json &p = doc["power"];
        detail::check_keys(p, "power", {"mode", "target_db"});
        if (p.contains("mode"))
        {
            const auto mode = detail::get_as<std::string>(p["mode"], "power.mode");
            if (mode == "equal_snr")
                c.power_mode = PowerMode::EqualSnr;
            else if (mode == "equal_sinr")
                c.power_mode = PowerMode::EqualSinr;
            else
                throw Error(ErrorCode::ValidationError, "power.mode: unknown value '" + mode + "'");
        }
        detail::read(p, "target_db", "power", c.target_db);
    }
    detail::read(doc, "noise_power", "", c.noise_power);
    if (doc.contains("sampling"))
    {
        const auto s = detail::get_as<std::string>(doc["sampling"], "sampling");
        if (s == "surface")
            c.sampling = SphereSampling::Surface;
        else if (s == "volume")
            c.sampling = SphereSampling::Volume;
        else
            throw Error(ErrorCode::ValidationError, "sampling: unknown value '" + s + "'");
    }
    detail::read(doc, "allow_enclosing_cluster", "", c.allow_enclosing_cluster);
    if (doc.contains("seeds"))
    {
        const json &s = doc["seeds"];
        detail::check_keys(s, "seeds", {"scatterer", "symbol"});
        detail::read(s, "scatterer", "seeds", c.scatterer_seed);
        detail::read(s, "symbol", "seeds", c.symbol_seed);
    }
    if (doc.contains("counts"))
    {
        const json &s = doc["counts"];
        detail::check_keys(s, "counts", {"scatterer_draws", "trials_per_draw"});
        detail::read(s, "scatterer_draws", "counts", c.scatterer_draws);
        detail::read(s, "trials_per_draw", "counts", c.trials_per_draw);
    }
    if (doc.contains("sweep"))
    {
        const json &s = doc["sweep"];
        detail::check_keys(s, "sweep", {"axis", "values", "log_from", "log_to", "points"});
        if (s.contains("axis"))
        {
            const auto axis = detail::get_as<std::string>(s["axis"], "sweep.axis");
            if (axis == "none")
                c.sweep.axis = SweepAxis::None;
            else if (axis == "distance" || axis == "distance_m")
                c.sweep.axis = SweepAxis::Distance;
            else if (axis == "n")
                c.sweep.axis = SweepAxis::ArraySize;
            else if (axis == "snr_db")
                c.sweep.axis = SweepAxis::SnrDb;
            else
                throw Error(ErrorCode::ValidationError, "sweep.axis: unknown value '" + axis + "'");
            c.sweep.values.clear();
        }
        if (s.contains("values") && (s.contains("log_from") || s.contains("log_to") || s.contains("points")))
            throw Error(ErrorCode::ValidationError, "sweep: give either 'values' or a log grid, not both");
        detail::read_list(s, "values", "sweep", c.sweep.values);
        if (s.contains("log_from") || s.contains("log_to") || s.contains("points"))
        {
            double from = 1.0;
            double to = 200.0;
            int points = 10;
            detail::read(s, "log_from", "sweep", from);
            detail::read(s, "log_to", "sweep", to);
            detail::read(s, "points", "sweep", points);
            c.sweep.values = log_spaced(from, to, points);
        }
    }
    detail::read_list(doc, "arrays", "", c.array_sides);
    detail::read_list(doc, "detectors", "", c.detectors);
    detail::read(doc, "per_draw_rows", "", c.per_draw_rows);
    detail::read(doc, "output", "", c.output);
    detail::read(doc, "workers", "", c.workers);

    validate_config(c);
    return c;
}

inline ExperimentConfig load_config(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::ParseError, "cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

inline nlohmann::json config_to_json(const ExperimentConfig &c)
{
    using detail::json;
    json doc;
    doc["experiment"] = to_string(c.experiment);
    doc["array"] = json{{"n_h", c.n_h}, {"n_v", c.n_v}, {"spacing_m", c.spacing_m}, {"wavelength_m", c.wavelength_m}};
    json ues = json::array();
    for (const auto &u : c.ues)
        ues.push_back(json{{"position", detail::position_json(u.position)},
                           {"cluster_radius_m", u.cluster_radius_m},
                           {"scatterers", u.scatterers},
                           {"gains", u.gains}});
    doc["ues"] = ues;
    if (c.trajectory)
        doc["trajectory"] =
            json{{"from", detail::position_json(c.trajectory->from)}, {"to", detail::position_json(c.trajectory->to)}};
    else
        doc["trajectory"] = nullptr;
    doc["constellation"] = json{{"order", c.constellation_order}, {"levels", c.constellation_levels}};
    doc["power"] = json{{"mode", to_string(c.power_mode)}, {"target_db", c.target_db}};
    doc["noise_power"] = c.noise_power;
    doc["sampling"] = to_string(c.sampling);
    doc["allow_enclosing_cluster"] = c.allow_enclosing_cluster;
    doc["seeds"] = json{{"scatterer", c.scatterer_seed}, {"symbol", c.symbol_seed}};
    doc["counts"] = json{{"scatterer_draws", c.scatterer_draws}, {"trials_per_draw", c.trials_per_draw}};
    const char *axis = c.sweep.axis == SweepAxis::Distance ? "distance" : to_string(c.sweep.axis);
    doc["sweep"] = json{{"axis", axis}, {"values", c.sweep.values}};
    doc["arrays"] = c.array_sides;
    doc["detectors"] = c.detectors;
    doc["per_draw_rows"] = c.per_draw_rows;
    doc["output"] = c.output;
    doc["workers"] = c.workers;
    return doc;
}

inline std::string write_config(const ExperimentConfig &c, int indent = 2)
{
    return config_to_json(c).dump(indent);
}

} // namespace nfmimo

#endif
