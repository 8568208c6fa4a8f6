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

#ifndef NFMIMO_SIMULATION_HPP
#define NFMIMO_SIMULATION_HPP

#include "channel.hpp"
#include "constellation.hpp"
#include "detection.hpp"
#include "errors.hpp"
#include "geometry.hpp"
#include "random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace nfmimo
{

struct UeSpec
{
    SphericalPoint position;
    double cluster_radius = 3.0;
    int scatterers = 10;
    std::vector<double> gains; // empty: equal gains 1/L
};

struct Scenario
{
    ArrayGeometry geometry = ArrayGeometry(16, 16, 0.01, 0.01);
    std::vector<UeSpec> ues;
    Constellation constellation = make_unipolar_pam(4);
    PowerMode power_mode = PowerMode::EqualSnr;
    double target_db = 20.0;
    double noise_power = 1.0; // sigma^2, R_z = sigma^2 I
    std::uint64_t scatterer_seed = 1;
    std::uint64_t symbol_seed = 2;
    int scatterer_draws = 20;
    int trials_per_draw = 50000;
    ClusterOptions cluster;

    void validate() const
    {
        if (ues.empty())
            throw Error(ErrorCode::ValidationError, "scenario needs at least one UE");
        if (scatterer_draws < 1 || trials_per_draw < 1)
            throw Error(ErrorCode::ValidationError, "draw and trial counts must be at least 1");
        if (!std::isfinite(target_db))
            throw Error(ErrorCode::ValidationError, "power target must be finite");
        if (!(noise_power > 0.0) || !std::isfinite(noise_power))
            throw Error(ErrorCode::ValidationError, "noise power must be positive");
        for (const auto &ue : ues)
        {
            if (!ue.position.valid())
                throw Error(ErrorCode::ValidationError, "UE position out of range");
            if (ue.scatterers < 1)
                throw Error(ErrorCode::ValidationError, "each UE needs at least one scatterer");
            if (!(ue.cluster_radius >= 0.0))
                throw Error(ErrorCode::ValidationError, "cluster radius must be nonnegative");
            if (!ue.gains.empty() && ue.gains.size() != static_cast<std::size_t>(ue.scatterers))
                throw Error(ErrorCode::ValidationError, "gain list length must equal scatterer count");
        }
        if (power_mode == PowerMode::EqualSinr &&
            db_to_linear(target_db) * static_cast<double>(ues.size() - 1) >= 1.0)
            throw Error(ErrorCode::InfeasibleSinr,
                        "equal SINR of " + std::to_string(target_db) + " dB infeasible for " +
                            std::to_string(ues.size()) + " users");
    }
};

// Seed of the scattering cluster of `user` in scatterer draw `draw`.
inline std::uint64_t cluster_seed(const Scenario &s, int draw, std::size_t user)
{
    Engine e = make_stream(s.scatterer_seed, StreamDomain::Scatterers,
                           {static_cast<std::uint64_t>(draw), static_cast<std::uint64_t>(user)});
    return e();
}

// Everything fixed for one scatterer draw: clusters, both correlation
// models, samplers and power control.
struct DrawContext
{
    const Scenario *scenario = nullptr;
    int draw_index = 0;
    std::vector<ScatteringCluster> clusters;
    std::vector<CovarianceMatrix> near_field;
    std::vector<CovarianceMatrix> far_field;
    std::vector<ChannelSampler> samplers;
    std::vector<double> powers;
    double noise_power = 1.0;

    std::size_t users() const noexcept { return clusters.size(); }
};

inline DrawContext prepare_draw(const Scenario &s, int draw_index)
{
    DrawContext ctx;
    ctx.scenario = &s;
    ctx.draw_index = draw_index;
    ctx.noise_power = s.noise_power;
    std::vector<double> traces;
    for (std::size_t k = 0; k < s.ues.size(); ++k)
    {
        const UeSpec &ue = s.ues[k];
        ScatteringCluster cluster = draw_scatterers(ue.position, ue.cluster_radius, ue.scatterers,
                                                    cluster_seed(s, draw_index, k), s.cluster);
        if (!ue.gains.empty())
            cluster.gains = ue.gains;
        cluster.validate();
        ctx.near_field.push_back(build_covariance(cluster, s.geometry, CorrelationModel::NearField));
        ctx.far_field.push_back(build_covariance(cluster, s.geometry, CorrelationModel::FarField));
        ctx.samplers.emplace_back(ctx.near_field.back());
        traces.push_back(ctx.near_field.back().trace());
        ctx.clusters.push_back(std::move(cluster));
    }
    const double noise_trace = s.noise_power * s.geometry.size();
    ctx.powers = power_control(traces, noise_trace, db_to_linear(s.target_db), s.power_mode).powers;
    return ctx;
}

// One realisation handed to detectors. `isolated[k]` is what the receiver
// would see if user k transmitted alone over the same channel and noise.
struct TrialSignal
{
    const Eigen::VectorXcd &received;
    std::span<const Eigen::VectorXcd> isolated;
    std::span<const int> transmitted;
    std::uint64_t trial_key = 0;
};

class Detector
{
public:
    virtual ~Detector() = default;
    // Writes one 0-based constellation index per user.
    virtual void detect(const TrialSignal &signal, std::span<int> decisions) const = 0;
};

struct DetectorSpec
{
    std::string name;
    bool needs_isolated = false;
    std::function<std::unique_ptr<Detector>(const DrawContext &)> make;
};

enum class DetectorKind
{
    MultiuserMl,          // joint ML over X^K, exact models
    SingleUserExact,      // per-user detector, exact model, interference present
    SingleUserMismatched, // per-user detector, far-field model, interference present
    SingleUserAlone,      // per-user detector, exact model, user transmits alone
};

inline const char *to_string(DetectorKind kind) noexcept
{
    switch (kind)
    {
    case DetectorKind::MultiuserMl:
        return "ml_multiuser";
    case DetectorKind::SingleUserExact:
        return "su_exact";
    case DetectorKind::SingleUserMismatched:
        return "su_mismatched";
    case DetectorKind::SingleUserAlone:
        return "su_alone";
    }
    return "unknown";
}

inline DetectorKind detector_kind_from_string(const std::string &name)
{
    for (auto k : {DetectorKind::MultiuserMl, DetectorKind::SingleUserExact, DetectorKind::SingleUserMismatched,
                   DetectorKind::SingleUserAlone})
        if (name == to_string(k))
            return k;
    throw Error(ErrorCode::ValidationError, "unknown detector '" + name + "'");
}

namespace detail
{

class MultiuserMlDetector final : public Detector
{
public:
    explicit MultiuserMlDetector(const DrawContext &ctx)
        : bank_(HypothesisBank::multiuser(ctx.scenario->constellation, ctx.near_field, ctx.powers, ctx.noise_power))
    {
    }

    void detect(const TrialSignal &signal, std::span<int> decisions) const override
    {
        const DetectionResult r = detect_ml_multiuser(signal.received, bank_);
        std::copy(r.symbols.begin(), r.symbols.end(), decisions.begin());
    }

private:
    HypothesisBank bank_;
};

class SingleUserDetector final : public Detector
{
public:
    SingleUserDetector(const DrawContext &ctx, CorrelationModel model, bool alone) : alone_(alone)
    {
        const auto &models = model == CorrelationModel::NearField ? ctx.near_field : ctx.far_field;
        for (std::size_t k = 0; k < ctx.users(); ++k)
            banks_.push_back(HypothesisBank::single_user(ctx.scenario->constellation, models[k], ctx.powers[k],
                                                         ctx.noise_power));
    }

    void detect(const TrialSignal &signal, std::span<int> decisions) const override
    {
        for (std::size_t k = 0; k < banks_.size(); ++k)
        {
            const Eigen::VectorXcd &y = alone_ && banks_.size() > 1 ? signal.isolated[k] : signal.received;
            decisions[k] = detect_single_user(y, banks_[k]);
        }
    }

private:
    bool alone_;
    std::vector<HypothesisBank> banks_;
};

} // namespace detail

inline DetectorSpec builtin_detector(DetectorKind kind)
{
    DetectorSpec spec;
    spec.name = to_string(kind);
    switch (kind)
    {
    case DetectorKind::MultiuserMl:
        spec.make = [](const DrawContext &ctx) { return std::make_unique<detail::MultiuserMlDetector>(ctx); };
        break;
    case DetectorKind::SingleUserExact:
        spec.make = [](const DrawContext &ctx) {
            return std::make_unique<detail::SingleUserDetector>(ctx, CorrelationModel::NearField, false);
        };
        break;
    case DetectorKind::SingleUserMismatched:
        spec.make = [](const DrawContext &ctx) {
            return std::make_unique<detail::SingleUserDetector>(ctx, CorrelationModel::FarField, false);
        };
        break;
    case DetectorKind::SingleUserAlone:
        spec.needs_isolated = true;
        spec.make = [](const DrawContext &ctx) {
            return std::make_unique<detail::SingleUserDetector>(ctx, CorrelationModel::NearField, true);
        };
        break;
    }
    return spec;
}

struct TrialOutcome
{
    std::vector<std::uint8_t> user_correct;
    bool joint_correct = true;

    bool operator==(const TrialOutcome &) const = default;
};

// y = sum_k h_k sqrt(p_k) x_k + z for trial `trial_index` of the draw in
// `ctx`, then every detector's verdict. Fully determined by the scenario
// seeds and the (draw, trial) indices.
inline std::vector<TrialOutcome> run_trial(const DrawContext &ctx, std::span<const std::unique_ptr<Detector>> detectors,
                                           bool needs_isolated, std::int64_t trial_index)
{
    const Scenario &s = *ctx.scenario;
    const std::size_t users = ctx.users();
    const Eigen::Index n = s.geometry.size();
    Engine rng = make_stream(s.symbol_seed, StreamDomain::Trial,
                             {static_cast<std::uint64_t>(ctx.draw_index), static_cast<std::uint64_t>(trial_index)});
    ComplexNormal normal;
    std::uniform_int_distribution<int> pick(0, static_cast<int>(s.constellation.order()) - 1);

    std::vector<int> symbols(users);
    for (auto &x : symbols)
        x = pick(rng);

    std::vector<Eigen::VectorXcd> contributions(users, Eigen::VectorXcd(n));
    for (std::size_t k = 0; k < users; ++k)
    {
        ctx.samplers[k].draw(rng, normal, contributions[k]);
        contributions[k] *= std::sqrt(ctx.powers[k]) * s.constellation.level(static_cast<std::size_t>(symbols[k]));
    }
    Eigen::VectorXcd noise(n);
    normal.fill(rng, noise);
    noise *= std::sqrt(ctx.noise_power);

    Eigen::VectorXcd received = noise;
    for (const auto &c : contributions)
        received += c;

    std::vector<Eigen::VectorXcd> isolated;
    if (needs_isolated && users > 1)
    {
        isolated.reserve(users);
        for (const auto &c : contributions)
            isolated.push_back(c + noise);
    }

    const TrialSignal signal{received, isolated, symbols, rng()};
    std::vector<TrialOutcome> out(detectors.size());
    std::vector<int> decisions(users);
    for (std::size_t d = 0; d < detectors.size(); ++d)
    {
        detectors[d]->detect(signal, decisions);
        out[d].user_correct.resize(users);
        out[d].joint_correct = true;
        for (std::size_t k = 0; k < users; ++k)
        {
            const bool ok = decisions[k] == symbols[k];
            out[d].user_correct[k] = ok ? 1 : 0;
            out[d].joint_correct = out[d].joint_correct && ok;
        }
    }
    return out;
}

// Half-width of the 95% Wilson score interval.
inline double wilson_halfwidth(std::uint64_t errors, std::uint64_t trials, double z = 1.959963984540054)
{
    if (trials == 0)
        return 0.5;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    return z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
}

struct SerEstimate
{
    double joint_ser = 0.0;
    std::vector<double> per_user_ser;
    std::uint64_t trials = 0;
    double wilson_95_halfwidth = 0.0;
    std::vector<double> per_user_halfwidth;
    std::uint64_t joint_errors = 0;
    std::vector<std::uint64_t> user_errors;
};

struct SerCounter
{
    std::uint64_t trials = 0;
    std::uint64_t joint_errors = 0;
    std::vector<std::uint64_t> user_errors;

    void add(const TrialOutcome &o)
    {
        if (user_errors.size() < o.user_correct.size())
            user_errors.resize(o.user_correct.size(), 0);
        ++trials;
        joint_errors += o.joint_correct ? 0 : 1;
        for (std::size_t k = 0; k < o.user_correct.size(); ++k)
            user_errors[k] += o.user_correct[k] ? 0 : 1;
    }

    void merge(const SerCounter &other)
    {
        if (user_errors.size() < other.user_errors.size())
            user_errors.resize(other.user_errors.size(), 0);
        trials += other.trials;
        joint_errors += other.joint_errors;
        for (std::size_t k = 0; k < other.user_errors.size(); ++k)
            user_errors[k] += other.user_errors[k];
    }

    SerEstimate estimate() const
    {
        SerEstimate e;
        e.trials = trials;
        e.joint_errors = joint_errors;
        e.user_errors = user_errors;
        const double n = trials ? static_cast<double>(trials) : 1.0;
        e.joint_ser = static_cast<double>(joint_errors) / n;
        e.wilson_95_halfwidth = wilson_halfwidth(joint_errors, trials);
        for (auto u : user_errors)
        {
            e.per_user_ser.push_back(static_cast<double>(u) / n);
            e.per_user_halfwidth.push_back(wilson_halfwidth(u, trials));
        }
        return e;
    }
};

struct SerReport
{
    std::map<std::string, SerEstimate> pooled;
    std::vector<std::map<std::string, SerEstimate>> per_draw;
};

inline unsigned resolve_workers(unsigned requested)
{
    if (requested > 0)
        return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Monte Carlo SER over scatterer_draws x trials_per_draw trials. Trials are
// split into contiguous blocks per worker and merged with integer counters,
// so the result does not depend on the number of workers.
inline SerReport estimate_ser(const Scenario &scenario, std::span<const DetectorSpec> specs, unsigned workers = 0)
{
    scenario.validate();
    if (specs.empty())
        throw Error(ErrorCode::InvalidArgument, "no detectors requested");
    const bool needs_isolated =
        std::any_of(specs.begin(), specs.end(), [](const DetectorSpec &d) { return d.needs_isolated; });
    workers = resolve_workers(workers);

    SerReport report;
    std::vector<SerCounter> pooled(specs.size());
    for (int draw = 0; draw < scenario.scatterer_draws; ++draw)
    {
        const DrawContext ctx = prepare_draw(scenario, draw);
        std::vector<std::unique_ptr<Detector>> detectors;
        for (const auto &spec : specs)
            detectors.push_back(spec.make(ctx));

        const std::int64_t total = scenario.trials_per_draw;
        const unsigned used = static_cast<unsigned>(std::min<std::int64_t>(workers, total));
        std::vector<std::vector<SerCounter>> partial(used, std::vector<SerCounter>(specs.size()));
        std::vector<std::exception_ptr> failures(used);
        auto work = [&](unsigned w) {
            try
            {
                const std::int64_t begin = total * w / used;
                const std::int64_t end = total * (w + 1) / used;
                for (std::int64_t t = begin; t < end; ++t)
                {
                    const auto outcomes = run_trial(ctx, detectors, needs_isolated, t);
                    for (std::size_t d = 0; d < outcomes.size(); ++d)
                        partial[w][d].add(outcomes[d]);
                }
            }
            catch (...)
            {
                failures[w] = std::current_exception();
            }
        };
        if (used == 1)
        {
            work(0);
        }
        else
        {
            std::vector<std::thread> threads;
            for (unsigned w = 0; w < used; ++w)
                threads.emplace_back(work, w);
            for (auto &t : threads)
                t.join();
        }
        for (const auto &f : failures)
            if (f)
                std::rethrow_exception(f);

        std::map<std::string, SerEstimate> this_draw;
        for (std::size_t d = 0; d < specs.size(); ++d)
        {
            SerCounter merged;
            for (unsigned w = 0; w < used; ++w)
                merged.merge(partial[w][d]);
            this_draw[specs[d].name] = merged.estimate();
            pooled[d].merge(merged);
        }
        report.per_draw.push_back(std::move(this_draw));
    }
    for (std::size_t d = 0; d < specs.size(); ++d)
        report.pooled[specs[d].name] = pooled[d].estimate();
    return report;
}

inline SerReport estimate_ser(const Scenario &scenario, std::span<const DetectorKind> kinds, unsigned workers = 0)
{
    std::vector<DetectorSpec> specs;
    for (auto k : kinds)
        specs.push_back(builtin_detector(k));
    return estimate_ser(scenario, std::span<const DetectorSpec>(specs), workers);
}

} // namespace nfmimo

#endif
