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

// simulate <config.json> [--seed S] [--trials T] [--workers W] [--out PATH]
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.
// NFMIMO_WORKERS sets the worker count unless --workers is given.

#include <nfmimo/config.hpp>
#include <nfmimo/experiment.hpp>

#include "CLI11.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace
{

constexpr int exit_config_error = 1;
constexpr int exit_runtime_error = 2;

std::optional<unsigned> workers_from_env()
{
    const char *env = std::getenv("NFMIMO_WORKERS");
    if (!env || !*env)
        return std::nullopt;
    try
    {
        std::size_t used = 0;
        const long v = std::stol(env, &used);
        if (used != std::string(env).size() || v < 0)
            throw std::invalid_argument(env);
        return static_cast<unsigned>(v);
    }
    catch (const std::exception &)
    {
        throw nfmimo::Error(nfmimo::ErrorCode::ValidationError,
                            std::string("NFMIMO_WORKERS must be a nonnegative integer, got '") + env + "'");
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Monte Carlo experiments for noncoherent detection under near-field correlation"};
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> trials;
    std::optional<unsigned> workers;
    std::string out_path;
    std::string preset;

    app.add_option("config", config_path, "Experiment configuration (JSON)");
    app.add_option("--seed", seed, "Seed for scatterer and symbol streams");
    app.add_option("--trials", trials, "Trials per scatterer draw")->check(CLI::PositiveNumber);
    app.add_option("--workers", workers, "Worker threads (0: all cores)");
    app.add_option("--out", out_path, "Output CSV path (default: config 'output', else stdout)");
    app.add_option("--print-preset", preset, "Print the resolved preset config for an experiment and exit")
        ->check(CLI::IsMember({"spectrum", "chordal", "ser_distance", "ser_multiuser", "custom"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config_error;
    }

    nfmimo::ExperimentConfig config;
    nfmimo::RunOptions options;
    try
    {
        if (!preset.empty())
        {
            std::cout << nfmimo::write_config(nfmimo::preset_config(nfmimo::experiment_kind_from_string(preset)))
                      << '\n';
            return 0;
        }
        if (config_path.empty())
        {
            std::cerr << "simulate: a config file is required (see --help)\n";
            return exit_config_error;
        }
        config = nfmimo::load_config(config_path);
        if (seed)
        {
            config.scatterer_seed = *seed;
            config.symbol_seed = *seed;
        }
        if (trials)
            config.trials_per_draw = *trials;
        if (!out_path.empty())
            config.output = out_path;
        nfmimo::validate_config(config);

        options.workers = config.workers;
        if (const auto env = workers_from_env())
            options.workers = *env;
        if (workers)
            options.workers = *workers;
    }
    catch (const nfmimo::Error &e)
    {
        std::cerr << "simulate: config error: " << e.what() << '\n';
        return exit_config_error;
    }
    catch (const std::exception &e)
    {
        std::cerr << "simulate: config error: " << e.what() << '\n';
        return exit_config_error;
    }

    try
    {
        if (config.output.empty())
        {
            nfmimo::run_experiment(config, std::cout, options);
            std::cout.flush();
            if (!std::cout)
                throw std::runtime_error("failed writing to stdout");
        }
        else
        {
            std::ofstream out(config.output, std::ios::binary);
            if (!out)
                throw std::runtime_error("cannot open '" + config.output + "' for writing");
            nfmimo::run_experiment(config, out, options);
            out.close();
            if (!out)
                throw std::runtime_error("failed writing '" + config.output + "'");
        }
    }
    catch (const std::exception &e)
    {
        std::cerr << "simulate: runtime error: " << e.what() << '\n';
        return exit_runtime_error;
    }
    return 0;
}
