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

#include <nfmimo/config.hpp>
#include <nfmimo/experiment.hpp>

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace nfmimo;
using Catch::Approx;

namespace
{

ErrorCode code_of(const std::string &text)
{
    try
    {
        parse_config(text);
    }
    catch (const Error &e)
    {
        return e.code();
    }
    FAIL("config unexpectedly accepted: " << text);
    return ErrorCode::InvalidArgument;
}

std::string message_of(const std::string &text)
{
    try
    {
        parse_config(text);
    }
    catch (const Error &e)
    {
        return e.what();
    }
    return {};
}

std::string run_to_string(const ExperimentConfig &c, unsigned workers)
{
    std::ostringstream os;
    run_experiment(c, os, RunOptions{workers, true});
    return os.str();
}

std::filesystem::path temp_dir()
{
    auto dir = std::filesystem::temp_directory_path() / ("nfmimo_cli_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

int run_simulate(const std::string &args, const std::string &env = "")
{
    const std::string cmd = env + " " + std::string(NFMIMO_SIMULATE_EXE) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_file(const std::filesystem::path &p, const std::string &text)
{
    std::ofstream(p) << text;
}

std::string read_file(const std::filesystem::path &p)
{
    std::ifstream in(p);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("minimal spectrum config fills the defaults", "[cli]")
{
    const ExperimentConfig c = parse_config(R"({"experiment": "spectrum"})");
    CHECK(c.experiment == ExperimentKind::Spectrum);
    CHECK(c.n_h == 16);
    CHECK(c.n_v == 16);
    CHECK(c.spacing_m == 0.01);
    CHECK(c.wavelength_m == 0.01);
    REQUIRE(c.ues.size() == 3);
    for (const auto &u : c.ues)
    {
        CHECK(u.scatterers == 10);
        CHECK(u.cluster_radius_m == 3.0);
    }
    CHECK(c.ues[0].position == PositionConfig{5.0, -30.0, -10.0});
    CHECK(c.ues[1].position == PositionConfig{5.0, -20.0, 0.0});
    CHECK(c.ues[2].position == PositionConfig{25.0, -10.0, 10.0});
}

TEST_CASE("infeasible equal-SINR target is a validation error", "[cli]")
{
    const std::string text = R"({
        "experiment": "custom",
        "ues": [{"position": {"r_m": 10, "theta_deg": 0, "phi_deg": 0}},
                {"position": {"r_m": 12, "theta_deg": 5, "phi_deg": 0}},
                {"position": {"r_m": 14, "theta_deg": 10, "phi_deg": 0}},
                {"position": {"r_m": 16, "theta_deg": 15, "phi_deg": 0}},
                {"position": {"r_m": 18, "theta_deg": 20, "phi_deg": 0}}],
        "power": {"mode": "equal_sinr", "target_db": 20}
    })";
    CHECK(code_of(text) == ErrorCode::InfeasibleSinr);
    CHECK(std::string(to_string(ErrorCode::InfeasibleSinr)) == "infeasible-sinr");
}

TEST_CASE("strict schema errors name the offending field", "[cli]")
{
    CHECK(code_of(R"({"experiment": "spectrum", "antennas": 4})") == ErrorCode::ValidationError);
    CHECK(message_of(R"({"experiment": "spectrum", "antennas": 4})").find("antennas") != std::string::npos);
    CHECK(message_of(R"({"experiment": "spectrum", "array": {"n_h": 4, "pitch": 1}})").find("array.pitch") !=
          std::string::npos);
    CHECK(message_of(R"({"experiment": "spectrum", "array": {"n_h": "four"}})").find("array.n_h") !=
          std::string::npos);
    CHECK(code_of(R"({"experiment": "bogus"})") == ErrorCode::ValidationError);
    CHECK(code_of(R"({"array": {}})") == ErrorCode::ValidationError);
}

TEST_CASE("syntax errors report line and column", "[cli]")
{
    const std::string text = "{\n  \"experiment\": \"spectrum\",\n  \"noise_power\": ,\n}";
    CHECK(code_of(text) == ErrorCode::ParseError);
    CHECK(message_of(text).find("line 3") != std::string::npos);
}

TEST_CASE("invariant violations are rejected", "[cli]")
{
    CHECK(code_of(R"({"experiment": "ser_distance", "sweep": {"axis": "distance", "values": [1, 5, 3]}})") ==
          ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "ser_distance", "sweep": {"axis": "distance", "values": []}})") ==
          ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "ser_multiuser", "sweep": {"axis": "n", "values": [64, 150]}})") ==
          ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "detectors": ["psychic"]})") == ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "noise_power": 0})") == ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "counts": {"trials_per_draw": 0}})") == ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "counts": {"trials_per_draw": 4294967296}})") ==
          ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "seeds": {"scatterer": -1}})") == ErrorCode::ValidationError);
    CHECK(parse_config(R"({"experiment": "custom", "seeds": {"scatterer": 18446744073709551615}})").scatterer_seed ==
          18446744073709551615ULL);
    CHECK(code_of(R"({"experiment": "custom", "constellation": {"order": 3, "levels": [0, 1]}})") ==
          ErrorCode::ValidationError);
    CHECK(code_of(R"({"experiment": "custom", "constellation": {"levels": [0, 1, 1]}})") ==
          ErrorCode::InvalidArgument);
    // UE at 2 m inside its own 3 m cluster without permission
    CHECK(code_of(R"({"experiment": "custom", "ues": [{"position": {"r_m": 2, "theta_deg": 0, "phi_deg": 0}}]})") ==
          ErrorCode::ValidationError);
}

TEST_CASE("presets carry the standard setups", "[cli]")
{
    const ExperimentConfig chordal = preset_config(ExperimentKind::Chordal);
    REQUIRE(chordal.sweep.values.size() == 10);
    CHECK(chordal.sweep.values.front() == 1.0);
    CHECK(chordal.sweep.values.back() == 200.0);
    for (std::size_t i = 1; i < 10; ++i)
        CHECK(chordal.sweep.values[i] / chordal.sweep.values[i - 1] == Approx(std::pow(200.0, 1.0 / 9.0)));
    CHECK(chordal.array_sides == std::vector<int>{16, 24, 32});
    REQUIRE(chordal.trajectory);
    CHECK(chordal.trajectory->from == PositionConfig{1.0, -30.0, -10.0});
    CHECK(chordal.trajectory->to == PositionConfig{200.0, -0.15, -10.0});

    const ExperimentConfig ser = preset_config(ExperimentKind::SerDistance);
    CHECK(ser.sweep.values.size() == 20);
    CHECK(ser.target_db == 20.0);
    CHECK(ser.constellation_order == 4);

    const ExperimentConfig mu = preset_config(ExperimentKind::SerMultiuser);
    CHECK(mu.ues.size() == 5);
    CHECK(mu.ues[0].cluster_radius_m == 1.0);
    CHECK(mu.power_mode == PowerMode::EqualSnr);
    CHECK(mu.sweep.axis == SweepAxis::ArraySize);

    for (auto k : {ExperimentKind::Spectrum, ExperimentKind::Chordal, ExperimentKind::SerDistance,
                   ExperimentKind::SerMultiuser, ExperimentKind::Custom})
        CHECK_NOTHROW(validate_config(preset_config(k)));
}

TEST_CASE("config round trip", "[cli][property]")
{
    for (auto k : {ExperimentKind::Spectrum, ExperimentKind::Chordal, ExperimentKind::SerDistance,
                   ExperimentKind::SerMultiuser, ExperimentKind::Custom})
    {
        const ExperimentConfig c = preset_config(k);
        REQUIRE(parse_config(write_config(c)) == c);
    }

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i)
    {
        ExperimentConfig c = preset_config(ExperimentKind::Custom);
        c.n_h = 1 + static_cast<int>(u(rng) * 20);
        c.n_v = 1 + static_cast<int>(u(rng) * 20);
        c.spacing_m = 0.001 + u(rng) * 0.02;
        c.wavelength_m = 0.001 + u(rng) * 0.02;
        c.ues.clear();
        const int users = 1 + i % 3;
        for (int k = 0; k < users; ++k)
        {
            UeConfig ue;
            ue.position = PositionConfig{5.0 + 100.0 * u(rng), -90.0 + 180.0 * u(rng), -179.0 + 358.0 * u(rng)};
            ue.cluster_radius_m = 4.0 * u(rng);
            ue.scatterers = 1 + i % 7;
            if (i % 4 == 0)
                for (int l = 0; l < ue.scatterers; ++l)
                    ue.gains.push_back(0.01 + u(rng));
            c.ues.push_back(ue);
        }
        c.constellation_order = 2 + i % 4;
        if (i % 5 == 0)
        {
            c.constellation_levels.clear();
            double x = 0.0;
            for (int m = 0; m < c.constellation_order; ++m)
            {
                c.constellation_levels.push_back(x);
                x += 0.1 + u(rng);
            }
        }
        c.power_mode = users == 1 && i % 2 ? PowerMode::EqualSinr : PowerMode::EqualSnr;
        c.target_db = -10.0 + 50.0 * u(rng);
        c.noise_power = 0.1 + u(rng);
        c.sampling = i % 2 ? SphereSampling::Surface : SphereSampling::Volume;
        c.allow_enclosing_cluster = i % 3 == 0;
        c.scatterer_seed = rng();
        c.symbol_seed = rng();
        c.scatterer_draws = 1 + i % 9;
        c.trials_per_draw = 1 + static_cast<int>(u(rng) * 1e5);
        c.detectors = {"su_exact"};
        if (i % 3 == 1)
            c.detectors.push_back("ml_multiuser");
        if (i % 6 == 0)
            c.sweep = SweepConfig{SweepAxis::SnrDb, {0.5 * i, 0.5 * i + 3.25, 0.5 * i + 7.0}};
        c.per_draw_rows = i % 2 == 0;
        c.output = i % 2 ? "out_" + std::to_string(i) + ".csv" : "";
        c.workers = static_cast<unsigned>(i % 5);
        REQUIRE_NOTHROW(validate_config(c));
        const ExperimentConfig back = parse_config(write_config(c));
        REQUIRE(back == c);
    }
}

TEST_CASE("result rows round trip through CSV", "[cli]")
{
    const ResultRow r{"ser_distance", "distance_m", 1.8016, "ff", "su_mismatched", "ser_joint",
                      0.1234567890123, 1e-17, 18446744073709551615ull, 20, 20000};
    CHECK(parse_row(format_row(r)) == r);
    CHECK_THROWS_AS(parse_row("a,b,c"), Error);
    CHECK_THROWS_AS(parse_row("a,b,1,m,d,x,nan,0,1,1,1"), Error);
    CHECK_THROWS_AS(parse_row("a,b,1,m,d,x,0.5,-1,1,1,1"), Error);
}

TEST_CASE("spectrum experiment output", "[cli]")
{
    const ExperimentConfig c = preset_config(ExperimentKind::Spectrum);
    const std::string text = run_to_string(c, 1);
    std::istringstream in(text);
    std::string line;
    int rows = 0;
    bool header_seen = false;
    bool config_echoed = false;
    while (std::getline(in, line))
    {
        if (line.rfind("# config ", 0) == 0)
        {
            config_echoed = true;
            CHECK(parse_config(line.substr(9)) == c);
        }
        if (line.front() == '#')
            continue;
        if (!header_seen)
        {
            CHECK(line == csv_columns);
            header_seen = true;
            continue;
        }
        const ResultRow r = parse_row(line);
        CHECK(r.metric == "eigenvalue");
        CHECK(r.value >= 0.0);
        ++rows;
    }
    CHECK(config_echoed);
    CHECK(rows == 2 * 3 * 10);
}

TEST_CASE("chordal preset emits one mean row per distance and aperture", "[cli]")
{
    ExperimentConfig c = preset_config(ExperimentKind::Chordal);
    c.scatterer_draws = 3;
    const auto rows = compute_rows(c, 1);
    int means = 0;
    int per_seed = 0;
    for (const auto &r : rows)
    {
        means += r.metric == "chordal_normalized_mean" ? 1 : 0;
        per_seed += r.metric == "chordal_normalized" ? 1 : 0;
        CHECK(r.value >= 0.0);
        CHECK(r.value <= 1.0);
    }
    CHECK(means == 30);
    CHECK(per_seed == 90);
}

TEST_CASE("CSV body is reproducible and independent of workers", "[cli][property]")
{
    ExperimentConfig c = preset_config(ExperimentKind::SerMultiuser);
    c.ues.resize(2);
    c.sweep.values = {16.0, 36.0};
    c.scatterer_draws = 2;
    c.trials_per_draw = 300;
    c.detectors = {"su_exact", "su_alone", "su_mismatched", "ml_multiuser"};
    const std::string a = run_to_string(c, 1);
    const std::string b = run_to_string(c, 1);
    const std::string d = run_to_string(c, 4);
    CHECK(csv_body(a) == csv_body(b));
    CHECK(csv_body(a) == csv_body(d));
    CHECK(csv_body(a).size() > 200);

    std::istringstream in(csv_body(a));
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line))
    {
        const ResultRow r = parse_row(line);
        CHECK(r.ci95 >= 0.0);
        ++rows;
    }
    // 2 sizes x 4 detectors x (joint + 2 users) x (pooled + 2 draws)
    CHECK(rows == 2 * 4 * 3 * 3);
}

TEST_CASE("simulate executable exit codes", "[cli]")
{
    const auto dir = temp_dir();
    const auto good = dir / "good.json";
    write_file(good, R"({"experiment": "custom", "counts": {"scatterer_draws": 1, "trials_per_draw": 50},
                         "array": {"n_h": 4, "n_v": 4}})");
    const auto out1 = dir / "one.csv";
    const auto out2 = dir / "two.csv";
    CHECK(run_simulate(good.string() + " --out " + out1.string() + " --workers 1") == 0);
    CHECK(run_simulate(good.string() + " --out " + out2.string(), "NFMIMO_WORKERS=3") == 0);
    CHECK(csv_body(read_file(out1)) == csv_body(read_file(out2)));
    CHECK(read_file(out1).rfind("# nfmimo simulate", 0) == 0);

    CHECK(run_simulate(good.string() + " --seed 9 --trials 20 --out " + out2.string()) == 0);
    CHECK(read_file(out2).find(",20\n") != std::string::npos);

    const auto bad = dir / "bad.json";
    write_file(bad, R"({"experiment": "custom", "frobnicate": true})");
    CHECK(run_simulate(bad.string()) == 1);
    CHECK(run_simulate((dir / "missing.json").string()) == 1);
    CHECK(run_simulate(good.string(), "NFMIMO_WORKERS=lots") == 1);
    CHECK(run_simulate("--bogus-flag") == 1);
    CHECK(run_simulate(good.string() + " --out " + (dir / "no" / "such" / "dir.csv").string()) == 2);
    CHECK(run_simulate("--print-preset chordal") == 0);

    for (const char *name : {"spectrum.json", "chordal.json", "ser_distance.json", "ser_multiuser.json", "custom.json"})
        CHECK_NOTHROW(load_config(std::string(NFMIMO_CONFIG_DIR) + "/" + name));
    std::filesystem::remove_all(dir);
}
