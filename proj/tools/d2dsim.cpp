/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The d2dmimo Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// d2dsim: Monte-Carlo driver for D2D underlay in multi-cell massive MIMO.
//
//   d2dsim --scenario maxmin-d2d --processing zf --realizations 500 --out results/zf_d2d
//
// Configuration is resolved as defaults < --config file < command-line flags.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "d2d/config.hpp"
#include "d2d/harness.hpp"

namespace {

template <class T>
void override_if(const CLI::Option* opt, const std::optional<T>& value, T& target) {
    if (opt->count() > 0 && value) {
        target = *value;
    }
}

std::size_t parse_count(const std::string& key, const std::string& text) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) {
            throw std::invalid_argument(text);
        }
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + text + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Max-min power control for D2D underlay in multi-cell massive MIMO"};
    app.set_version_flag("--version", std::string(d2d::version()));

    std::optional<int> cells, users, pairs, pilots, antennas;
    std::optional<std::string> processing, scenario, config_file;
    std::optional<std::size_t> realizations, mc_trials;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "d2dsim_out";
    unsigned threads = 1;
    bool debug_dumps = false;

    auto* o_cells = app.add_option("--cells", cells, "Number of cells B (perfect square)");
    auto* o_users = app.add_option("--users-per-cell", users, "CUs per cell K");
    auto* o_pairs = app.add_option("--d2d-pairs", pairs, "Number of D2D pairs L");
    auto* o_pilots = app.add_option("--d2d-pilots", pilots, "Number of D2D pilots N");
    auto* o_antennas = app.add_option("--antennas", antennas, "BS antennas M");
    app.add_option("--processing", processing, "Receive processing at the BSs")
        ->check(CLI::IsMember({"mr", "zf"}));
    app.add_option("--scenario", scenario, "Scenario")
        ->check(CLI::IsMember({"max-power", "maxmin-d2d", "cellular-only-maxmin"}));
    app.add_option("--realizations", realizations, "Number of network realizations");
    app.add_option("--mc-trials", mc_trials, "Monte-Carlo trials per D2D pair");
    auto* o_seed = app.add_option("--seed", seed, "Experiment seed");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--config", config_file, "key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--debug-dumps", debug_dumps, "Write positions, gamma tables and bisection traces");

    CLI11_PARSE(app, argc, argv);

    try {
        d2d::NetworkConfig config;
        std::string scenario_name = "maxmin-d2d";
        std::string processing_name = "zf";
        std::size_t num_realizations = 500;
        std::size_t trials = 10000;

        if (config_file) {
            d2d::KeyValues rest = d2d::apply_key_values(config, d2d::read_key_value_file(*config_file));
            for (const auto& [key, value] : rest) {
                if (key == "scenario") {
                    scenario_name = value;
                } else if (key == "processing") {
                    processing_name = value;
                } else if (key == "realizations") {
                    num_realizations = parse_count(key, value);
                } else if (key == "mc_trials") {
                    trials = parse_count(key, value);
                } else {
                    throw std::invalid_argument("unknown config key '" + key + "' in " + *config_file);
                }
            }
        }

        override_if(o_cells, cells, config.num_cells);
        override_if(o_users, users, config.users_per_cell);
        override_if(o_pairs, pairs, config.num_d2d_pairs);
        override_if(o_pilots, pilots, config.num_d2d_pilots);
        override_if(o_antennas, antennas, config.antennas_per_bs);
        override_if(o_seed, seed, config.rng_seed);
        if (scenario) {
            scenario_name = *scenario;
        }
        if (processing) {
            processing_name = *processing;
        }
        if (realizations) {
            num_realizations = *realizations;
        }
        if (mc_trials) {
            trials = *mc_trials;
        }
        if (num_realizations == 0 || trials == 0) {
            throw std::invalid_argument("realizations and mc-trials must be >= 1");
        }

        const d2d::Scenario sc = d2d::make_scenario(d2d::parse_scenario(scenario_name),
                                                    d2d::parse_processing(processing_name), config);
        d2d::RunOptions options;
        options.mc_trials = trials;
        options.threads = threads;
        if (debug_dumps) {
            options.debug_dir = std::filesystem::path(out_dir) / "debug";
        }

        const d2d::ExperimentResult result = d2d::run_scenario(sc, num_realizations, config.rng_seed, options);
        d2d::write_outputs(result, out_dir);

        std::cout << "scenario=" << d2d::to_string(sc.kind) << " processing=" << d2d::to_string(sc.processing)
                  << " realizations=" << num_realizations << '\n'
                  << "cu_se p10=" << d2d::percentile(result.cu_se, 0.1)
                  << " p50=" << d2d::percentile(result.cu_se, 0.5) << '\n'
                  << "sum_se p50=" << d2d::percentile(result.sum_se, 0.5) << '\n'
                  << "outputs written to " << out_dir << '\n';
    } catch (const std::exception& e) {
        std::cerr << "d2dsim: error: " << e.what() << '\n';
        return EXIT_FAILURE;
    }
    return EXIT_SUCCESS;
}
