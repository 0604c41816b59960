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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d2d/config.hpp"
#include "d2d/powerctl.hpp"
#include "d2d/se.hpp"

namespace d2d {

std::string_view version();

enum class ScenarioKind { max_power, maxmin_d2d, cellular_only_maxmin };

std::string_view to_string(ScenarioKind kind);
ScenarioKind parse_scenario(std::string_view text);

struct Scenario {
    ScenarioKind kind = ScenarioKind::maxmin_d2d;
    Processing processing = Processing::zf;
    NetworkConfig config{};
};

// Applies the scenario's overrides (cellular-only drops every D2D pair and
// D2D pilot) and validates. Throws std::invalid_argument.
Scenario make_scenario(ScenarioKind kind, Processing processing, NetworkConfig base);

struct RunOptions {
    std::size_t mc_trials = 10000;
    unsigned threads = 1;
    double lambda_tolerance = 1e-3;
    // When set, per-realization positions, gamma tables and bisection traces
    // are written here.
    std::optional<std::filesystem::path> debug_dir;
};

struct RealizationResult {
    std::size_t index = 0;
    SEReport report;
    PowerAssignment powers;
    std::optional<double> lambda_star;  // max-min scenarios only
};

struct CdfPoint {
    double value = 0.0;
    double probability = 0.0;

    bool operator==(const CdfPoint&) const = default;
};

using Cdf = std::vector<CdfPoint>;

// Empirical CDF at full resolution: the i-th smallest value (1-based) maps
// to i/n, and runs of equal values collapse to a single step.
// Throws std::invalid_argument on empty input.
Cdf aggregate_cdf(std::vector<double> values);

// Smallest value whose cumulative probability reaches q, q in (0, 1].
double percentile(const Cdf& cdf, double q);

struct ExperimentResult {
    Scenario scenario;
    std::uint64_t seed = 0;
    std::size_t mc_trials = 0;
    std::vector<RealizationResult> realizations;
    Cdf cu_se;
    Cdf d2d_se;  // empty without D2D pairs
    Cdf sum_se;
    std::string version;
};

// Runs `num_realizations` independent drops. Realization r draws its
// network, pilots and Monte-Carlo samples from streams derived from
// (seed, r), so the result is identical for any thread count.
ExperimentResult run_scenario(const Scenario& scenario, std::size_t num_realizations, std::uint64_t seed,
                              const RunOptions& options = {});

// Evaluates one realization; exposed for tests and benchmarks.
RealizationResult run_realization(const Scenario& scenario, std::size_t index, std::uint64_t seed,
                                  const RunOptions& options);

// Column list of per_user_se.csv.
inline constexpr std::string_view kPerUserHeader =
    "realization,user_type,cell,user_index,se_exact,se_approx,power_mw";

// Writes per_user_se.csv, per_realization.csv, cdf_cu_se.csv, cdf_sum_se.csv,
// cdf_d2d_se.csv (when there are D2D pairs) and config.txt into `out_dir`,
// creating it if needed. Throws std::runtime_error naming the failing path.
void write_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir);

}  // namespace d2d
