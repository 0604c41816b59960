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

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

namespace d2d {

// Constants of the three-slope large-scale fading model. The fixed loss is
// the Hata-COST231 expression evaluated at the carrier and antenna heights.
struct PathLossParams {
    double d0_m = 10.0;
    double d1_m = 50.0;
    double carrier_mhz = 2000.0;
    double bs_height_m = 15.0;
    double user_height_m = 1.65;
};

// Hata-COST231 loss constant in dB (positive number; path_loss_db subtracts it).
double fixed_loss_db(const PathLossParams& params);

struct NetworkConfig {
    int num_cells = 9;
    int users_per_cell = 2;
    int num_d2d_pairs = 10;
    int num_d2d_pilots = 5;
    int antennas_per_bs = 100;
    double area_side_m = 1000.0;
    double d2d_link_distance_m = 10.0;
    int coherence_block = 200;
    PathLossParams pathloss{};
    double noise_power_dbm = -94.0;
    double max_power_mw = 200.0;
    double bandwidth_mhz = 20.0;
    std::uint64_t rng_seed = 1;

    // Pilot length: one orthogonal pilot per in-cell CU plus one per D2D group.
    int pilot_length() const { return users_per_cell + num_d2d_pilots; }
    int grid_side() const;
    double cell_side_m() const;
};

// Throws std::invalid_argument describing the first violated constraint.
// ZF scenarios additionally call validate_zf.
void validate(const NetworkConfig& config);
void validate_zf(const NetworkConfig& config);

// Plain-text key=value configuration. Blank lines and lines starting with
// '#' are ignored. Unknown keys are an error.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_value_file(const std::string& path);

// Applies recognised keys to `config`; returns the keys it did not consume.
KeyValues apply_key_values(NetworkConfig& config, const KeyValues& values);

// Serializes every field as key=value lines in a stable order.
void write_key_values(std::ostream& out, const NetworkConfig& config);

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace d2d
