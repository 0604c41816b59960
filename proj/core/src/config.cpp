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

#include "d2d/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

namespace d2d {

double fixed_loss_db(const PathLossParams& p) {
    const double log_f = std::log10(p.carrier_mhz);
    return 46.3 + 33.9 * log_f - 13.82 * std::log10(p.bs_height_m) -
           (1.1 * log_f - 0.7) * p.user_height_m + (1.56 * log_f - 0.8);
}

int NetworkConfig::grid_side() const {
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(num_cells))));
}

double NetworkConfig::cell_side_m() const { return area_side_m / grid_side(); }

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument("invalid configuration: " + message);
    }
}

}  // namespace

void validate(const NetworkConfig& c) {
    require(c.num_cells >= 1, "cells must be >= 1");
    require(c.grid_side() * c.grid_side() == c.num_cells, "cells must be a perfect square");
    require(c.users_per_cell >= 1, "users_per_cell must be >= 1");
    require(c.num_d2d_pairs >= 0, "d2d_pairs must be >= 0");
    require(c.num_d2d_pilots >= 0, "d2d_pilots must be >= 0");
    require(c.num_d2d_pilots <= c.num_d2d_pairs, "d2d_pilots must not exceed d2d_pairs");
    require(c.num_d2d_pairs == 0 || c.num_d2d_pilots >= 1,
            "d2d_pilots must be >= 1 when d2d_pairs > 0");
    require(c.antennas_per_bs >= 1, "antennas must be >= 1");
    require(c.pilot_length() < c.coherence_block,
            "pilot length users_per_cell + d2d_pilots must be below coherence_block");
    require(std::isfinite(c.area_side_m) && c.area_side_m > 0.0, "area_side_m must be > 0");
    require(c.pathloss.d0_m > 0.0 && c.pathloss.d0_m < c.pathloss.d1_m &&
                c.pathloss.d1_m < c.area_side_m,
            "need 0 < d0 < d1 < area_side");
    require(c.pathloss.carrier_mhz > 0.0, "carrier_mhz must be > 0");
    require(c.pathloss.bs_height_m > 0.0 && c.pathloss.user_height_m > 0.0,
            "antenna heights must be > 0");
    require(std::isfinite(c.d2d_link_distance_m) && c.d2d_link_distance_m >= 0.0 &&
                c.d2d_link_distance_m < c.area_side_m / 2.0,
            "d2d_distance_m must lie in [0, area_side/2)");
    require(std::isfinite(c.noise_power_dbm), "noise_dbm must be finite");
    require(std::isfinite(c.max_power_mw) && c.max_power_mw > 0.0, "max_power_mw must be > 0");
    require(std::isfinite(c.bandwidth_mhz) && c.bandwidth_mhz > 0.0, "bandwidth_mhz must be > 0");
}

void validate_zf(const NetworkConfig& c) {
    require(c.antennas_per_bs > c.pilot_length(),
            "zero-forcing needs antennas > users_per_cell + d2d_pilots");
}

KeyValues parse_key_values(std::istream& in) {
    KeyValues out;
    std::string line;
    int line_no = 0;
    auto trim = [](std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r");
        if (first == std::string_view::npos) {
            return std::string{};
        }
        const auto last = s.find_last_not_of(" \t\r");
        return std::string(s.substr(first, last - first + 1));
    };
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": expected key=value, got '" + text + "'");
        }
        std::string key = trim(std::string_view(text).substr(0, eq));
        std::string value = trim(std::string_view(text).substr(eq + 1));
        if (key.empty()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": empty key");
        }
        out[std::move(key)] = std::move(value);
    }
    return out;
}

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    return parse_key_values(in);
}

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw std::invalid_argument("config key '" + key + "': cannot parse '" + text + "'");
    }
    return value;
}

struct Field {
    const char* key;
    std::function<void(NetworkConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const NetworkConfig&)> get;
};

template <class T, class Member>
Field make_field(const char* key, Member member) {
    return Field{
        key,
        [member](NetworkConfig& c, const std::string& k, const std::string& v) {
            std::invoke(member, c) = parse_number<T>(k, v);
        },
        [member](const NetworkConfig& c) {
            // accessors are written against a mutable config; reads do not modify it
            const T value = std::invoke(member, const_cast<NetworkConfig&>(c));
            if constexpr (std::is_floating_point_v<T>) {
                return format_double(value);
            } else {
                return std::to_string(value);
            }
        }};
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = {
        make_field<int>("cells", [](NetworkConfig& c) -> auto& { return c.num_cells; }),
        make_field<int>("users_per_cell", [](NetworkConfig& c) -> auto& { return c.users_per_cell; }),
        make_field<int>("d2d_pairs", [](NetworkConfig& c) -> auto& { return c.num_d2d_pairs; }),
        make_field<int>("d2d_pilots", [](NetworkConfig& c) -> auto& { return c.num_d2d_pilots; }),
        make_field<int>("antennas", [](NetworkConfig& c) -> auto& { return c.antennas_per_bs; }),
        make_field<double>("area_side_m", [](NetworkConfig& c) -> auto& { return c.area_side_m; }),
        make_field<double>("d2d_distance_m",
                           [](NetworkConfig& c) -> auto& { return c.d2d_link_distance_m; }),
        make_field<int>("coherence_block", [](NetworkConfig& c) -> auto& { return c.coherence_block; }),
        make_field<double>("d0_m", [](NetworkConfig& c) -> auto& { return c.pathloss.d0_m; }),
        make_field<double>("d1_m", [](NetworkConfig& c) -> auto& { return c.pathloss.d1_m; }),
        make_field<double>("carrier_mhz", [](NetworkConfig& c) -> auto& { return c.pathloss.carrier_mhz; }),
        make_field<double>("bs_height_m", [](NetworkConfig& c) -> auto& { return c.pathloss.bs_height_m; }),
        make_field<double>("user_height_m",
                           [](NetworkConfig& c) -> auto& { return c.pathloss.user_height_m; }),
        make_field<double>("noise_dbm", [](NetworkConfig& c) -> auto& { return c.noise_power_dbm; }),
        make_field<double>("max_power_mw", [](NetworkConfig& c) -> auto& { return c.max_power_mw; }),
        make_field<double>("bandwidth_mhz", [](NetworkConfig& c) -> auto& { return c.bandwidth_mhz; }),
        make_field<std::uint64_t>("seed", [](NetworkConfig& c) -> auto& { return c.rng_seed; }),
    };
    return table;
}

}  // namespace

KeyValues apply_key_values(NetworkConfig& config, const KeyValues& values) {
    KeyValues rest = values;
    for (const Field& f : fields()) {
        auto it = rest.find(f.key);
        if (it != rest.end()) {
            f.set(config, it->first, it->second);
            rest.erase(it);
        }
    }
    return rest;
}

void write_key_values(std::ostream& out, const NetworkConfig& config) {
    for (const Field& f : fields()) {
        out << f.key << '=' << f.get(config) << '\n';
    }
}

std::string format_double(double value) {
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buf.data(), ptr);
}

}  // namespace d2d
