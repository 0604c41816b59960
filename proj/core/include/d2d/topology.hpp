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
#include <iosfwd>
#include <vector>

#include "d2d/config.hpp"
#include "d2d/tables.hpp"

namespace d2d {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

// Minimum-image Euclidean distance on a square torus of the given side.
double wrap_distance(Point a, Point b, double side);

// Three-slope large-scale fading in dB (a negative number for any realistic
// distance). Flat below d0, 20 dB/decade between d0 and d1, 35 dB/decade
// beyond d1. Distances in meters; the slopes are evaluated on kilometres.
double path_loss_db(double distance_m, const PathLossParams& params);

// Gain relative to the receiver noise floor, in linear scale. With this
// normalisation the noise variance is 1 and transmit powers are in mW.
double normalize_beta(double loss_db, double noise_dbm);

// Positions and noise-normalised large-scale fading for one network drop.
//
// Table layouts:
//   beta_bs_cu(b, b', k)   BS b <- CU k of cell b'
//   beta_bs_d2d(b, l)      BS b <- D2D transmitter l
//   beta_d2d_cu(l, b, k)   D2D receiver l <- CU k of cell b
//   beta_d2d_d2d(l, l')    D2D receiver l <- D2D transmitter l'
struct NetworkRealization {
    int num_cells = 0;
    int users_per_cell = 0;
    int num_d2d_pairs = 0;

    std::vector<Point> bs_positions;
    std::vector<Point> cu_positions;  // index b * K + k
    std::vector<Point> d2d_tx_positions;
    std::vector<Point> d2d_rx_positions;

    Table3 beta_bs_cu;
    Table2 beta_bs_d2d;
    Table3 beta_d2d_cu;
    Table2 beta_d2d_d2d;

    const Point& cu_position(int cell, int k) const {
        return cu_positions[static_cast<std::size_t>(cell * users_per_cell + k)];
    }

    bool operator==(const NetworkRealization&) const = default;
};

// Draws realization `realization_index` of the network described by `config`.
// BSs sit at the centres of a sqrt(B) x sqrt(B) grid, CUs are uniform in
// their own cell, D2D transmitters uniform over the whole area, and each
// receiver sits at the configured link distance in a uniform direction.
// The result depends only on (config, rng_seed, realization_index).
NetworkRealization generate_network(const NetworkConfig& config, std::size_t realization_index);

// Fills the four beta tables of `net` from its positions.
void compute_large_scale_fading(NetworkRealization& net, const NetworkConfig& config);

// Debug dump: "entity,index,x,y" with entity in {bs, cu, d2d_tx, d2d_rx}.
void write_positions_csv(std::ostream& out, const NetworkRealization& net);

}  // namespace d2d
