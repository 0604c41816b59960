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

#include "d2d/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>

#include "d2d/random.hpp"

namespace d2d {

double wrap_distance(Point a, Point b, double side) {
    double dx = std::abs(a.x - b.x);
    double dy = std::abs(a.y - b.y);
    dx = std::min(dx, side - dx);
    dy = std::min(dy, side - dy);
    return std::hypot(dx, dy);
}

double path_loss_db(double distance_m, const PathLossParams& params) {
    const double loss = fixed_loss_db(params);
    const double d_km = distance_m / 1000.0;
    const double d0_km = params.d0_m / 1000.0;
    const double d1_km = params.d1_m / 1000.0;
    if (distance_m > params.d1_m) {
        return -loss - 35.0 * std::log10(d_km);
    }
    if (distance_m > params.d0_m) {
        return -loss - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d_km);
    }
    return -loss - 15.0 * std::log10(d1_km) - 20.0 * std::log10(d0_km);
}

double normalize_beta(double loss_db, double noise_dbm) {
    return std::pow(10.0, (loss_db - noise_dbm) / 10.0);
}

namespace {

double wrap_coordinate(double v, double side) {
    double w = std::fmod(v, side);
    if (w < 0.0) {
        w += side;
    }
    // fmod of a tiny negative value can round up to exactly `side`
    return w >= side ? 0.0 : w;
}

}  // namespace

void compute_large_scale_fading(NetworkRealization& net, const NetworkConfig& config) {
    const auto B = static_cast<std::size_t>(net.num_cells);
    const auto K = static_cast<std::size_t>(net.users_per_cell);
    const auto L = static_cast<std::size_t>(net.num_d2d_pairs);
    const double side = config.area_side_m;

    auto beta_at = [&](double d) {
        return normalize_beta(path_loss_db(d, config.pathloss), config.noise_power_dbm);
    };

    net.beta_bs_cu = Table3(B, B, K);
    net.beta_bs_d2d = Table2(B, L);
    net.beta_d2d_cu = Table3(L, B, K);
    net.beta_d2d_d2d = Table2(L, L);

    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t bp = 0; bp < B; ++bp) {
            for (std::size_t k = 0; k < K; ++k) {
                net.beta_bs_cu(b, bp, k) =
                    beta_at(wrap_distance(net.bs_positions[b], net.cu_positions[bp * K + k], side));
            }
        }
        for (std::size_t l = 0; l < L; ++l) {
            net.beta_bs_d2d(b, l) = beta_at(wrap_distance(net.bs_positions[b], net.d2d_tx_positions[l], side));
        }
    }
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                net.beta_d2d_cu(l, b, k) =
                    beta_at(wrap_distance(net.d2d_rx_positions[l], net.cu_positions[b * K + k], side));
            }
        }
        for (std::size_t lp = 0; lp < L; ++lp) {
            // own link uses the nominal distance rather than the rounded positions
            const double d = (l == lp) ? config.d2d_link_distance_m
                                       : wrap_distance(net.d2d_rx_positions[l], net.d2d_tx_positions[lp], side);
            net.beta_d2d_d2d(l, lp) = beta_at(d);
        }
    }
}

NetworkRealization generate_network(const NetworkConfig& config, std::size_t realization_index) {
    validate(config);

    const int B = config.num_cells;
    const int K = config.users_per_cell;
    const int L = config.num_d2d_pairs;
    const int grid = config.grid_side();
    const double cell = config.cell_side_m();
    const double side = config.area_side_m;

    Rng rng = make_rng(config.rng_seed, realization_index, Stream::topology);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    NetworkRealization net;
    net.num_cells = B;
    net.users_per_cell = K;
    net.num_d2d_pairs = L;

    net.bs_positions.reserve(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        const int row = b / grid;
        const int col = b % grid;
        net.bs_positions.push_back({(col + 0.5) * cell, (row + 0.5) * cell});
    }

    // CUs are drawn before D2D nodes so the cellular layout of a realization
    // does not depend on the number of D2D pairs.
    net.cu_positions.reserve(static_cast<std::size_t>(B * K));
    for (int b = 0; b < B; ++b) {
        const int row = b / grid;
        const int col = b % grid;
        for (int k = 0; k < K; ++k) {
            const double x = (col + unit(rng)) * cell;
            const double y = (row + unit(rng)) * cell;
            net.cu_positions.push_back({std::min(x, (col + 1) * cell - 1e-9), std::min(y, (row + 1) * cell - 1e-9)});
        }
    }

    net.d2d_tx_positions.reserve(static_cast<std::size_t>(L));
    net.d2d_rx_positions.reserve(static_cast<std::size_t>(L));
    for (int l = 0; l < L; ++l) {
        const Point tx{unit(rng) * side, unit(rng) * side};
        const double angle = 2.0 * std::numbers::pi * unit(rng);
        const Point rx{wrap_coordinate(tx.x + config.d2d_link_distance_m * std::cos(angle), side),
                       wrap_coordinate(tx.y + config.d2d_link_distance_m * std::sin(angle), side)};
        net.d2d_tx_positions.push_back(tx);
        net.d2d_rx_positions.push_back(rx);
    }

    compute_large_scale_fading(net, config);
    return net;
}

void write_positions_csv(std::ostream& out, const NetworkRealization& net) {
    out << "entity,index,x,y\n";
    auto emit = [&](const char* entity, const std::vector<Point>& points) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            out << entity << ',' << i << ',' << format_double(points[i].x) << ','
                << format_double(points[i].y) << '\n';
        }
    };
    emit("bs", net.bs_positions);
    emit("cu", net.cu_positions);
    emit("d2d_tx", net.d2d_tx_positions);
    emit("d2d_rx", net.d2d_rx_positions);
}

}  // namespace d2d
