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
#include <string>
#include <string_view>
#include <vector>

#include "d2d/estimation.hpp"
#include "d2d/tables.hpp"
#include "d2d/topology.hpp"

namespace d2d {

enum class Processing { mr, zf };

std::string_view to_string(Processing p);
Processing parse_processing(std::string_view text);

// Data transmit powers in mW.
struct PowerAssignment {
    Table2 cu;                // (cell, k)
    std::vector<double> d2d;  // per transmitter

    static PowerAssignment uniform(int num_cells, int users_per_cell, int num_d2d_pairs, double power_mw);

    bool operator==(const PowerAssignment&) const = default;
};

// Fraction of the coherence block left for data.
double prelog(int pilot_length, int coherence_block);

// prelog * log2(1 + sinr), accurate for tiny SINR and finite for huge SINR.
double rate_from_sinr(double sinr, double prelog);

struct SEReport {
    Processing processing = Processing::zf;
    double prelog = 0.0;
    Table2 cu_se;                       // (cell, k), bit/s/Hz
    std::vector<double> d2d_se_exact;   // Monte-Carlo lower bound
    std::vector<double> d2d_se_approx;  // closed-form approximation

    double sum_se() const;
    double min_se() const;
};

// Maximum-ratio combining, use-and-then-forget bound.
Table2 se_cu_mr(const PowerAssignment& powers, const EstimationQuality& quality,
                const NetworkRealization& net, int antennas, double prelog);

// Zero-forcing that nulls the K in-cell CU directions and the N D2D pilot
// directions; the array gain left for the desired signal is M - (K + N).
// Throws std::invalid_argument if that gain is not positive.
Table2 se_cu_zf(const PowerAssignment& powers, const EstimationQuality& quality,
                const NetworkRealization& net, int antennas, int users_per_cell,
                int num_d2d_pilots, double prelog);

// Closed-form D2D approximation: expectations taken separately over the
// numerator and the denominator of the instantaneous SINR.
std::vector<double> se_d2d_approx(const PowerAssignment& powers, const EstimationQuality& quality,
                                  const NetworkRealization& net, double prelog);

// Lower bound with side information, expectation over the channel estimates
// evaluated by Monte-Carlo. Pair l uses its own RNG stream
// derive_seed(seed, l, Stream::monte_carlo), so results do not depend on
// which pairs are evaluated or in what order. trials must be >= 1.
double se_d2d_exact_mc_pair(const PowerAssignment& powers, const EstimationQuality& quality,
                            const NetworkRealization& net, const PilotAllocation& alloc,
                            double prelog, std::size_t pair, std::size_t trials, Rng& rng);

std::vector<double> se_d2d_exact_mc(const PowerAssignment& powers, const EstimationQuality& quality,
                                    const NetworkRealization& net, const PilotAllocation& alloc,
                                    double prelog, std::size_t trials, std::uint64_t seed);

}  // namespace d2d
