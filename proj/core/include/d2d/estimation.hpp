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
#include "d2d/random.hpp"
#include "d2d/tables.hpp"
#include "d2d/topology.hpp"

namespace d2d {

// CU k of every cell transmits cellular pilot k; D2D pair l transmits the
// D2D pilot of its group. Groups are 0-based here.
struct PilotAllocation {
    int users_per_cell = 0;
    int num_d2d_pilots = 0;
    std::vector<int> d2d_group;  // per pair, in [0, num_d2d_pilots)

    int pilot_length() const { return users_per_cell + num_d2d_pilots; }
    int cu_pilot(int k) const { return k; }
    std::vector<int> members(int group) const;

    bool operator==(const PilotAllocation&) const = default;
};

// Each D2D pair picks one of the D2D pilots uniformly at random.
PilotAllocation allocate_pilots(const NetworkConfig& config, Rng& rng);

// Pair l gets pilot l. Requires num_d2d_pilots == num_d2d_pairs.
PilotAllocation allocate_pilots_distinct(const NetworkConfig& config);

struct PilotPowers {
    Table2 cu;               // (cell, k), mW
    std::vector<double> d2d;  // per transmitter, mW

    static PilotPowers uniform(const NetworkConfig& config, double power_mw);
};

// Mean squares of the MMSE channel estimates (noise-normalised, linear).
//
//   gamma_bs_cu(b, b', k)   at BS b, for CU k of cell b'
//   gamma_bs_d2d(b, l)      at BS b, for D2D transmitter l
//   gamma_bs_group(b, i)    at BS b, for the superposition of pilot group i
//   gamma_d2d_cu(l, b, k)   at D2D receiver l, for CU k of cell b
//   gamma_d2d_d2d(l, l')    at D2D receiver l, for D2D transmitter l'
struct EstimationQuality {
    Table3 gamma_bs_cu;
    Table2 gamma_bs_d2d;
    Table2 gamma_bs_group;
    Table3 gamma_d2d_cu;
    Table2 gamma_d2d_d2d;

    bool operator==(const EstimationQuality&) const = default;
};

Table3 gamma_bs_cu(const NetworkRealization& net, const PilotPowers& pilots, int tau);
Table2 gamma_bs_d2d(const NetworkRealization& net, const PilotPowers& pilots,
                    const PilotAllocation& alloc, int tau);

// Group estimate quality, evaluated as tau * (sum sqrt(p) beta)^2 / (1 + tau sum p beta).
// Not used by any rate expression.
Table2 gamma_bs_group(const NetworkRealization& net, const PilotPowers& pilots,
                      const PilotAllocation& alloc, int tau);
Table3 gamma_d2d_cu(const NetworkRealization& net, const PilotPowers& pilots, int tau);
Table2 gamma_d2d_d2d(const NetworkRealization& net, const PilotPowers& pilots,
                     const PilotAllocation& alloc, int tau);

// All five tables; tau is taken from the allocation.
EstimationQuality estimate_quality(const NetworkRealization& net, const PilotAllocation& alloc,
                                   const PilotPowers& pilots);

// One draw of the squared magnitudes of the channel estimates available at a
// D2D receiver. Estimates that share a pilot are scalings of the same
// despread observation, so a single unit-variance complex Gaussian is drawn
// per pilot and shared by every channel that uses it.
struct D2dEstimateDraw {
    Table2 cu;                // |g^(l,c)_(b,k)|^2, (cell, k)
    std::vector<double> d2d;  // |g^(l,d)_(l')|^2, per transmitter
};

void sample_d2d_estimates(const EstimationQuality& quality, const PilotAllocation& alloc,
                          std::size_t receiver, Rng& rng, D2dEstimateDraw& out);
D2dEstimateDraw sample_d2d_estimates(const EstimationQuality& quality, const PilotAllocation& alloc,
                                     std::size_t receiver, Rng& rng);

// Debug dump: "table,receiver,transmitter,value"; 3-D tables flatten the
// transmitter as "cell:k".
void write_gamma_csv(std::ostream& out, const EstimationQuality& quality);

}  // namespace d2d
