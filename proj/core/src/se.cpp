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

#include "d2d/se.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace d2d {

std::string_view to_string(Processing p) { return p == Processing::mr ? "mr" : "zf"; }

Processing parse_processing(std::string_view text) {
    if (text == "mr") {
        return Processing::mr;
    }
    if (text == "zf") {
        return Processing::zf;
    }
    throw std::invalid_argument("unknown processing '" + std::string(text) + "' (expected mr|zf)");
}

PowerAssignment PowerAssignment::uniform(int num_cells, int users_per_cell, int num_d2d_pairs,
                                         double power_mw) {
    PowerAssignment p;
    p.cu = Table2(static_cast<std::size_t>(num_cells), static_cast<std::size_t>(users_per_cell), power_mw);
    p.d2d.assign(static_cast<std::size_t>(num_d2d_pairs), power_mw);
    return p;
}

double prelog(int pilot_length, int coherence_block) {
    if (coherence_block <= 0 || pilot_length < 0 || pilot_length >= coherence_block) {
        throw std::invalid_argument("prelog: need 0 <= pilot_length < coherence_block");
    }
    return 1.0 - static_cast<double>(pilot_length) / coherence_block;
}

double rate_from_sinr(double sinr, double prelog) {
    return prelog * std::log1p(sinr) / std::numbers::ln2;
}

double SEReport::sum_se() const {
    double total = 0.0;
    for (double v : cu_se.values()) {
        total += v;
    }
    for (double v : d2d_se_exact) {
        total += v;
    }
    return total;
}

double SEReport::min_se() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : cu_se.values()) {
        m = std::min(m, v);
    }
    for (double v : d2d_se_exact) {
        m = std::min(m, v);
    }
    return m;
}

namespace {

struct Dims {
    std::size_t B, K, L;
};

Dims dims_of(const NetworkRealization& net) {
    return {static_cast<std::size_t>(net.num_cells), static_cast<std::size_t>(net.users_per_cell),
            static_cast<std::size_t>(net.num_d2d_pairs)};
}

// Shared structure of the MR and ZF bounds. `residual` selects beta - gamma
// (ZF) instead of beta (MR) for the non-coherent terms.
Table2 se_cu_linear(const PowerAssignment& powers, const EstimationQuality& quality,
                    const NetworkRealization& net, double array_gain, bool residual, double prelog) {
    const auto [B, K, L] = dims_of(net);
    Table2 se(B, K);
    for (std::size_t b = 0; b < B; ++b) {
        double non_coherent = 0.0;
        for (std::size_t bp = 0; bp < B; ++bp) {
            for (std::size_t kp = 0; kp < K; ++kp) {
                const double beta = net.beta_bs_cu(b, bp, kp);
                const double gain = residual ? beta - quality.gamma_bs_cu(b, bp, kp) : beta;
                non_coherent += powers.cu(bp, kp) * gain;
            }
        }
        for (std::size_t l = 0; l < L; ++l) {
            const double beta = net.beta_bs_d2d(b, l);
            const double gain = residual ? beta - quality.gamma_bs_d2d(b, l) : beta;
            non_coherent += powers.d2d[l] * gain;
        }
        for (std::size_t k = 0; k < K; ++k) {
            double coherent = 0.0;
            for (std::size_t bp = 0; bp < B; ++bp) {
                if (bp != b) {
                    coherent += powers.cu(bp, k) * quality.gamma_bs_cu(b, bp, k);
                }
            }
            const double interference = 1.0 + non_coherent + array_gain * coherent;
            const double signal = array_gain * powers.cu(b, k) * quality.gamma_bs_cu(b, b, k);
            se(b, k) = rate_from_sinr(signal / interference, prelog);
        }
    }
    return se;
}

}  // namespace

Table2 se_cu_mr(const PowerAssignment& powers, const EstimationQuality& quality,
                const NetworkRealization& net, int antennas, double prelog) {
    return se_cu_linear(powers, quality, net, static_cast<double>(antennas), false, prelog);
}

Table2 se_cu_zf(const PowerAssignment& powers, const EstimationQuality& quality,
                const NetworkRealization& net, int antennas, int users_per_cell,
                int num_d2d_pilots, double prelog) {
    const int gain = antennas - (users_per_cell + num_d2d_pilots);
    if (gain <= 0) {
        throw std::invalid_argument("se_cu_zf: antennas must exceed users_per_cell + d2d_pilots");
    }
    return se_cu_linear(powers, quality, net, static_cast<double>(gain), true, prelog);
}

std::vector<double> se_d2d_approx(const PowerAssignment& powers, const EstimationQuality& quality,
                                  const NetworkRealization& net, double prelog) {
    const auto [B, K, L] = dims_of(net);
    std::vector<double> se(L);
    for (std::size_t l = 0; l < L; ++l) {
        const double beta = net.beta_d2d_d2d(l, l);
        const double gamma = quality.gamma_d2d_d2d(l, l);
        double interference = 1.0 + powers.d2d[l] * (beta - gamma);
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                interference += powers.cu(b, k) * net.beta_d2d_cu(l, b, k);
            }
        }
        for (std::size_t lp = 0; lp < L; ++lp) {
            if (lp != l) {
                interference += powers.d2d[lp] * net.beta_d2d_d2d(l, lp);
            }
        }
        se[l] = rate_from_sinr(powers.d2d[l] * gamma / interference, prelog);
    }
    return se;
}

double se_d2d_exact_mc_pair(const PowerAssignment& powers, const EstimationQuality& quality,
                            const NetworkRealization& net, const PilotAllocation& alloc,
                            double prelog, std::size_t pair, std::size_t trials, Rng& rng) {
    if (trials == 0) {
        throw std::invalid_argument("se_d2d_exact_mc: trials must be >= 1");
    }
    const auto [B, K, L] = dims_of(net);
    const std::size_t l = pair;
    if (powers.d2d[l] == 0.0) {
        return 0.0;
    }

    // Part of the effective noise that does not depend on the draw.
    double fixed = 1.0 + powers.d2d[l] * (net.beta_d2d_d2d(l, l) - quality.gamma_d2d_d2d(l, l));
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < K; ++k) {
            fixed += powers.cu(b, k) * (net.beta_d2d_cu(l, b, k) - quality.gamma_d2d_cu(l, b, k));
        }
    }
    for (std::size_t lp = 0; lp < L; ++lp) {
        if (lp != l) {
            fixed += powers.d2d[lp] * (net.beta_d2d_d2d(l, lp) - quality.gamma_d2d_d2d(l, lp));
        }
    }

    D2dEstimateDraw draw;
    double acc = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        sample_d2d_estimates(quality, alloc, l, rng, draw);
        double noise = fixed;
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                noise += powers.cu(b, k) * draw.cu(b, k);
            }
        }
        for (std::size_t lp = 0; lp < L; ++lp) {
            if (lp != l) {
                noise += powers.d2d[lp] * draw.d2d[lp];
            }
        }
        acc += std::log1p(powers.d2d[l] * draw.d2d[l] / noise);
    }
    return prelog * acc / (static_cast<double>(trials) * std::numbers::ln2);
}

std::vector<double> se_d2d_exact_mc(const PowerAssignment& powers, const EstimationQuality& quality,
                                    const NetworkRealization& net, const PilotAllocation& alloc,
                                    double prelog, std::size_t trials, std::uint64_t seed) {
    if (trials == 0) {
        throw std::invalid_argument("se_d2d_exact_mc: trials must be >= 1");
    }
    const auto L = static_cast<std::size_t>(net.num_d2d_pairs);
    std::vector<double> se(L);
    for (std::size_t l = 0; l < L; ++l) {
        Rng rng(derive_seed(seed, l, Stream::monte_carlo));
        se[l] = se_d2d_exact_mc_pair(powers, quality, net, alloc, prelog, l, trials, rng);
    }
    return se;
}

}  // namespace d2d
