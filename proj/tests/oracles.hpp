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

// Test-only reference implementations. Each one follows a different code
// path from the library routine it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "d2d/estimation.hpp"
#include "d2d/powerctl.hpp"
#include "d2d/se.hpp"
#include "d2d/topology.hpp"

namespace d2d::oracle {

// A transmitter as seen by the channel estimator: which pilot it sends and
// with what power.
struct Transmitter {
    int pilot = 0;
    double power = 0.0;
};

// Every transmitter in the network, CUs first (b * K + k) then D2D pairs.
inline std::vector<Transmitter> transmitters(const NetworkRealization& net, const PilotAllocation& alloc,
                                             const PilotPowers& pilots) {
    std::vector<Transmitter> tx;
    for (int b = 0; b < net.num_cells; ++b) {
        for (int k = 0; k < net.users_per_cell; ++k) {
            tx.push_back({k, pilots.cu(static_cast<std::size_t>(b), static_cast<std::size_t>(k))});
        }
    }
    for (int l = 0; l < net.num_d2d_pairs; ++l) {
        tx.push_back({net.users_per_cell + alloc.d2d_group[static_cast<std::size_t>(l)],
                      pilots.d2d[static_cast<std::size_t>(l)]});
    }
    return tx;
}

// Mean square of the linear MMSE estimate of h_i from the despread pilot
// observation y = sum_j a_j h_j + w, h_j ~ CN(0, beta_j), w ~ CN(0, 1):
//   h_hat_i = E[h_i y*] / E[|y|^2] * y,  E|h_hat_i|^2 = |E[h_i y*]|^2 / E[|y|^2].
inline double mmse_mean_square(const std::vector<double>& amplitude, const std::vector<double>& beta,
                               std::size_t i) {
    double obs_var = 1.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
        obs_var += amplitude[j] * amplitude[j] * beta[j];
    }
    const double cross = amplitude[i] * beta[i];
    return cross * cross / obs_var;
}

// gamma for the link receiver <- transmitter `target`, given the receiver's
// beta towards every transmitter.
inline double gamma_for(const std::vector<Transmitter>& tx, const std::vector<double>& beta_row, int tau,
                        std::size_t target) {
    std::vector<double> amp;
    std::vector<double> beta;
    std::size_t local = 0;
    for (std::size_t j = 0; j < tx.size(); ++j) {
        if (tx[j].pilot != tx[target].pilot) {
            continue;
        }
        if (j == target) {
            local = amp.size();
        }
        amp.push_back(std::sqrt(tau * tx[j].power));
        beta.push_back(beta_row[j]);
    }
    return mmse_mean_square(amp, beta, local);
}

inline std::vector<double> bs_row(const NetworkRealization& net, std::size_t b) {
    std::vector<double> row;
    for (std::size_t bp = 0; bp < static_cast<std::size_t>(net.num_cells); ++bp) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(net.users_per_cell); ++k) {
            row.push_back(net.beta_bs_cu(b, bp, k));
        }
    }
    for (std::size_t l = 0; l < static_cast<std::size_t>(net.num_d2d_pairs); ++l) {
        row.push_back(net.beta_bs_d2d(b, l));
    }
    return row;
}

inline std::vector<double> rx_row(const NetworkRealization& net, std::size_t l) {
    std::vector<double> row;
    for (std::size_t b = 0; b < static_cast<std::size_t>(net.num_cells); ++b) {
        for (std::size_t k = 0; k < static_cast<std::size_t>(net.users_per_cell); ++k) {
            row.push_back(net.beta_d2d_cu(l, b, k));
        }
    }
    for (std::size_t lp = 0; lp < static_cast<std::size_t>(net.num_d2d_pairs); ++lp) {
        row.push_back(net.beta_d2d_d2d(l, lp));
    }
    return row;
}

inline EstimationQuality estimate_quality(const NetworkRealization& net, const PilotAllocation& alloc,
                                          const PilotPowers& pilots) {
    const auto B = static_cast<std::size_t>(net.num_cells);
    const auto K = static_cast<std::size_t>(net.users_per_cell);
    const auto L = static_cast<std::size_t>(net.num_d2d_pairs);
    const auto N = static_cast<std::size_t>(alloc.num_d2d_pilots);
    const int tau = alloc.pilot_length();
    const std::vector<Transmitter> tx = transmitters(net, alloc, pilots);

    EstimationQuality q{Table3(B, B, K), Table2(B, L), Table2(B, N), Table3(L, B, K), Table2(L, L)};
    for (std::size_t b = 0; b < B; ++b) {
        const std::vector<double> row = bs_row(net, b);
        for (std::size_t bp = 0; bp < B; ++bp) {
            for (std::size_t k = 0; k < K; ++k) {
                q.gamma_bs_cu(b, bp, k) = gamma_for(tx, row, tau, bp * K + k);
            }
        }
        for (std::size_t l = 0; l < L; ++l) {
            q.gamma_bs_d2d(b, l) = gamma_for(tx, row, tau, B * K + l);
        }
        // group estimate: printed closed form, evaluated member by member
        for (std::size_t i = 0; i < N; ++i) {
            double amp = 0.0;
            double load = 0.0;
            for (std::size_t l = 0; l < L; ++l) {
                if (static_cast<std::size_t>(alloc.d2d_group[l]) == i) {
                    amp += std::sqrt(pilots.d2d[l]) * net.beta_bs_d2d(b, l);
                    load += tau * pilots.d2d[l] * net.beta_bs_d2d(b, l);
                }
            }
            q.gamma_bs_group(b, i) = tau * amp * amp / (1.0 + load);
        }
    }
    for (std::size_t l = 0; l < L; ++l) {
        const std::vector<double> row = rx_row(net, l);
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                q.gamma_d2d_cu(l, b, k) = gamma_for(tx, row, tau, b * K + k);
            }
        }
        for (std::size_t lp = 0; lp < L; ++lp) {
            q.gamma_d2d_d2d(l, lp) = gamma_for(tx, row, tau, B * K + lp);
        }
    }
    return q;
}

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Exact D2D bound by Monte-Carlo, collapsing co-pilot terms first: every
// estimate on pilot s is sqrt(gamma) * z_s, so the random part of the
// effective noise is sum_s |z_s|^2 * (sum of p * gamma over pilot s).
// |z_s|^2 ~ Exp(1) is drawn by inversion from a 32-bit generator.
inline McEstimate d2d_exact(const PowerAssignment& p, const EstimationQuality& q, const NetworkRealization& net,
                            const PilotAllocation& alloc, double prelog, std::size_t l, std::size_t trials,
                            unsigned seed) {
    const auto B = static_cast<std::size_t>(net.num_cells);
    const auto K = static_cast<std::size_t>(net.users_per_cell);
    const auto L = static_cast<std::size_t>(net.num_d2d_pairs);
    const auto S = K + static_cast<std::size_t>(alloc.num_d2d_pilots);
    std::vector<double> weight(S, 0.0);
    double fixed = 1.0;
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < K; ++k) {
            weight[k] += p.cu(b, k) * q.gamma_d2d_cu(l, b, k);
            fixed += p.cu(b, k) * (net.beta_d2d_cu(l, b, k) - q.gamma_d2d_cu(l, b, k));
        }
    }
    for (std::size_t lp = 0; lp < L; ++lp) {
        fixed += p.d2d[lp] * (net.beta_d2d_d2d(l, lp) - q.gamma_d2d_d2d(l, lp));
        if (lp != l) {
            weight[K + static_cast<std::size_t>(alloc.d2d_group[lp])] += p.d2d[lp] * q.gamma_d2d_d2d(l, lp);
        }
    }
    const std::size_t own = K + static_cast<std::size_t>(alloc.d2d_group[l]);
    const double signal = p.d2d[l] * q.gamma_d2d_d2d(l, l);

    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> e(S);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        double noise = fixed;
        for (std::size_t s = 0; s < S; ++s) {
            e[s] = -std::log1p(-u(gen));
            noise += weight[s] * e[s];
        }
        const double v = prelog * std::log2(1.0 + signal * e[own] / noise);
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(trials);
    const double mean = sum / n;
    const double var = std::max(0.0, sum_sq / n - mean * mean);
    return {mean, std::sqrt(var / n)};
}

struct GridOptimum {
    double lambda = 0.0;
    std::vector<double> powers;
};

// Max over a uniform power grid (points_per_axis per user, including 0 and
// P_max) of the minimum constraint SE.
inline GridOptimum grid_maxmin(const MaxMinProblem& problem, int points_per_axis) {
    const NetworkRealization& net = problem.network;
    const std::size_t n = static_cast<std::size_t>(net.num_cells * net.users_per_cell + net.num_d2d_pairs);
    std::vector<int> idx(n, 0);
    std::vector<double> p(n, 0.0);
    GridOptimum best;
    best.lambda = -1.0;
    const double step = problem.max_power_mw / (points_per_axis - 1);
    while (true) {
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = idx[i] * step;
        }
        const PowerAssignment pa = unstack_powers(p, net.num_cells, net.users_per_cell, net.num_d2d_pairs);
        const std::vector<double> se = constraint_se(problem, pa);
        const double m = *std::min_element(se.begin(), se.end());
        if (m > best.lambda) {
            best.lambda = m;
            best.powers = p;
        }
        std::size_t d = 0;
        while (d < n && ++idx[d] == points_per_axis) {
            idx[d] = 0;
            ++d;
        }
        if (d == n) {
            break;
        }
    }
    return best;
}

// Best min-SE over the 2^n grid points surrounding `powers`.
inline double best_grid_neighbour(const MaxMinProblem& problem, const std::vector<double>& powers,
                                  int points_per_axis) {
    const NetworkRealization& net = problem.network;
    const std::size_t n = powers.size();
    const double step = problem.max_power_mw / (points_per_axis - 1);
    double best = -1.0;
    std::vector<double> p(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        for (std::size_t i = 0; i < n; ++i) {
            const double lo = std::floor(powers[i] / step) * step;
            p[i] = std::min(problem.max_power_mw, ((mask >> i) & 1U) ? lo + step : lo);
        }
        const PowerAssignment pa = unstack_powers(p, net.num_cells, net.users_per_cell, net.num_d2d_pairs);
        const std::vector<double> se = constraint_se(problem, pa);
        best = std::max(best, *std::min_element(se.begin(), se.end()));
    }
    return best;
}

// Small synthetic network with log-uniform large-scale fading: strong
// serving links, weaker cross links. Positions are left empty.
inline NetworkRealization random_tiny_network(int B, int K, int L, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> serving(0.0, 1.5);  // log10 beta
    std::uniform_real_distribution<double> cross(-3.0, -0.5);
    std::uniform_real_distribution<double> d2d_link(0.5, 1.5);
    NetworkRealization net;
    net.num_cells = B;
    net.users_per_cell = K;
    net.num_d2d_pairs = L;
    const auto b_ = static_cast<std::size_t>(B);
    const auto k_ = static_cast<std::size_t>(K);
    const auto l_ = static_cast<std::size_t>(L);
    net.beta_bs_cu = Table3(b_, b_, k_);
    net.beta_bs_d2d = Table2(b_, l_);
    net.beta_d2d_cu = Table3(l_, b_, k_);
    net.beta_d2d_d2d = Table2(l_, l_);
    for (std::size_t b = 0; b < b_; ++b) {
        for (std::size_t bp = 0; bp < b_; ++bp) {
            for (std::size_t k = 0; k < k_; ++k) {
                net.beta_bs_cu(b, bp, k) = std::pow(10.0, b == bp ? serving(rng) - 2.0 : cross(rng) - 1.0);
            }
        }
        for (std::size_t l = 0; l < l_; ++l) {
            net.beta_bs_d2d(b, l) = std::pow(10.0, cross(rng) - 1.0);
        }
    }
    for (std::size_t l = 0; l < l_; ++l) {
        for (std::size_t b = 0; b < b_; ++b) {
            for (std::size_t k = 0; k < k_; ++k) {
                net.beta_d2d_cu(l, b, k) = std::pow(10.0, cross(rng));
            }
        }
        for (std::size_t lp = 0; lp < l_; ++lp) {
            net.beta_d2d_d2d(l, lp) = std::pow(10.0, l == lp ? d2d_link(rng) : cross(rng));
        }
    }
    return net;
}

}  // namespace d2d::oracle
