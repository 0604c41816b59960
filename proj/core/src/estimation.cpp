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

#include "d2d/estimation.hpp"

#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace d2d {

std::vector<int> PilotAllocation::members(int group) const {
    std::vector<int> out;
    for (std::size_t l = 0; l < d2d_group.size(); ++l) {
        if (d2d_group[l] == group) {
            out.push_back(static_cast<int>(l));
        }
    }
    return out;
}

PilotAllocation allocate_pilots(const NetworkConfig& config, Rng& rng) {
    if (config.num_d2d_pilots > config.coherence_block - config.users_per_cell) {
        throw std::invalid_argument("allocate_pilots: not enough pilot symbols for the D2D pilots");
    }
    PilotAllocation alloc;
    alloc.users_per_cell = config.users_per_cell;
    alloc.num_d2d_pilots = config.num_d2d_pilots;
    alloc.d2d_group.resize(static_cast<std::size_t>(config.num_d2d_pairs));
    if (config.num_d2d_pairs > 0) {
        std::uniform_int_distribution<int> pick(0, config.num_d2d_pilots - 1);
        for (int& g : alloc.d2d_group) {
            g = pick(rng);
        }
    }
    return alloc;
}

PilotAllocation allocate_pilots_distinct(const NetworkConfig& config) {
    if (config.num_d2d_pilots != config.num_d2d_pairs) {
        throw std::invalid_argument("allocate_pilots_distinct: needs d2d_pilots == d2d_pairs");
    }
    PilotAllocation alloc;
    alloc.users_per_cell = config.users_per_cell;
    alloc.num_d2d_pilots = config.num_d2d_pilots;
    alloc.d2d_group.resize(static_cast<std::size_t>(config.num_d2d_pairs));
    for (std::size_t l = 0; l < alloc.d2d_group.size(); ++l) {
        alloc.d2d_group[l] = static_cast<int>(l);
    }
    return alloc;
}

PilotPowers PilotPowers::uniform(const NetworkConfig& config, double power_mw) {
    PilotPowers p;
    p.cu = Table2(static_cast<std::size_t>(config.num_cells),
                  static_cast<std::size_t>(config.users_per_cell), power_mw);
    p.d2d.assign(static_cast<std::size_t>(config.num_d2d_pairs), power_mw);
    return p;
}

Table3 gamma_bs_cu(const NetworkRealization& net, const PilotPowers& pilots, int tau) {
    const std::size_t B = net.beta_bs_cu.dim0();
    const std::size_t K = net.beta_bs_cu.dim2();
    Table3 gamma(B, B, K);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < K; ++k) {
            double contamination = 0.0;
            for (std::size_t bp = 0; bp < B; ++bp) {
                contamination += pilots.cu(bp, k) * net.beta_bs_cu(b, bp, k);
            }
            const double denom = 1.0 + tau * contamination;
            for (std::size_t bp = 0; bp < B; ++bp) {
                const double beta = net.beta_bs_cu(b, bp, k);
                gamma(b, bp, k) = tau * pilots.cu(bp, k) * beta * beta / denom;
            }
        }
    }
    return gamma;
}

namespace {

// Sum over each pilot group of p * beta(row, l) for one receiving row.
std::vector<double> group_load(const Table2& beta, std::size_t row, const PilotPowers& pilots,
                               const PilotAllocation& alloc) {
    std::vector<double> load(static_cast<std::size_t>(alloc.num_d2d_pilots), 0.0);
    for (std::size_t l = 0; l < alloc.d2d_group.size(); ++l) {
        load[static_cast<std::size_t>(alloc.d2d_group[l])] += pilots.d2d[l] * beta(row, l);
    }
    return load;
}

Table2 gamma_per_d2d_transmitter(const Table2& beta, const PilotPowers& pilots,
                                 const PilotAllocation& alloc, int tau) {
    Table2 gamma(beta.rows(), beta.cols());
    for (std::size_t r = 0; r < beta.rows(); ++r) {
        const std::vector<double> load = group_load(beta, r, pilots, alloc);
        for (std::size_t l = 0; l < beta.cols(); ++l) {
            const double denom = 1.0 + tau * load[static_cast<std::size_t>(alloc.d2d_group[l])];
            gamma(r, l) = tau * pilots.d2d[l] * beta(r, l) * beta(r, l) / denom;
        }
    }
    return gamma;
}

}  // namespace

Table2 gamma_bs_d2d(const NetworkRealization& net, const PilotPowers& pilots,
                    const PilotAllocation& alloc, int tau) {
    return gamma_per_d2d_transmitter(net.beta_bs_d2d, pilots, alloc, tau);
}

Table2 gamma_bs_group(const NetworkRealization& net, const PilotPowers& pilots,
                      const PilotAllocation& alloc, int tau) {
    const std::size_t B = net.beta_bs_d2d.rows();
    const auto N = static_cast<std::size_t>(alloc.num_d2d_pilots);
    Table2 gamma(B, N);
    for (std::size_t b = 0; b < B; ++b) {
        const std::vector<double> load = group_load(net.beta_bs_d2d, b, pilots, alloc);
        std::vector<double> amplitude(N, 0.0);
        for (std::size_t l = 0; l < alloc.d2d_group.size(); ++l) {
            amplitude[static_cast<std::size_t>(alloc.d2d_group[l])] +=
                std::sqrt(pilots.d2d[l]) * net.beta_bs_d2d(b, l);
        }
        for (std::size_t i = 0; i < N; ++i) {
            gamma(b, i) = tau * amplitude[i] * amplitude[i] / (1.0 + tau * load[i]);
        }
    }
    return gamma;
}

Table3 gamma_d2d_cu(const NetworkRealization& net, const PilotPowers& pilots, int tau) {
    const std::size_t L = net.beta_d2d_cu.dim0();
    const std::size_t B = net.beta_d2d_cu.dim1();
    const std::size_t K = net.beta_d2d_cu.dim2();
    Table3 gamma(L, B, K);
    for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t k = 0; k < K; ++k) {
            double contamination = 0.0;
            for (std::size_t b = 0; b < B; ++b) {
                contamination += pilots.cu(b, k) * net.beta_d2d_cu(l, b, k);
            }
            const double denom = 1.0 + tau * contamination;
            for (std::size_t b = 0; b < B; ++b) {
                const double beta = net.beta_d2d_cu(l, b, k);
                gamma(l, b, k) = tau * pilots.cu(b, k) * beta * beta / denom;
            }
        }
    }
    return gamma;
}

Table2 gamma_d2d_d2d(const NetworkRealization& net, const PilotPowers& pilots,
                     const PilotAllocation& alloc, int tau) {
    return gamma_per_d2d_transmitter(net.beta_d2d_d2d, pilots, alloc, tau);
}

EstimationQuality estimate_quality(const NetworkRealization& net, const PilotAllocation& alloc,
                                   const PilotPowers& pilots) {
    if (alloc.d2d_group.size() != static_cast<std::size_t>(net.num_d2d_pairs) ||
        alloc.users_per_cell != net.users_per_cell) {
        throw std::invalid_argument("estimate_quality: allocation does not match the network");
    }
    const int tau = alloc.pilot_length();
    return EstimationQuality{
        gamma_bs_cu(net, pilots, tau),
        gamma_bs_d2d(net, pilots, alloc, tau),
        gamma_bs_group(net, pilots, alloc, tau),
        gamma_d2d_cu(net, pilots, tau),
        gamma_d2d_d2d(net, pilots, alloc, tau),
    };
}

void sample_d2d_estimates(const EstimationQuality& quality, const PilotAllocation& alloc,
                          std::size_t receiver, Rng& rng, D2dEstimateDraw& out) {
    const std::size_t B = quality.gamma_d2d_cu.dim1();
    const std::size_t K = quality.gamma_d2d_cu.dim2();
    const std::size_t L = quality.gamma_d2d_d2d.cols();
    const auto N = static_cast<std::size_t>(alloc.num_d2d_pilots);

    // CN(0, 1): real and imaginary parts each N(0, 1/2)
    std::normal_distribution<double> half(0.0, std::sqrt(0.5));
    thread_local std::vector<double> pilot_power;
    pilot_power.resize(K + N);
    for (double& z2 : pilot_power) {
        const double re = half(rng);
        const double im = half(rng);
        z2 = re * re + im * im;
    }

    if (out.cu.rows() != B || out.cu.cols() != K) {
        out.cu = Table2(B, K);
    }
    out.d2d.resize(L);
    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < K; ++k) {
            out.cu(b, k) = quality.gamma_d2d_cu(receiver, b, k) * pilot_power[k];
        }
    }
    for (std::size_t lp = 0; lp < L; ++lp) {
        out.d2d[lp] = quality.gamma_d2d_d2d(receiver, lp) *
                      pilot_power[K + static_cast<std::size_t>(alloc.d2d_group[lp])];
    }
}

D2dEstimateDraw sample_d2d_estimates(const EstimationQuality& quality, const PilotAllocation& alloc,
                                     std::size_t receiver, Rng& rng) {
    D2dEstimateDraw draw;
    sample_d2d_estimates(quality, alloc, receiver, rng, draw);
    return draw;
}

void write_gamma_csv(std::ostream& out, const EstimationQuality& q) {
    out << "table,receiver,transmitter,value\n";
    auto emit3 = [&](const char* name, const Table3& t) {
        for (std::size_t i = 0; i < t.dim0(); ++i) {
            for (std::size_t j = 0; j < t.dim1(); ++j) {
                for (std::size_t k = 0; k < t.dim2(); ++k) {
                    out << name << ',' << i << ',' << j << ':' << k << ',' << format_double(t(i, j, k)) << '\n';
                }
            }
        }
    };
    auto emit2 = [&](const char* name, const Table2& t) {
        for (std::size_t i = 0; i < t.rows(); ++i) {
            for (std::size_t j = 0; j < t.cols(); ++j) {
                out << name << ',' << i << ',' << j << ',' << format_double(t(i, j)) << '\n';
            }
        }
    };
    emit3("bs_cu", q.gamma_bs_cu);
    emit2("bs_d2d", q.gamma_bs_d2d);
    emit2("bs_group", q.gamma_bs_group);
    emit3("d2d_cu", q.gamma_d2d_cu);
    emit2("d2d_d2d", q.gamma_d2d_d2d);
}

}  // namespace d2d
