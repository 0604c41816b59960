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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "d2d/se.hpp"
#include "oracles.hpp"

namespace d2d {
namespace {

constexpr double kPrelog = 1.0 - 7.0 / 200.0;

struct Instance {
    NetworkConfig config;
    NetworkRealization net;
    PilotAllocation alloc;
    EstimationQuality quality;
    PowerAssignment full;
};

Instance default_instance(std::size_t index, int antennas = 100) {
    Instance s;
    s.config.antennas_per_bs = antennas;
    s.net = generate_network(s.config, index);
    Rng rng(derive_seed(s.config.rng_seed, index, Stream::pilots));
    s.alloc = allocate_pilots(s.config, rng);
    s.quality = estimate_quality(s.net, s.alloc, PilotPowers::uniform(s.config, s.config.max_power_mw));
    s.full = PowerAssignment::uniform(9, 2, 10, s.config.max_power_mw);
    return s;
}

TEST(Prelog, DefaultPilotBudget) {
    EXPECT_NEAR(prelog(7, 200), 0.965, 1e-15);
    EXPECT_THROW(prelog(200, 200), std::invalid_argument);
}

TEST(RateFromSinr, StableAtExtremes) {
    EXPECT_NEAR(rate_from_sinr(1e-20, 1.0), 1e-20 / std::log(2.0), 1e-34);
    EXPECT_NEAR(rate_from_sinr(1e300, 1.0), 300.0 * std::log2(10.0), 1e-9);
    EXPECT_TRUE(std::isfinite(rate_from_sinr(1e308, 0.5)));
    EXPECT_DOUBLE_EQ(rate_from_sinr(3.0, 0.5), 1.0);
}

TEST(SeCuMr, ZeroOwnPowerGivesZero) {
    Instance s = default_instance(0);
    s.full.cu(4, 1) = 0.0;
    EXPECT_EQ(se_cu_mr(s.full, s.quality, s.net, 100, kPrelog)(4, 1), 0.0);
    EXPECT_EQ(se_cu_zf(s.full, s.quality, s.net, 100, 2, 5, kPrelog)(4, 1), 0.0);
}

TEST(SeCuMr, SingleUserUnitSinr) {
    std::mt19937_64 rng(1);
    NetworkRealization net = oracle::random_tiny_network(1, 1, 0, rng);
    net.beta_bs_cu(0, 0, 0) = 1e-9;
    EstimationQuality q{Table3(1, 1, 1), Table2(1, 0), Table2(1, 0), Table3(0, 1, 1), Table2(0, 0)};
    q.gamma_bs_cu(0, 0, 0) = 0.01;
    const PowerAssignment p = PowerAssignment::uniform(1, 1, 0, 1.0);
    // M p gamma = 1, interference 1 + 1e-9
    EXPECT_NEAR(se_cu_mr(p, q, net, 100, kPrelog)(0, 0), kPrelog, 1e-8);
}

TEST(SeCuZf, MinimalArrayGainAndPerfectEstimation) {
    std::mt19937_64 rng(2);
    NetworkRealization net = oracle::random_tiny_network(1, 2, 1, rng);
    EstimationQuality q{net.beta_bs_cu, net.beta_bs_d2d, Table2(1, 1), Table3(1, 1, 2), Table2(1, 1)};
    const PowerAssignment p = PowerAssignment::uniform(1, 2, 1, 3.0);
    // gamma == beta: residual interference vanishes, only noise remains
    const Table2 se = se_cu_zf(p, q, net, 2 + 1 + 1, 2, 1, kPrelog);
    for (std::size_t k = 0; k < 2; ++k) {
        EXPECT_NEAR(se(0, k), kPrelog * std::log2(1.0 + 3.0 * net.beta_bs_cu(0, 0, k) * 1.0), 1e-12);
    }
    EXPECT_THROW(se_cu_zf(p, q, net, 3, 2, 1, kPrelog), std::invalid_argument);
}

TEST(SeCuZf, EqualsMrOnResidualChannels) {
    const Instance s = default_instance(4);
    NetworkRealization residual = s.net;
    for (std::size_t i = 0; i < residual.beta_bs_cu.size(); ++i) {
        residual.beta_bs_cu.values()[i] -= s.quality.gamma_bs_cu.values()[i];
    }
    for (std::size_t i = 0; i < residual.beta_bs_d2d.size(); ++i) {
        residual.beta_bs_d2d.values()[i] -= s.quality.gamma_bs_d2d.values()[i];
    }
    PowerAssignment p = s.full;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    for (double& v : p.cu.values()) {
        v = u(rng);
    }
    const Table2 zf = se_cu_zf(p, s.quality, s.net, 100, 2, 5, kPrelog);
    const Table2 mr = se_cu_mr(p, s.quality, residual, 100 - 7, kPrelog);
    for (std::size_t i = 0; i < zf.size(); ++i) {
        EXPECT_NEAR(zf.values()[i], mr.values()[i], 1e-12 * zf.values()[i]);
    }
}

TEST(SeCu, ZfBeatsMrOnSeededInstance) {
    // Default geometry, full power: in-cell and D2D non-coherent
    // interference dominates, which ZF removes at the cost of 7 dimensions.
    const Instance s = default_instance(0);
    const Table2 zf = se_cu_zf(s.full, s.quality, s.net, 100, 2, 5, kPrelog);
    const Table2 mr = se_cu_mr(s.full, s.quality, s.net, 100, kPrelog);
    double zf_sum = 0.0, mr_sum = 0.0;
    for (std::size_t i = 0; i < zf.size(); ++i) {
        EXPECT_GE(zf.values()[i], mr.values()[i]) << "cu " << i;
        zf_sum += zf.values()[i];
        mr_sum += mr.values()[i];
    }
    EXPECT_GT(zf_sum, mr_sum);
}

TEST(SeProperties, MonotoneInOwnAndOtherPowers) {
    const Instance s = default_instance(1);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(1.0, 150.0);
    for (int rep = 0; rep < 20; ++rep) {
        PowerAssignment p = s.full;
        for (double& v : p.cu.values()) {
            v = u(rng);
        }
        for (double& v : p.d2d) {
            v = u(rng);
        }
        auto all_se = [&](const PowerAssignment& pa) {
            std::vector<double> out = se_cu_mr(pa, s.quality, s.net, 100, kPrelog).values();
            const auto zf = se_cu_zf(pa, s.quality, s.net, 100, 2, 5, kPrelog).values();
            const auto d2d = se_d2d_approx(pa, s.quality, s.net, kPrelog);
            out.insert(out.end(), zf.begin(), zf.end());
            out.insert(out.end(), d2d.begin(), d2d.end());
            return out;
        };
        const std::vector<double> base = all_se(p);
        // user indices inside all_se: MR cu [0,18), ZF cu [18,36), D2D [36,46)
        const std::size_t cu = rng() % 18;
        const std::size_t pair = rng() % 10;

        PowerAssignment more_cu = p;
        more_cu.cu.values()[cu] *= 2.0;
        const std::vector<double> a = all_se(more_cu);
        EXPECT_GT(a[cu], base[cu]);
        EXPECT_GT(a[18 + cu], base[18 + cu]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i != cu && i != 18 + cu) {
                EXPECT_LE(a[i], base[i]);
            }
        }
        EXPECT_LT(a[36 + pair], base[36 + pair]);

        PowerAssignment more_d2d = p;
        more_d2d.d2d[pair] *= 2.0;
        const std::vector<double> b = all_se(more_d2d);
        EXPECT_GT(b[36 + pair], base[36 + pair]);
        for (std::size_t i = 0; i < 36; ++i) {
            EXPECT_LT(b[i], base[i]);
        }
    }
}

TEST(SeD2dApprox, ZeroPowerAndInterferenceFreeLink) {
    std::mt19937_64 rng(6);
    NetworkRealization net = oracle::random_tiny_network(1, 1, 1, rng);
    EstimationQuality q{Table3(1, 1, 1), Table2(1, 1), Table2(1, 1), Table3(1, 1, 1), net.beta_d2d_d2d};
    PowerAssignment p = PowerAssignment::uniform(1, 1, 1, 0.0);
    p.d2d[0] = 5.0;
    const double beta = net.beta_d2d_d2d(0, 0);
    EXPECT_NEAR(se_d2d_approx(p, q, net, kPrelog)[0], kPrelog * std::log2(1.0 + 5.0 * beta), 1e-12);
    p.d2d[0] = 0.0;
    EXPECT_EQ(se_d2d_approx(p, q, net, kPrelog)[0], 0.0);
}

TEST(SeD2dExact, DegenerateCases) {
    const Instance s = default_instance(0);
    PowerAssignment p = s.full;
    p.d2d[3] = 0.0;
    EXPECT_EQ(se_d2d_exact_mc(p, s.quality, s.net, s.alloc, kPrelog, 1, 1)[3], 0.0);
    EXPECT_THROW(se_d2d_exact_mc(p, s.quality, s.net, s.alloc, kPrelog, 0, 1), std::invalid_argument);

    std::mt19937_64 rng(7);
    const NetworkRealization net = oracle::random_tiny_network(1, 1, 1, rng);
    const NetworkConfig c = [] {
        NetworkConfig x;
        x.num_cells = 1;
        x.users_per_cell = 1;
        x.num_d2d_pairs = 1;
        x.num_d2d_pilots = 1;
        return x;
    }();
    PilotPowers pilots = PilotPowers::uniform(c, 200.0);
    pilots.d2d[0] = 0.0;
    const PilotAllocation a{1, 1, {0}};
    const EstimationQuality q = estimate_quality(net, a, pilots);
    PowerAssignment only = PowerAssignment::uniform(1, 1, 1, 0.0);
    only.d2d[0] = 200.0;
    EXPECT_EQ(se_d2d_exact_mc(only, q, net, a, kPrelog, 100, 3)[0], 0.0);
}

TEST(SeD2dExact, PrelogScalesExactly) {
    const Instance s = default_instance(2);
    const auto a = se_d2d_exact_mc(s.full, s.quality, s.net, s.alloc, kPrelog, 500, 9);
    const auto b = se_d2d_exact_mc(s.full, s.quality, s.net, s.alloc, 1.0, 500, 9);
    for (std::size_t l = 0; l < a.size(); ++l) {
        EXPECT_NEAR(a[l] / b[l], kPrelog, 1e-14);
    }
}

TEST(SeD2dExact, DeterministicPerSeedAndPair) {
    const Instance s = default_instance(3);
    const auto a = se_d2d_exact_mc(s.full, s.quality, s.net, s.alloc, kPrelog, 300, 21);
    const auto b = se_d2d_exact_mc(s.full, s.quality, s.net, s.alloc, kPrelog, 300, 21);
    EXPECT_EQ(a, b);
    Rng rng(derive_seed(21, 4, Stream::monte_carlo));
    EXPECT_EQ(se_d2d_exact_mc_pair(s.full, s.quality, s.net, s.alloc, kPrelog, 4, 300, rng), a[4]);
}

TEST(SeD2dExact, AgreesWithIndependentMonteCarlo) {
    // Force co-pilot sharing so the correlated terms matter.
    Instance s = default_instance(5);
    s.alloc.d2d_group = {0, 0, 0, 1, 1, 2, 2, 3, 4, 4};
    s.quality = estimate_quality(s.net, s.alloc, PilotPowers::uniform(s.config, 200.0));
    PowerAssignment p = s.full;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 200.0);
    for (double& v : p.cu.values()) {
        v = u(rng);
    }
    for (double& v : p.d2d) {
        v = u(rng);
    }
    const std::size_t trials = 20000;
    const auto got = se_d2d_exact_mc(p, s.quality, s.net, s.alloc, kPrelog, trials, 31);
    for (std::size_t l = 0; l < 10; ++l) {
        const oracle::McEstimate want =
            oracle::d2d_exact(p, s.quality, s.net, s.alloc, kPrelog, l, trials, static_cast<unsigned>(1000 + l));
        // both estimates carry roughly the same standard error
        EXPECT_NEAR(got[l], want.mean, 4.5 * std::sqrt(2.0) * want.std_error + 1e-12) << "pair " << l;
    }
}

TEST(SEReport, SumAndMin) {
    SEReport r;
    r.cu_se = Table2(1, 2);
    r.cu_se(0, 0) = 1.0;
    r.cu_se(0, 1) = 2.5;
    r.d2d_se_exact = {0.5, 4.0};
    r.d2d_se_approx = {9.0, 9.0};
    EXPECT_DOUBLE_EQ(r.sum_se(), 8.0);
    EXPECT_DOUBLE_EQ(r.min_se(), 0.5);
}

TEST(Processing, ParseAndPrint) {
    EXPECT_EQ(parse_processing("mr"), Processing::mr);
    EXPECT_EQ(to_string(parse_processing("zf")), "zf");
    EXPECT_THROW(parse_processing("mmse"), std::invalid_argument);
}

}  // namespace
}  // namespace d2d
