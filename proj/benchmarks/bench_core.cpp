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

#include <benchmark/benchmark.h>

#include "d2d/harness.hpp"

namespace {

using namespace d2d;

struct Fixture {
    NetworkConfig config;
    NetworkRealization net;
    PilotAllocation alloc;
    EstimationQuality quality;

    explicit Fixture(int antennas = 100) {
        config.antennas_per_bs = antennas;
        net = generate_network(config, 0);
        Rng rng = make_rng(config.rng_seed, 0, Stream::pilots);
        alloc = allocate_pilots(config, rng);
        quality = estimate_quality(net, alloc, PilotPowers::uniform(config, config.max_power_mw));
    }

    MaxMinProblem problem(Processing proc) const {
        return MaxMinProblem{.processing = proc,
                             .network = net,
                             .quality = quality,
                             .antennas = config.antennas_per_bs,
                             .num_d2d_pilots = config.num_d2d_pilots,
                             .prelog = prelog(config.pilot_length(), config.coherence_block),
                             .max_power_mw = config.max_power_mw};
    }
};

void BM_GenerateNetwork(benchmark::State& state) {
    const NetworkConfig config;
    std::size_t index = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_network(config, index++));
    }
}
BENCHMARK(BM_GenerateNetwork);

void BM_EstimateQuality(benchmark::State& state) {
    const Fixture f;
    const PilotPowers pilots = PilotPowers::uniform(f.config, f.config.max_power_mw);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_quality(f.net, f.alloc, pilots));
    }
}
BENCHMARK(BM_EstimateQuality);

void BM_SolveMaxMin(benchmark::State& state) {
    const Fixture f;
    const MaxMinProblem pr = f.problem(state.range(0) == 0 ? Processing::mr : Processing::zf);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_maxmin(pr));
    }
}
BENCHMARK(BM_SolveMaxMin)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_D2dExactMonteCarlo(benchmark::State& state) {
    const Fixture f;
    const PowerAssignment p = PowerAssignment::uniform(9, 2, 10, 200.0);
    const double pre = prelog(7, 200);
    const auto trials = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(se_d2d_exact_mc(p, f.quality, f.net, f.alloc, pre, trials, 7));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trials) * 10);
}
BENCHMARK(BM_D2dExactMonteCarlo)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Realization(benchmark::State& state) {
    const Scenario s = make_scenario(ScenarioKind::maxmin_d2d, Processing::zf, NetworkConfig{});
    RunOptions opt;
    opt.mc_trials = 10000;
    std::size_t index = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_realization(s, index++, 1, opt));
    }
}
BENCHMARK(BM_Realization)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
