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

#include "d2d/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "d2d/estimation.hpp"
#include "d2d/random.hpp"
#include "d2d/topology.hpp"

#ifndef D2D_VERSION_STRING
#define D2D_VERSION_STRING "0.0.0"
#endif

namespace d2d {

std::string_view version() { return D2D_VERSION_STRING; }

std::string_view to_string(ScenarioKind kind) {
    switch (kind) {
    case ScenarioKind::max_power:
        return "max-power";
    case ScenarioKind::maxmin_d2d:
        return "maxmin-d2d";
    case ScenarioKind::cellular_only_maxmin:
        return "cellular-only-maxmin";
    }
    return "unknown";
}

ScenarioKind parse_scenario(std::string_view text) {
    for (ScenarioKind k : {ScenarioKind::max_power, ScenarioKind::maxmin_d2d, ScenarioKind::cellular_only_maxmin}) {
        if (text == to_string(k)) {
            return k;
        }
    }
    throw std::invalid_argument("unknown scenario '" + std::string(text) +
                                "' (expected max-power|maxmin-d2d|cellular-only-maxmin)");
}

Scenario make_scenario(ScenarioKind kind, Processing processing, NetworkConfig base) {
    if (kind == ScenarioKind::cellular_only_maxmin) {
        base.num_d2d_pairs = 0;
        base.num_d2d_pilots = 0;
    }
    validate(base);
    if (processing == Processing::zf) {
        validate_zf(base);
    }
    return Scenario{kind, processing, base};
}

Cdf aggregate_cdf(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("aggregate_cdf: empty sample");
    }
    std::sort(values.begin(), values.end());
    const auto n = static_cast<double>(values.size());
    Cdf cdf;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double p = static_cast<double>(i + 1) / n;
        if (!cdf.empty() && cdf.back().value == values[i]) {
            cdf.back().probability = p;
        } else {
            cdf.push_back({values[i], p});
        }
    }
    return cdf;
}

double percentile(const Cdf& cdf, double q) {
    if (cdf.empty() || !(q > 0.0 && q <= 1.0)) {
        throw std::invalid_argument("percentile: need a non-empty CDF and q in (0, 1]");
    }
    for (const CdfPoint& pt : cdf) {
        // tolerate i/n rounding, e.g. 0.1 vs 20/200
        if (pt.probability >= q - 1e-12) {
            return pt.value;
        }
    }
    return cdf.back().value;
}

namespace {

void write_file(const std::filesystem::path& path, const auto& writer) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + path.string());
    }
    writer(out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed: " + path.string());
    }
}

}  // namespace

RealizationResult run_realization(const Scenario& scenario, std::size_t index, std::uint64_t seed,
                                  const RunOptions& options) {
    NetworkConfig config = scenario.config;
    config.rng_seed = seed;

    const NetworkRealization net = generate_network(config, index);
    Rng pilot_rng = make_rng(seed, index, Stream::pilots);
    const PilotAllocation alloc = allocate_pilots(config, pilot_rng);
    const PilotPowers pilots = PilotPowers::uniform(config, config.max_power_mw);
    const EstimationQuality quality = estimate_quality(net, alloc, pilots);
    const double pre = prelog(config.pilot_length(), config.coherence_block);

    RealizationResult result;
    result.index = index;

    std::vector<BisectionStep> trace;
    if (scenario.kind == ScenarioKind::max_power) {
        result.powers = PowerAssignment::uniform(config.num_cells, config.users_per_cell, config.num_d2d_pairs,
                                                 config.max_power_mw);
    } else {
        const MaxMinProblem problem{
            .processing = scenario.processing,
            .network = net,
            .quality = quality,
            .antennas = config.antennas_per_bs,
            .num_d2d_pilots = config.num_d2d_pilots,
            .prelog = pre,
            .max_power_mw = config.max_power_mw,
            .lambda_tolerance = options.lambda_tolerance,
        };
        MaxMinSolution sol = solve_maxmin(problem);
        result.powers = std::move(sol.powers);
        result.lambda_star = sol.lambda;
        trace = std::move(sol.trace);
    }

    SEReport& rep = result.report;
    rep.processing = scenario.processing;
    rep.prelog = pre;
    rep.cu_se = scenario.processing == Processing::mr
                    ? se_cu_mr(result.powers, quality, net, config.antennas_per_bs, pre)
                    : se_cu_zf(result.powers, quality, net, config.antennas_per_bs, config.users_per_cell,
                               config.num_d2d_pilots, pre);
    rep.d2d_se_approx = se_d2d_approx(result.powers, quality, net, pre);
    rep.d2d_se_exact = se_d2d_exact_mc(result.powers, quality, net, alloc, pre, options.mc_trials,
                                       derive_seed(seed, index, Stream::monte_carlo));

    if (options.debug_dir) {
        const auto& dir = *options.debug_dir;
        std::filesystem::create_directories(dir);
        const std::string tag = std::to_string(index);
        write_file(dir / ("network_" + tag + ".csv"), [&](std::ostream& o) { write_positions_csv(o, net); });
        write_file(dir / ("gamma_" + tag + ".csv"), [&](std::ostream& o) { write_gamma_csv(o, quality); });
        if (!trace.empty()) {
            write_file(dir / ("trace_" + tag + ".csv"), [&](std::ostream& o) { write_trace_csv(o, trace); });
        }
    }
    return result;
}

ExperimentResult run_scenario(const Scenario& scenario, std::size_t num_realizations, std::uint64_t seed,
                              const RunOptions& options) {
    if (num_realizations == 0) {
        throw std::invalid_argument("run_scenario: num_realizations must be >= 1");
    }
    if (options.mc_trials == 0) {
        throw std::invalid_argument("run_scenario: mc_trials must be >= 1");
    }
    validate(scenario.config);
    if (scenario.processing == Processing::zf) {
        validate_zf(scenario.config);
    }

    ExperimentResult result;
    result.scenario = scenario;
    result.scenario.config.rng_seed = seed;
    result.seed = seed;
    result.mc_trials = options.mc_trials;
    result.version = std::string(version());
    result.realizations.resize(num_realizations);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t r = next++; r < num_realizations; r = next++) {
            try {
                result.realizations[r] = run_realization(scenario, r, seed, options);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = num_realizations;
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(num_realizations)));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<double> cu, d2d, sums;
    for (const RealizationResult& r : result.realizations) {
        const auto& c = r.report.cu_se.values();
        cu.insert(cu.end(), c.begin(), c.end());
        d2d.insert(d2d.end(), r.report.d2d_se_exact.begin(), r.report.d2d_se_exact.end());
        sums.push_back(r.report.sum_se());
    }
    result.cu_se = aggregate_cdf(std::move(cu));
    result.sum_se = aggregate_cdf(std::move(sums));
    if (!d2d.empty()) {
        result.d2d_se = aggregate_cdf(std::move(d2d));
    }
    return result;
}

namespace {

void write_cdf(const std::filesystem::path& path, const Cdf& cdf) {
    write_file(path, [&](std::ostream& out) {
        out << "value,cdf\n";
        for (const CdfPoint& pt : cdf) {
            out << format_double(pt.value) << ',' << format_double(pt.probability) << '\n';
        }
    });
}

}  // namespace

void write_outputs(const ExperimentResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + out_dir.string() + ": " + ec.message());
    }
    const NetworkConfig& config = result.scenario.config;
    const double bandwidth_hz = config.bandwidth_mhz * 1e6;

    write_file(out_dir / "per_user_se.csv", [&](std::ostream& out) {
        out << kPerUserHeader << '\n';
        for (const RealizationResult& r : result.realizations) {
            const SEReport& rep = r.report;
            for (std::size_t b = 0; b < rep.cu_se.rows(); ++b) {
                for (std::size_t k = 0; k < rep.cu_se.cols(); ++k) {
                    out << r.index << ",cu," << b << ',' << k << ',' << format_double(rep.cu_se(b, k)) << ",,"
                        << format_double(r.powers.cu(b, k)) << '\n';
                }
            }
            for (std::size_t l = 0; l < rep.d2d_se_exact.size(); ++l) {
                out << r.index << ",d2d,," << l << ',' << format_double(rep.d2d_se_exact[l]) << ','
                    << format_double(rep.d2d_se_approx[l]) << ',' << format_double(r.powers.d2d[l]) << '\n';
            }
        }
    });

    write_file(out_dir / "per_realization.csv", [&](std::ostream& out) {
        out << "realization,lambda_star,min_se,sum_se,sum_throughput_mbps\n";
        for (const RealizationResult& r : result.realizations) {
            const double sum = r.report.sum_se();
            out << r.index << ',' << (r.lambda_star ? format_double(*r.lambda_star) : std::string{}) << ','
                << format_double(r.report.min_se()) << ',' << format_double(sum) << ','
                << format_double(sum * bandwidth_hz / 1e6) << '\n';
        }
    });

    write_cdf(out_dir / "cdf_cu_se.csv", result.cu_se);
    write_cdf(out_dir / "cdf_sum_se.csv", result.sum_se);
    if (!result.d2d_se.empty()) {
        write_cdf(out_dir / "cdf_d2d_se.csv", result.d2d_se);
    }

    write_file(out_dir / "config.txt", [&](std::ostream& out) {
        out << "# d2dmimo " << result.version << '\n';
        write_key_values(out, config);
        out << "scenario=" << to_string(result.scenario.kind) << '\n';
        out << "processing=" << to_string(result.scenario.processing) << '\n';
        out << "realizations=" << result.realizations.size() << '\n';
        out << "mc_trials=" << result.mc_trials << '\n';
    });
}

}  // namespace d2d
