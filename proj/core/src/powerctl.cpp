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

#include "d2d/powerctl.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace d2d {

double LinearSinrModel::interference(std::size_t i, std::span<const double> p) const {
    const std::size_t n = size();
    const double* row = coupling.data() + i * n;
    double acc = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += row[j] * p[j];
    }
    return acc;
}

double LinearSinrModel::sinr(std::size_t i, std::span<const double> p) const {
    return gain[i] * p[i] / interference(i, p);
}

namespace {

int zf_gain(const MaxMinProblem& problem) {
    return problem.antennas - (problem.network.users_per_cell + problem.num_d2d_pilots);
}

double cu_array_gain(const MaxMinProblem& problem) {
    if (problem.processing == Processing::mr) {
        return problem.antennas;
    }
    const int gain = zf_gain(problem);
    if (gain <= 0) {
        throw std::invalid_argument("zero-forcing needs antennas > users_per_cell + d2d_pilots");
    }
    return gain;
}

}  // namespace

LinearSinrModel build_sinr_model(const MaxMinProblem& problem) {
    const NetworkRealization& net = problem.network;
    const EstimationQuality& q = problem.quality;
    const auto B = static_cast<std::size_t>(net.num_cells);
    const auto K = static_cast<std::size_t>(net.users_per_cell);
    const auto L = static_cast<std::size_t>(net.num_d2d_pairs);
    const bool zf = problem.processing == Processing::zf;
    const double array_gain = cu_array_gain(problem);

    LinearSinrModel m;
    m.num_cu = B * K;
    m.num_d2d = L;
    const std::size_t n = m.num_cu + L;
    m.gain.assign(n, 0.0);
    m.coupling.assign(n * n, 0.0);
    auto F = [&](std::size_t i, std::size_t j) -> double& { return m.coupling[i * n + j]; };

    for (std::size_t b = 0; b < B; ++b) {
        for (std::size_t k = 0; k < K; ++k) {
            const std::size_t i = b * K + k;
            m.gain[i] = array_gain * q.gamma_bs_cu(b, b, k);
            for (std::size_t bp = 0; bp < B; ++bp) {
                for (std::size_t kp = 0; kp < K; ++kp) {
                    const double beta = net.beta_bs_cu(b, bp, kp);
                    F(i, bp * K + kp) = zf ? beta - q.gamma_bs_cu(b, bp, kp) : beta;
                }
                if (bp != b) {
                    F(i, bp * K + k) += array_gain * q.gamma_bs_cu(b, bp, k);
                }
            }
            for (std::size_t l = 0; l < L; ++l) {
                const double beta = net.beta_bs_d2d(b, l);
                F(i, m.num_cu + l) = zf ? beta - q.gamma_bs_d2d(b, l) : beta;
            }
        }
    }
    for (std::size_t l = 0; l < L; ++l) {
        const std::size_t i = m.num_cu + l;
        m.gain[i] = q.gamma_d2d_d2d(l, l);
        for (std::size_t b = 0; b < B; ++b) {
            for (std::size_t k = 0; k < K; ++k) {
                F(i, b * K + k) = net.beta_d2d_cu(l, b, k);
            }
        }
        for (std::size_t lp = 0; lp < L; ++lp) {
            F(i, m.num_cu + lp) = (lp == l) ? net.beta_d2d_d2d(l, l) - q.gamma_d2d_d2d(l, l)
                                            : net.beta_d2d_d2d(l, lp);
        }
    }
    return m;
}

std::vector<double> stack_powers(const PowerAssignment& powers) {
    std::vector<double> out(powers.cu.values());
    out.insert(out.end(), powers.d2d.begin(), powers.d2d.end());
    return out;
}

PowerAssignment unstack_powers(std::span<const double> stacked, int num_cells, int users_per_cell,
                               int num_d2d_pairs) {
    const auto num_cu = static_cast<std::size_t>(num_cells * users_per_cell);
    if (stacked.size() != num_cu + static_cast<std::size_t>(num_d2d_pairs)) {
        throw std::invalid_argument("unstack_powers: size mismatch");
    }
    PowerAssignment p = PowerAssignment::uniform(num_cells, users_per_cell, num_d2d_pairs, 0.0);
    std::copy_n(stacked.begin(), num_cu, p.cu.values().begin());
    std::copy(stacked.begin() + static_cast<std::ptrdiff_t>(num_cu), stacked.end(), p.d2d.begin());
    return p;
}

std::vector<double> constraint_se(const MaxMinProblem& problem, const PowerAssignment& powers) {
    const NetworkRealization& net = problem.network;
    const Table2 cu = problem.processing == Processing::mr
                          ? se_cu_mr(powers, problem.quality, net, problem.antennas, problem.prelog)
                          : se_cu_zf(powers, problem.quality, net, problem.antennas, net.users_per_cell,
                                     problem.num_d2d_pilots, problem.prelog);
    std::vector<double> out(cu.values());
    const std::vector<double> d2d = se_d2d_approx(powers, problem.quality, net, problem.prelog);
    out.insert(out.end(), d2d.begin(), d2d.end());
    return out;
}

double target_sinr(double lambda, double prelog) {
    if (lambda < 0.0) {
        throw std::invalid_argument("target_sinr: lambda must be >= 0");
    }
    return std::expm1(lambda / prelog * std::log(2.0));
}

std::string_view to_string(Feasibility f) {
    switch (f) {
    case Feasibility::feasible:
        return "feasible";
    case Feasibility::infeasible:
        return "infeasible";
    case Feasibility::not_converged:
        return "not_converged";
    }
    return "unknown";
}

FeasibilityResult feasibility_check(const LinearSinrModel& model, double target, double max_power_mw,
                                    double tolerance, std::size_t max_iterations,
                                    const IterateObserver& observer) {
    const std::size_t n = model.size();
    FeasibilityResult result;
    result.powers.assign(n, 0.0);
    if (target <= 0.0) {
        result.verdict = Feasibility::feasible;
        return result;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (model.gain[i] <= 0.0) {
            result.verdict = Feasibility::infeasible;
            result.blocking_user = i;
            return result;
        }
    }

    std::vector<double>& p = result.powers;
    std::vector<double> next(n);
    for (std::size_t it = 1; it <= max_iterations; ++it) {
        result.iterations = it;
        double worst_ratio = 0.0;
        std::size_t worst = 0;
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = target * model.interference(i, p) / model.gain[i];
            const double ratio = next[i] / max_power_mw;
            if (ratio > worst_ratio) {
                worst_ratio = ratio;
                worst = i;
            }
            change = std::max(change, (next[i] - p[i]) / next[i]);
        }
        if (worst_ratio > 1.0) {
            for (std::size_t i = 0; i < n; ++i) {
                p[i] = std::min(next[i], max_power_mw);
            }
            if (observer) {
                observer(p);
            }
            result.verdict = Feasibility::infeasible;
            result.blocking_user = worst;
            return result;
        }
        p.swap(next);
        if (observer) {
            observer(p);
        }
        if (change < tolerance) {
            result.verdict = Feasibility::feasible;
            return result;
        }
    }
    result.verdict = Feasibility::not_converged;
    return result;
}

FeasibilityResult feasibility_check(const MaxMinProblem& problem, double lambda,
                                    const IterateObserver& observer) {
    const LinearSinrModel model = build_sinr_model(problem);
    return feasibility_check(model, target_sinr(lambda, problem.prelog), problem.max_power_mw,
                             problem.feasibility_tolerance, problem.max_iterations, observer);
}

double utopia_point(const MaxMinProblem& problem) {
    const NetworkRealization& net = problem.network;
    const EstimationQuality& q = problem.quality;
    const double array_gain = cu_array_gain(problem);
    double weakest = std::numeric_limits<double>::infinity();
    for (int b = 0; b < net.num_cells; ++b) {
        for (int k = 0; k < net.users_per_cell; ++k) {
            weakest = std::min(weakest, problem.max_power_mw * array_gain *
                                            q.gamma_bs_cu(static_cast<std::size_t>(b),
                                                          static_cast<std::size_t>(b),
                                                          static_cast<std::size_t>(k)));
        }
    }
    for (int l = 0; l < net.num_d2d_pairs; ++l) {
        const auto idx = static_cast<std::size_t>(l);
        weakest = std::min(weakest, problem.max_power_mw * q.gamma_d2d_d2d(idx, idx));
    }
    return rate_from_sinr(weakest, problem.prelog);
}

MaxMinSolution solve_maxmin(const MaxMinProblem& problem) {
    if (!(problem.lambda_tolerance > 0.0) || !(problem.max_power_mw > 0.0)) {
        throw std::invalid_argument("solve_maxmin: lambda_tolerance and max_power_mw must be > 0");
    }
    const NetworkRealization& net = problem.network;
    const LinearSinrModel model = build_sinr_model(problem);
    auto check = [&](double lambda) {
        return feasibility_check(model, target_sinr(lambda, problem.prelog), problem.max_power_mw,
                                 problem.feasibility_tolerance, problem.max_iterations);
    };

    MaxMinSolution sol;
    sol.utopia = utopia_point(problem);
    double lo = 0.0;
    double hi = sol.utopia;
    std::vector<double> best(model.size(), 0.0);
    while (hi - lo >= problem.lambda_tolerance) {
        const double mid = 0.5 * (lo + hi);
        FeasibilityResult r = check(mid);
        sol.trace.push_back({mid, lo, hi, r.verdict, r.iterations});
        if (r.verdict == Feasibility::feasible) {
            lo = mid;
            best = std::move(r.powers);
        } else {
            hi = mid;
        }
    }

    if (lo == 0.0 && sol.utopia >= problem.lambda_tolerance) {
        const FeasibilityResult r = check(problem.lambda_tolerance);
        if (r.verdict == Feasibility::not_converged) {
            throw SolverError("solve_maxmin: fixed-point iteration did not converge within " +
                              std::to_string(problem.max_iterations) + " iterations at lambda = " +
                              std::to_string(problem.lambda_tolerance));
        }
    }

    sol.lambda = lo;
    sol.iterations = sol.trace.size();
    sol.powers = unstack_powers(best, net.num_cells, net.users_per_cell, net.num_d2d_pairs);
    sol.slack = constraint_se(problem, sol.powers);
    for (double& s : sol.slack) {
        s -= lo;
    }
    return sol;
}

void write_trace_csv(std::ostream& out, std::span<const BisectionStep> trace) {
    out << "step,lambda,lower,upper,verdict,iterations\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const BisectionStep& s = trace[i];
        out << i << ',' << format_double(s.lambda) << ',' << format_double(s.lower) << ','
            << format_double(s.upper) << ',' << to_string(s.verdict) << ',' << s.iterations << '\n';
    }
}

}  // namespace d2d
