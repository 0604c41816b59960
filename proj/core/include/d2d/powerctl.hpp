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
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "d2d/estimation.hpp"
#include "d2d/se.hpp"
#include "d2d/topology.hpp"

namespace d2d {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Max-min SE over all CU and D2D data powers. CU constraints use the MR or
// ZF closed form; D2D constraints use the closed-form approximation. A
// network with no D2D pairs gives the conventional cellular-only problem.
struct MaxMinProblem {
    Processing processing = Processing::zf;
    const NetworkRealization& network;
    const EstimationQuality& quality;
    int antennas = 100;
    int num_d2d_pilots = 0;
    double prelog = 1.0;
    double max_power_mw = 200.0;
    double lambda_tolerance = 1e-3;       // bit/s/Hz
    double feasibility_tolerance = 1e-8;  // relative power change
    std::size_t max_iterations = 10000;
};

// Every SINR in the problem has the form
//
//     sinr_i(p) = gain_i * p_i / (1 + sum_j coupling_ij * p_j)
//
// over the stacked power vector p = [CU (b, k) at b * K + k, then D2D l].
// The diagonal of `coupling` carries self-interference (own-channel terms
// that survive in the effective noise).
struct LinearSinrModel {
    std::size_t num_cu = 0;
    std::size_t num_d2d = 0;
    std::vector<double> gain;
    std::vector<double> coupling;  // row-major, size() x size()

    std::size_t size() const { return gain.size(); }
    double coupling_at(std::size_t i, std::size_t j) const { return coupling[i * size() + j]; }
    double interference(std::size_t i, std::span<const double> p) const;
    double sinr(std::size_t i, std::span<const double> p) const;
};

LinearSinrModel build_sinr_model(const MaxMinProblem& problem);

std::vector<double> stack_powers(const PowerAssignment& powers);
PowerAssignment unstack_powers(std::span<const double> stacked, int num_cells, int users_per_cell,
                               int num_d2d_pairs);

// SE of every user for `powers`, stacked like LinearSinrModel, evaluated
// with se_cu_mr / se_cu_zf and se_d2d_approx.
std::vector<double> constraint_se(const MaxMinProblem& problem, const PowerAssignment& powers);

// SINR a user needs to reach `lambda` bit/s/Hz.
double target_sinr(double lambda, double prelog);

enum class Feasibility {
    feasible,
    infeasible,     // a user needs more than max power even at the minimal power vector
    not_converged,  // iteration cap hit before the fixed point was reached
};

std::string_view to_string(Feasibility f);

struct FeasibilityResult {
    Feasibility verdict = Feasibility::infeasible;
    std::vector<double> powers;  // stacked; component-wise minimal when feasible
    std::size_t iterations = 0;
    std::optional<std::size_t> blocking_user;  // stacked index when infeasible
};

// Called with the stacked power vector after every fixed-point step.
using IterateObserver = std::function<void(std::span<const double>)>;

// Decides whether every user can reach `lambda` with powers in [0, P_max]
// by the fixed-point iteration p <- t * I(p) / gain from p = 0. The
// iterates increase monotonically towards the minimal feasible power
// vector, so the first time any user needs more than P_max proves that no
// feasible vector exists.
FeasibilityResult feasibility_check(const MaxMinProblem& problem, double lambda,
                                    const IterateObserver& observer = {});
FeasibilityResult feasibility_check(const LinearSinrModel& model, double target, double max_power_mw,
                                    double tolerance, std::size_t max_iterations,
                                    const IterateObserver& observer = {});

// Interference-free SE of the weakest user at full power. Upper bound on
// any achievable max-min SE.
double utopia_point(const MaxMinProblem& problem);

struct BisectionStep {
    double lambda = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    Feasibility verdict = Feasibility::infeasible;
    std::size_t iterations = 0;
};

struct MaxMinSolution {
    double lambda = 0.0;
    double utopia = 0.0;
    PowerAssignment powers;
    std::vector<double> slack;  // SE_i - lambda, stacked
    std::size_t iterations = 0;  // bisection steps
    std::vector<BisectionStep> trace;
};

// Bisection on [0, utopia_point]. Throws SolverError when the fixed-point
// iteration cannot decide even the smallest nonzero target.
MaxMinSolution solve_maxmin(const MaxMinProblem& problem);

void write_trace_csv(std::ostream& out, std::span<const BisectionStep> trace);

}  // namespace d2d
