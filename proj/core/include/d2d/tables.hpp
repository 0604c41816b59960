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
#include <vector>

namespace d2d {

// Dense row-major 2-D table of doubles.
class Table2 {
public:
    Table2() = default;
    Table2(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool operator==(const Table2&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Dense row-major 3-D table of doubles, indexed (i, j, k).
class Table3 {
public:
    Table3() = default;
    Table3(std::size_t n0, std::size_t n1, std::size_t n2, double fill = 0.0)
        : n0_(n0), n1_(n1), n2_(n2), data_(n0 * n1 * n2, fill) {}

    double& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return data_[(i * n1_ + j) * n2_ + k];
    }
    double operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return data_[(i * n1_ + j) * n2_ + k];
    }

    std::size_t dim0() const { return n0_; }
    std::size_t dim1() const { return n1_; }
    std::size_t dim2() const { return n2_; }
    std::size_t size() const { return data_.size(); }

    const std::vector<double>& values() const { return data_; }
    std::vector<double>& values() { return data_; }

    bool operator==(const Table3&) const = default;

private:
    std::size_t n0_ = 0;
    std::size_t n1_ = 0;
    std::size_t n2_ = 0;
    std::vector<double> data_;
};

}  // namespace d2d
