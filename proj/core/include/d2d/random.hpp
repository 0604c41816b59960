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

#include <cstdint>
#include <random>

namespace d2d {

using Rng = std::mt19937_64;

// Independent random streams derived from one experiment seed. Every stream
// is keyed by (seed, realization, purpose, index) so results never depend on
// the order in which realizations or MC tasks are scheduled.
enum class Stream : std::uint64_t {
    topology = 1,
    pilots = 2,
    monte_carlo = 3,
};

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t realization, Stream stream,
                                    std::uint64_t index = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ realization);
    h = splitmix64(h ^ static_cast<std::uint64_t>(stream));
    return splitmix64(h ^ index);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t realization, Stream stream,
                    std::uint64_t index = 0) {
    return Rng(derive_seed(seed, realization, stream, index));
}

}  // namespace d2d
