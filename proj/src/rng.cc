// Copyright 2026 The qsteer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qsteer/rng.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace qsteer;

Rng::Rng(uint64_t seed) {
    std::seed_seq seq{
        static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), 0x9e3779b9u};
    engine_.seed(seq);
}

Rng Rng::child(uint64_t master, uint64_t index) {
    Rng rng(0);
    std::seed_seq seq{
        static_cast<uint32_t>(master),
        static_cast<uint32_t>(master >> 32),
        static_cast<uint32_t>(index),
        static_cast<uint32_t>(index >> 32),
        0x7f4a7c15u};
    rng.engine_.seed(seq);
    return rng;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

size_t Rng::below(size_t n) {
    if (n == 0) {
        throw std::invalid_argument("Rng::below(0)");
    }
    uint64_t bound = static_cast<uint64_t>(n);
    uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    while (true) {
        uint64_t r = engine_();
        if (r < limit) {
            return static_cast<size_t>(r % bound);
        }
    }
}

double Rng::normal() {
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}
