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

#ifndef _QSTEER_RNG_H
#define _QSTEER_RNG_H

#include <cstddef>
#include <cstdint>
#include <random>

namespace qsteer {

/// Random stream used by one trajectory.
///
/// Wraps std::mt19937_64 and draws uniforms/normals from raw engine output, so
/// sequences are bit-identical across standard library implementations (the
/// engine and std::seed_seq are fully specified; the std distributions are not).
class Rng {
   public:
    explicit Rng(uint64_t seed);

    /// Child stream `index` of `master`. Streams for different indices are
    /// seeded through std::seed_seq and are independent of scheduling.
    static Rng child(uint64_t master, uint64_t index);

    uint64_t next_u64() {
        return engine_();
    }
    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [0, n). Unbiased (rejection sampling).
    size_t below(size_t n);
    /// Standard normal deviate (Box-Muller, one value per call).
    double normal();

   private:
    std::mt19937_64 engine_;
};

}  // namespace qsteer

#endif
