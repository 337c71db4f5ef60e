// Copyright 2026 The fqdrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "fqdrl/errors.hpp"

namespace fqdrl {

/// SplitMix64 mixing step. Used to derive per-agent / per-purpose seeds
/// from the experiment master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` with purpose `tag`, derived from `master`:
/// splitmix64(splitmix64(master ^ index) ^ tag). Documented so runs can be
/// reproduced outside this codebase.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index,
                                 std::uint64_t tag = 0) {
    return splitmix64(splitmix64(master ^ index) ^ tag);
}

/// Deterministic random stream. All distributions are implemented here
/// rather than taken from <random> so that sequences do not depend on the
/// standard library in use.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be positive.
    int uniform_int(int n) {
        if (n <= 0) {
            throw UsageError("Rng::uniform_int: n must be positive");
        }
        return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
    }

    /// Poisson sample via Knuth's product method. Means above 30 are split
    /// into chunks (a sum of independent Poissons is Poisson) to avoid
    /// exp() underflow.
    int poisson(double mean) {
        if (mean < 0.0 || !std::isfinite(mean)) {
            throw UsageError("Rng::poisson: mean must be finite and >= 0");
        }
        int count = 0;
        while (mean > 30.0) {
            count += poisson_knuth(30.0);
            mean -= 30.0;
        }
        return count + poisson_knuth(mean);
    }

  private:
    int poisson_knuth(double mean) {
        if (mean == 0.0) {
            return 0;
        }
        const double limit = std::exp(-mean);
        int k = 0;
        double p = 1.0;
        do {
            ++k;
            p *= uniform();
        } while (p > limit);
        return k - 1;
    }

    std::mt19937_64 engine_;
};

} // namespace fqdrl
