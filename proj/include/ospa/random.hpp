// SPDX-License-Identifier: Apache-2.0
//
// Copyright 2026 The ospa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef OSPA_RANDOM_HPP
#define OSPA_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

// mt19937_64 is fully specified by the standard; the distributions are not, so the
// draws below are done by hand to keep runs bit-reproducible across toolchains.

namespace ospa
{
    using Rng = std::mt19937_64;

    // Uniform in [0, 1) with 53 random bits
    inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

    inline double uniform(Rng &rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

    // Uniform in {0, ..., n-1}, n > 0 (rejection sampling, no modulo bias)
    inline std::size_t uniform_index(Rng &rng, std::size_t n)
    {
        const std::uint64_t range = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
        std::uint64_t x;
        do
            x = rng();
        while (x >= limit);
        return static_cast<std::size_t>(x % range);
    }

    template <typename T>
    void shuffle(std::vector<T> &v, Rng &rng)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[uniform_index(rng, i)]);
    }

    inline std::string save_rng(const Rng &rng)
    {
        std::ostringstream os;
        os << rng;
        return os.str();
    }

    inline Rng load_rng(const std::string &state)
    {
        Rng rng;
        std::istringstream is(state);
        is >> rng;
        return rng;
    }

} // namespace ospa

#endif
