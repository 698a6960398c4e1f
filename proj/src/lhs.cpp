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

#include "ospa/lhs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ospa
{
    std::vector<Point> lhs_sample(const Box &box, std::size_t count, Rng &rng)
    {
        box.validate();
        const std::size_t dims = box.dims();
        if (count < dims + 2)
            throw std::invalid_argument("LHS needs at least dims + 2 samples");

        std::vector<Point> out(count, Point(dims));
        std::vector<std::size_t> bins(count);
        for (std::size_t k = 0; k < dims; ++k)
        {
            std::iota(bins.begin(), bins.end(), std::size_t{0});
            shuffle(bins, rng);
            for (std::size_t b = 0; b < count; ++b)
            {
                // keep clear of the upper bin edge so rounding cannot spill into the next bin
                const double jitter = std::min(uniform01(rng), 1.0 - 1e-9);
                const double u = (static_cast<double>(bins[b]) + jitter) / static_cast<double>(count);
                out[b][k] = box.lower[k] + u * box.span(k);
            }
        }
        return out;
    }

    std::vector<Point> lhs_sample(const Box &box, std::size_t count, std::uint64_t seed)
    {
        Rng rng(seed);
        return lhs_sample(box, count, rng);
    }

} // namespace ospa
