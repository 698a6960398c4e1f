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

#ifndef OSPA_SEARCH_SPACE_HPP
#define OSPA_SEARCH_SPACE_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ospa
{
    using Point = std::vector<double>;

    // Axis-aligned box [lower_k, upper_k]
    struct Box
    {
        std::vector<double> lower;
        std::vector<double> upper;

        std::size_t dims() const { return lower.size(); }
        double span(std::size_t k) const { return upper[k] - lower[k]; }

        void validate() const
        {
            if (lower.empty() || lower.size() != upper.size())
                throw std::invalid_argument("box bounds must be non-empty and of equal length");
            for (std::size_t k = 0; k < lower.size(); ++k)
            {
                if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]))
                    throw std::invalid_argument("box bound " + std::to_string(k) + " is not finite");
                if (!(lower[k] < upper[k]))
                    throw std::invalid_argument("degenerate bounds in dimension " + std::to_string(k));
            }
        }

        bool contains(const Point &x) const
        {
            if (x.size() != dims())
                return false;
            for (std::size_t k = 0; k < x.size(); ++k)
                if (!(x[k] >= lower[k] && x[k] <= upper[k]))
                    return false;
            return true;
        }
    };

    // Per-coordinate relative equality used to detect duplicate designs
    inline bool same_point(const Point &a, const Point &b, double rel_tol = 1e-9)
    {
        if (a.size() != b.size())
            return false;
        for (std::size_t k = 0; k < a.size(); ++k)
        {
            const double scale = std::max(std::abs(a[k]), std::abs(b[k]));
            if (std::abs(a[k] - b[k]) > rel_tol * scale)
                return false;
        }
        return true;
    }

} // namespace ospa

#endif
