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

#ifndef OSPA_LHS_HPP
#define OSPA_LHS_HPP

#include "ospa/random.hpp"
#include "ospa/search_space.hpp"

#include <cstdint>
#include <vector>

namespace ospa
{
    // Latin hypercube design: every coordinate, cut into `count` equal bins, holds
    // exactly one sample per bin. Requires count >= dims + 2.
    std::vector<Point> lhs_sample(const Box &box, std::size_t count, Rng &rng);
    std::vector<Point> lhs_sample(const Box &box, std::size_t count, std::uint64_t seed);

} // namespace ospa

#endif
