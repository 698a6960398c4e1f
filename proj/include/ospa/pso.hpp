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

#ifndef OSPA_PSO_HPP
#define OSPA_PSO_HPP

#include "ospa/random.hpp"
#include "ospa/search_space.hpp"

#include <functional>
#include <span>
#include <vector>

namespace ospa
{
    struct PsoParams
    {
        double inertia = 0.4;   // omega
        double cognitive = 2.0; // c1
        double social = 2.0;    // c2
    };

    struct Particle
    {
        Point position;
        Point velocity;
        Point best_position;
        double best_value = 0.0;
        double value = 0.0; // cost at the current position
    };

    struct Swarm
    {
        std::vector<Particle> particles;
        Point global_best;
        double global_best_value = 0.0;

        std::size_t size() const { return particles.size(); }
        void update_global_best();
    };

    // Batch cost used to score particle positions
    using BatchCost = std::function<std::vector<double>(const std::vector<Point> &)>;

    // Particle 1 is the cheapest design; particles 2..P are distinct designs picked at
    // random without replacement from the rest. Velocities are uniform in +-10% of each
    // bound span. Costs may hold +inf for failed designs. Throws if P > designs.size().
    Swarm init_swarm(const std::vector<Point> &designs, std::span<const double> costs, std::size_t particle_count,
                     const Box &box, Rng &rng);

    // One inertia / cognitive / social step:
    //   v <- w v + c1 r1 (p_best - x) + c2 r2 (g_best - x),  x <- x + v
    // Components leaving the box are reflected back inside and their velocity negated.
    // New positions are scored with `cost`; personal and global bests are updated.
    void pso_iterate(Swarm &swarm, const BatchCost &cost, const Box &box, const PsoParams &params, Rng &rng);

    // Re-scores the personal bests (and current positions) against a new cost model
    void rescore_swarm(Swarm &swarm, const BatchCost &cost);

    // Reflection rule for a single coordinate, exposed for testing
    void reflect_into_bounds(double &x, double &v, double lower, double upper);

} // namespace ospa

#endif
