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

#include "ospa/pso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ospa
{
    void Swarm::update_global_best()
    {
        for (const auto &p : particles)
        {
            if (global_best.empty() || p.best_value < global_best_value)
            {
                global_best = p.best_position;
                global_best_value = p.best_value;
            }
        }
    }

    Swarm init_swarm(const std::vector<Point> &designs, std::span<const double> costs, std::size_t particle_count,
                     const Box &box, Rng &rng)
    {
        box.validate();
        if (designs.size() != costs.size())
            throw std::invalid_argument("one cost per design required");
        if (particle_count == 0)
            throw std::invalid_argument("swarm needs at least one particle");
        if (particle_count > designs.size())
            throw std::invalid_argument("swarm size P exceeds the number of initial designs");

        // Best design first (first index on ties)
        std::size_t first = 0;
        for (std::size_t b = 1; b < costs.size(); ++b)
            if (costs[b] < costs[first])
                first = b;

        std::vector<std::size_t> pool;
        for (std::size_t b = 0; b < designs.size(); ++b)
            if (b != first)
                pool.push_back(b);

        std::vector<std::size_t> chosen{first};
        while (chosen.size() < particle_count)
        {
            const std::size_t k = uniform_index(rng, pool.size());
            chosen.push_back(pool[k]);
            pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(k));
        }

        Swarm s;
        for (std::size_t b : chosen)
        {
            Particle p;
            p.position = designs[b];
            p.velocity.resize(box.dims());
            for (std::size_t k = 0; k < box.dims(); ++k)
                p.velocity[k] = uniform(rng, -0.1, 0.1) * box.span(k);
            p.best_position = p.position;
            p.value = p.best_value = costs[b];
            s.particles.push_back(std::move(p));
        }
        s.update_global_best();
        return s;
    }

    void reflect_into_bounds(double &x, double &v, double lower, double upper)
    {
        if (x > upper)
        {
            x = upper - (x - upper);
            v = -v;
        }
        else if (x < lower)
        {
            x = lower + (lower - x);
            v = -v;
        }
        // overshoot larger than the span
        x = std::clamp(x, lower, upper);
    }

    void pso_iterate(Swarm &swarm, const BatchCost &cost, const Box &box, const PsoParams &params, Rng &rng)
    {
        if (swarm.particles.empty())
            return;
        for (auto &p : swarm.particles)
        {
            for (std::size_t k = 0; k < box.dims(); ++k)
            {
                const double r1 = uniform01(rng);
                const double r2 = uniform01(rng);
                p.velocity[k] = params.inertia * p.velocity[k] +
                                params.cognitive * r1 * (p.best_position[k] - p.position[k]) +
                                params.social * r2 * (swarm.global_best[k] - p.position[k]);
                p.position[k] += p.velocity[k];
                reflect_into_bounds(p.position[k], p.velocity[k], box.lower[k], box.upper[k]);
            }
        }

        std::vector<Point> positions;
        positions.reserve(swarm.size());
        for (const auto &p : swarm.particles)
            positions.push_back(p.position);
        const auto values = cost(positions);
        for (std::size_t i = 0; i < swarm.size(); ++i)
        {
            auto &p = swarm.particles[i];
            p.value = values[i];
            if (p.value < p.best_value)
            {
                p.best_value = p.value;
                p.best_position = p.position;
            }
        }
        swarm.update_global_best();
    }

    void rescore_swarm(Swarm &swarm, const BatchCost &cost)
    {
        std::vector<Point> pts;
        for (const auto &p : swarm.particles)
        {
            pts.push_back(p.position);
            pts.push_back(p.best_position);
        }
        const auto v = cost(pts);
        for (std::size_t i = 0; i < swarm.size(); ++i)
        {
            auto &p = swarm.particles[i];
            p.value = v[2 * i];
            p.best_value = v[2 * i + 1];
            if (p.value < p.best_value)
            {
                p.best_value = p.value;
                p.best_position = p.position;
            }
        }
        swarm.global_best.clear();
        swarm.update_global_best();
    }

} // namespace ospa
