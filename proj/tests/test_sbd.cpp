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

#include "ospa/codesign.hpp"
#include "ospa/lhs.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

using namespace ospa;

namespace
{
    double sphere(const Point &x)
    {
        double s = 0.0;
        for (double v : x)
            s += v * v;
        return s;
    }

    BatchCost batch(double (*f)(const Point &))
    {
        return [f](const std::vector<Point> &xs) {
            std::vector<double> out;
            for (const auto &x : xs)
                out.push_back(f(x));
            return out;
        };
    }

    struct ProxyProblem
    {
        ArrayConfig array;
        BandSpec band;
        DesignBounds bounds = DesignBounds::around(reference_design_hpol());
        ProxyEvaluator evaluator{array, bounds, ProxyCalibration{}};
        ArrayGeometry geometry = element_positions(array.element_count, array.element_spacing());

        SbdResult run(const SbdOptions &o, const RecordCallback &cb = {}) const
        {
            return run_codesign(bounds, evaluator, geometry, band, CostOptions{}, o, cb);
        }
    };

    const ProxyProblem &problem()
    {
        static const ProxyProblem p;
        return p;
    }

    // Default budget, seed 1, shared by several cases
    const SbdResult &default_run()
    {
        static const SbdResult r = problem().run(SbdOptions{});
        return r;
    }

    double best_lhs(const SbdResult &r)
    {
        double best = std::numeric_limits<double>::infinity();
        for (const auto &rec : r.records)
            if (rec.iteration == 0)
                best = std::min(best, rec.phi);
        return best;
    }
} // namespace

TEST_SUITE("pso")
{
    TEST_CASE("fixed point")
    {
        const Box box{{-1.0, -1.0}, {1.0, 1.0}};
        Swarm s;
        for (int i = 0; i < 4; ++i)
            s.particles.push_back({{0.25, -0.5}, {0.0, 0.0}, {0.25, -0.5}, sphere({0.25, -0.5}), sphere({0.25, -0.5})});
        s.update_global_best();
        Rng rng(3);
        pso_iterate(s, batch(sphere), box, PsoParams{}, rng);
        for (const auto &p : s.particles)
        {
            CHECK(p.position == Point{0.25, -0.5});
            CHECK(p.velocity == Point{0.0, 0.0});
        }
        CHECK(s.global_best == Point{0.25, -0.5});
    }

    TEST_CASE("sphere benchmark")
    {
        const Box box{std::vector<double>(4, -5.0), std::vector<double>(4, 5.0)};
        Rng rng(2024);
        const auto designs = lhs_sample(box, 40, rng);
        std::vector<double> costs;
        for (const auto &d : designs)
            costs.push_back(sphere(d));
        Swarm s = init_swarm(designs, costs, 20, box, rng);
        for (int i = 0; i < 200; ++i)
        {
            pso_iterate(s, batch(sphere), box, PsoParams{}, rng);
            for (const auto &p : s.particles)
                REQUIRE(box.contains(p.position));
        }
        CHECK(std::sqrt(sphere(s.global_best)) < 1e-3);
        CHECK(s.global_best_value == sphere(s.global_best));
    }

    TEST_CASE("reflection at the bounds")
    {
        double x = 1.3, v = 0.5;
        reflect_into_bounds(x, v, 0.0, 1.0);
        CHECK(x == doctest::Approx(0.7));
        CHECK(v == -0.5);

        x = -0.2, v = -0.4;
        reflect_into_bounds(x, v, 0.0, 1.0);
        CHECK(x == doctest::Approx(0.2));
        CHECK(v == 0.4);

        x = 5.0, v = 6.0;
        reflect_into_bounds(x, v, 0.0, 1.0);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(v == -6.0);

        x = 0.5, v = 0.1;
        reflect_into_bounds(x, v, 0.0, 1.0);
        CHECK(x == 0.5);
        CHECK(v == 0.1);
    }

    TEST_CASE("swarm initialization")
    {
        const Box box{{0.0, 0.0}, {10.0, 1.0}};
        const std::vector<Point> designs{{1.0, 0.1}, {2.0, 0.2}, {3.0, 0.3}};
        const std::vector<double> costs{3.0, 1.0, 2.0};

        Rng a(5);
        const Swarm s = init_swarm(designs, costs, 2, box, a);
        REQUIRE(s.size() == 2);
        CHECK(s.particles[0].position == designs[1]);
        CHECK(s.global_best == designs[1]);
        CHECK(s.global_best_value == 1.0);
        CHECK(s.particles[1].position != designs[1]);
        for (const auto &p : s.particles)
            for (std::size_t k = 0; k < 2; ++k)
            {
                CHECK(std::abs(p.velocity[k]) <= 0.1 * box.span(k));
                CHECK(p.best_position == p.position);
            }

        Rng b(5);
        const Swarm t = init_swarm(designs, costs, 2, box, b);
        CHECK(t.particles[1].position == s.particles[1].position);
        CHECK(t.particles[1].velocity == s.particles[1].velocity);

        Rng c(8);
        const Swarm all = init_swarm(designs, costs, 3, box, c);
        std::set<Point> used;
        for (const auto &p : all.particles)
            used.insert(p.position);
        CHECK(used.size() == 3);

        Rng d(1);
        CHECK_THROWS(init_swarm(designs, costs, 4, box, d));
        CHECK_THROWS(init_swarm(designs, costs, 0, box, d));

        const std::vector<double> failed{std::numeric_limits<double>::infinity(), 2.0, 1.5};
        Rng e(1);
        CHECK(init_swarm(designs, failed, 1, box, e).particles[0].position == designs[2]);
    }

    TEST_CASE("rescoring against a new model")
    {
        const Box box{{-1.0}, {1.0}};
        Swarm s;
        s.particles.push_back({{0.5}, {0.0}, {0.1}, 0.01, 0.25});
        s.particles.push_back({{-0.4}, {0.0}, {-0.4}, 0.16, 0.16});
        s.update_global_best();
        CHECK(s.global_best == Point{0.1});
        rescore_swarm(s, [](const std::vector<Point> &xs) {
            std::vector<double> out;
            for (const auto &x : xs)
                out.push_back(-x[0]);
            return out;
        });
        // the current position now beats the old personal best
        CHECK(s.particles[0].value == -0.5);
        CHECK(s.particles[0].best_value == -0.5);
        CHECK(s.particles[0].best_position == Point{0.5});
        CHECK(s.particles[1].best_value == 0.4);
        CHECK(s.global_best == Point{0.5});
        CHECK(s.global_best_value == -0.5);
    }
}

TEST_SUITE("infill")
{
    const Box box{{0.0, 0.0}, {1.0, 1.0}};

    TEST_CASE("lower confidence bound wins over a known optimum")
    {
        const std::vector<Point> c{{0.2, 0.2}, {0.7, 0.7}};
        const Predictor predict = [](const Point &x) {
            return x[0] < 0.5 ? KrigingPrediction{0.0, 0.0} : KrigingPrediction{0.5, 0.3};
        };
        const auto pick = infill_select(c, predict, {}, box, Acquisition::lower_confidence_bound, 2.0, 0.0);
        CHECK(pick.candidate == 1);
        CHECK_FALSE(pick.perturbed);
    }

    TEST_CASE("equal means go to the widest interval")
    {
        const std::vector<Point> c{{0.1, 0.1}, {0.2, 0.2}, {0.3, 0.3}};
        const Predictor predict = [](const Point &x) { return KrigingPrediction{1.0, x[0] == 0.2 ? 0.5 : 0.1}; };
        CHECK(infill_select(c, predict, {}, box, Acquisition::lower_confidence_bound, 2.0, 0.0).candidate == 1);
        // mean - 2 sigma is exactly 1 for every candidate
        const Predictor flat = [](const Point &x) {
            const double sigma = x[0] == 0.1 ? 0.0 : (x[0] == 0.2 ? 0.125 : 0.25);
            return KrigingPrediction{1.0 + 2.0 * sigma, sigma};
        };
        CHECK(infill_select(c, flat, {}, box, Acquisition::lower_confidence_bound, 2.0, 0.0).candidate == 2);
    }

    TEST_CASE("duplicates of the database are skipped")
    {
        const std::vector<Point> c{{0.1, 0.1}, {0.2, 0.2}};
        const Predictor predict = [](const Point &x) { return KrigingPrediction{x[0], 0.0}; };
        const std::vector<Point> db{{0.1, 0.1 * (1.0 + 1e-12)}};
        CHECK(infill_select(c, predict, db, box, Acquisition::lower_confidence_bound, 2.0, 0.0).candidate == 1);
    }

    TEST_CASE("single known particle is perturbed")
    {
        const std::vector<Point> c{{0.4, 1.0}};
        const Predictor predict = [](const Point &) { return KrigingPrediction{0.3, 0.0}; };
        const auto pick = infill_select(c, predict, c, box, Acquisition::lower_confidence_bound, 2.0, 0.0);
        CHECK(pick.candidate == 0);
        CHECK(pick.perturbed);
        CHECK(pick.chi[0] == doctest::Approx(0.4 + 1e-6).epsilon(1e-12));
        CHECK(pick.chi[1] == doctest::Approx(1.0 - 1e-6).epsilon(1e-12));
        CHECK(box.contains(pick.chi));
        CHECK_FALSE(same_point(pick.chi, c[0]));

        const auto fresh = infill_select(c, predict, {}, box, Acquisition::lower_confidence_bound, 2.0, 0.0);
        CHECK_FALSE(fresh.perturbed);
        CHECK(fresh.chi == c[0]);
    }

    TEST_CASE("expected improvement")
    {
        CHECK(expected_improvement({1.0, 0.0}, 2.0) == 1.0);
        CHECK(expected_improvement({3.0, 0.0}, 2.0) == 0.0);
        // mean at the incumbent: sigma * phi(0)
        CHECK(expected_improvement({2.0, 0.5}, 2.0) == doctest::Approx(0.5 / std::sqrt(2.0 * pi)).epsilon(1e-12));
        const std::vector<Point> c{{0.1, 0.1}, {0.2, 0.2}};
        const Predictor predict = [](const Point &x) {
            return x[0] < 0.15 ? KrigingPrediction{1.0, 0.01} : KrigingPrediction{1.1, 1.0};
        };
        CHECK(infill_select(c, predict, {}, box, Acquisition::expected_improvement, 2.0, 1.0).candidate == 1);
        CHECK(acquisition_from_string("ei") == Acquisition::expected_improvement);
        CHECK(to_string(Acquisition::lower_confidence_bound) == "lcb");
        CHECK_THROWS(acquisition_from_string("pi"));
    }
}

TEST_SUITE("codesign")
{
    TEST_CASE("default budget spends exactly B0 + I evaluations")
    {
        const SbdResult &r = default_run();
        CHECK(r.evaluations() == 150);
        CHECK(r.completed);
        CHECK(r.iterations_done == 100);
        std::size_t lhs = 0;
        for (std::size_t i = 0; i < r.records.size(); ++i)
        {
            CHECK(r.records[i].index == i);
            if (r.records[i].iteration == 0)
                ++lhs;
            else
            {
                CHECK(std::isfinite(r.records[i].surrogate_mean));
                CHECK(r.records[i].surrogate_std >= 0.0);
            }
        }
        CHECK(lhs == 50);
        CHECK(r.best_value <= best_lhs(r));
        CHECK(r.best == r.records[r.best_index].chi);
        CHECK(r.best_value == r.records[r.best_index].phi);
        for (const auto &rec : r.records)
            CHECK(rec.phi >= r.best_value);
    }

    TEST_CASE("incumbent never rises")
    {
        const SbdResult &r = default_run();
        REQUIRE(r.incumbent.size() == r.records.size());
        for (std::size_t i = 1; i < r.incumbent.size(); ++i)
            CHECK(r.incumbent[i] <= r.incumbent[i - 1]);
        CHECK(r.incumbent.back() == r.best_value);
    }

    TEST_CASE("database entries are distinct")
    {
        const SbdResult &r = default_run();
        for (std::size_t i = 0; i < r.records.size(); ++i)
            for (std::size_t j = 0; j < i; ++j)
                CHECK_FALSE(same_point(r.records[i].chi, r.records[j].chi));
    }

    TEST_CASE("same seed, same optimum")
    {
        const SbdResult again = problem().run(SbdOptions{});
        CHECK(again.best == default_run().best);
        CHECK(again.best_value == default_run().best_value);
        SbdOptions other;
        other.seed = 2;
        CHECK(problem().run(other).best != default_run().best);
    }

    TEST_CASE("no iterations returns the best initial design")
    {
        SbdOptions o;
        o.iterations = 0;
        std::size_t calls = 0;
        const SbdResult r = problem().run(o, [&](const EvaluationRecord &) { ++calls; });
        CHECK(r.evaluations() == 50);
        CHECK(calls == 50);
        CHECK(r.best_value == best_lhs(r));
        CHECK(r.best_value == best_lhs(default_run()));
    }

    TEST_CASE("failed evaluations are recorded and skipped")
    {
        const Box box{std::vector<double>(3, 0.0), std::vector<double>(3, 1.0)};
        std::size_t calls = 0;
        const Objective objective = [&](const Point &x) {
            ++calls;
            if (x[0] > 0.8)
                throw std::runtime_error("solver diverged");
            CostBreakdown c;
            c.phi = sphere(x);
            c.phi_sll = c.phi;
            return c;
        };
        SbdOptions o;
        o.initial_samples = 20;
        o.particles = 5;
        o.iterations = 15;
        o.reduced_dims = 2;
        const SbdResult r = run_sbd(box, objective, o);
        CHECK(calls == 35);
        CHECK(r.evaluations() == 35);
        std::size_t failed = 0;
        for (const auto &rec : r.records)
            if (!rec.error.empty())
            {
                ++failed;
                CHECK(std::isinf(rec.phi));
                CHECK(rec.error.find("diverged") != std::string::npos);
            }
        CHECK(failed >= 4);
        CHECK(std::isfinite(r.best_value));
        CHECK(r.best[0] <= 0.8);
    }

    TEST_CASE("a checkpointed run resumes to the same result")
    {
        test::TempDir dir;
        SbdOptions o;
        o.checkpoint_path = (dir / "checkpoint.json").string();
        o.stop_after = 30;
        const SbdResult first = problem().run(o);
        CHECK_FALSE(first.completed);
        CHECK(first.iterations_done == 30);
        CHECK(first.evaluations() == 80);

        const Box box = to_box(problem().bounds);
        const Objective objective = make_cost_objective(problem().evaluator, problem().geometry, problem().band);
        o.stop_after = std::numeric_limits<std::size_t>::max();
        std::size_t fresh = 0;
        const SbdResult resumed = resume_sbd(box, objective, o, [&](const EvaluationRecord &) { ++fresh; });
        CHECK(fresh == 70);
        CHECK(resumed.completed);
        CHECK(resumed.evaluations() == 150);
        CHECK(resumed.best == default_run().best);
        CHECK(resumed.best_value == default_run().best_value);
        for (std::size_t i = 0; i < 150; ++i)
        {
            CHECK(resumed.records[i].chi == default_run().records[i].chi);
            CHECK(resumed.records[i].phi == default_run().records[i].phi);
        }

        SbdOptions changed = o;
        changed.beta = 1.0;
        CHECK_THROWS(resume_sbd(box, objective, changed));
    }

    TEST_CASE("invalid budgets")
    {
        const Box box{std::vector<double>(10, 0.0), std::vector<double>(10, 1.0)};
        const Objective objective = [](const Point &) { return CostBreakdown{}; };
        SbdOptions o;
        o.initial_samples = 11;
        CHECK_THROWS(run_sbd(box, objective, o));
        o = SbdOptions{};
        o.particles = 51;
        CHECK_THROWS(run_sbd(box, objective, o));
        o = SbdOptions{};
        o.reduced_dims = 0;
        CHECK_THROWS(run_sbd(box, objective, o));
    }

    TEST_CASE("plain PSO respects its budget")
    {
        const Box box = to_box(problem().bounds);
        const Objective objective = make_cost_objective(problem().evaluator, problem().geometry, problem().band);
        const SbdResult r = run_plain_pso(box, objective, 10, 150, 1);
        CHECK(r.evaluations() == 150);
        for (std::size_t i = 1; i < r.incumbent.size(); ++i)
            CHECK(r.incumbent[i] <= r.incumbent[i - 1]);
        CHECK(run_plain_pso(box, objective, 10, 150, 1).best == r.best);
    }

    TEST_CASE("property: surrogate error shrinks as infills accumulate")
    {
        int improved = 0;
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
        {
            SbdOptions o;
            o.seed = seed;
            const SbdResult r = seed == 1 ? default_run() : problem().run(o);
            std::vector<double> err;
            for (const auto &rec : r.records)
                if (rec.iteration > 0)
                {
                    CHECK(std::isfinite(rec.surrogate_mae10));
                    err.push_back(std::abs(rec.surrogate_mean - rec.phi));
                }
            REQUIRE(err.size() == 100);
            double first = 0.0, last = 0.0;
            for (std::size_t i = 0; i < 25; ++i)
            {
                first += err[i];
                last += err[75 + i];
            }
            MESSAGE("seed " << seed << ": first quartile " << first / 25.0 << ", last quartile " << last / 25.0);
            if (last < first)
                ++improved;
        }
        CHECK(improved >= 4);
    }

    TEST_CASE("log lines are JSON objects")
    {
        const auto &rec = default_run().records.front();
        const std::vector<std::string> names(descriptor_names().begin(), descriptor_names().end());
        const std::string line = record_to_json_line(rec, names);
        CHECK(line.front() == '{');
        CHECK(line.back() == '}');
        CHECK(line.find('\n') == std::string::npos);
        CHECK(line.find("\"surrogate_mean\":null") != std::string::npos);
        CHECK(line.find("\"L_f\"") != std::string::npos);
    }
}
