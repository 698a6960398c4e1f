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
#include "ospa/pattern_csv.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ospa
{
    namespace
    {
        using json = nlohmann::json;

        constexpr int checkpoint_version = 1;
        constexpr std::size_t error_window = 10;

        // json has no inf/nan; both travel as null
        json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

        double number_or(const json &j, double fallback) { return j.is_null() ? fallback : j.get<double>(); }

        struct Surrogate
        {
            PlsProjection pls;
            KrigingModel model;
            std::size_t trained_on = 0; // leading records used

            KrigingPrediction predict(const Point &x) const
            {
                const Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
                return model.predict(pls.transform(v));
            }
        };

        struct TrainingSet
        {
            Eigen::MatrixXd X;
            Eigen::VectorXd y;
        };

        TrainingSet training_set(const std::vector<EvaluationRecord> &records, std::size_t count)
        {
            std::vector<const EvaluationRecord *> ok;
            for (std::size_t i = 0; i < count; ++i)
                if (std::isfinite(records[i].phi))
                    ok.push_back(&records[i]);
            if (ok.empty())
                throw std::runtime_error("no successful evaluation to train the surrogate on");
            const auto dims = static_cast<Eigen::Index>(ok.front()->chi.size());
            TrainingSet t{Eigen::MatrixXd(static_cast<Eigen::Index>(ok.size()), dims),
                          Eigen::VectorXd(static_cast<Eigen::Index>(ok.size()))};
            for (std::size_t i = 0; i < ok.size(); ++i)
            {
                const auto r = static_cast<Eigen::Index>(i);
                for (Eigen::Index k = 0; k < dims; ++k)
                    t.X(r, k) = ok[i]->chi[static_cast<std::size_t>(k)];
                t.y(r) = ok[i]->phi;
            }
            return t;
        }

        PlsProjection fit_projection(const TrainingSet &t, int reduced_dims)
        {
            const auto rows = static_cast<int>(t.X.rows());
            const int comps = std::min({reduced_dims, static_cast<int>(t.X.cols()), rows - 1});
            if (comps < 1)
                throw std::runtime_error("too few successful evaluations to fit the PLS projection");
            return PlsProjection::fit(t.X, t.y, comps);
        }

        // Full or warm-started likelihood search
        Surrogate train_surrogate(const std::vector<EvaluationRecord> &records, const SbdOptions &options,
                                  const Eigen::VectorXd *warm_start)
        {
            const TrainingSet t = training_set(records, records.size());
            if (t.X.rows() < 3)
                throw KrigingError("the surrogate needs at least 3 successful evaluations");
            Surrogate s;
            s.pls = fit_projection(t, options.reduced_dims);
            const Eigen::VectorXd *warm =
                (warm_start && warm_start->size() == s.pls.components()) ? warm_start : nullptr;
            s.model = KrigingModel::train(s.pls.transform_rows(t.X), t.y, options.kriging, warm);
            s.trained_on = records.size();
            return s;
        }

        // Rebuild from stored length-scales (checkpoint resume)
        Surrogate rebuild_surrogate(const std::vector<EvaluationRecord> &records, std::size_t count,
                                    const SbdOptions &options, const Eigen::VectorXd &length_scales)
        {
            const TrainingSet t = training_set(records, count);
            Surrogate s;
            s.pls = fit_projection(t, options.reduced_dims);
            s.model = KrigingModel::with_length_scales(s.pls.transform_rows(t.X), t.y, length_scales, options.kriging);
            s.trained_on = count;
            return s;
        }

        struct LoopState
        {
            std::vector<EvaluationRecord> records;
            std::vector<double> infill_errors;
            Swarm swarm;
            Rng rng;
            Eigen::VectorXd length_scales;
            std::size_t surrogate_records = 0;
            std::size_t iteration = 0;
            std::size_t since_refit = 0;
            std::vector<std::string> warnings;
        };

        EvaluationRecord evaluate(const Objective &objective, const Point &x, std::size_t index,
                                  std::size_t iteration)
        {
            EvaluationRecord r;
            r.index = index;
            r.iteration = iteration;
            r.chi = x;
            const auto start = std::chrono::steady_clock::now();
            try
            {
                const CostBreakdown c = objective(x);
                if (!std::isfinite(c.phi))
                    throw std::runtime_error("non-finite cost");
                r.phi = c.phi;
                r.phi_eim = c.phi_eim;
                r.phi_sll = c.phi_sll;
            }
            catch (const std::exception &e)
            {
                r.phi = std::numeric_limits<double>::infinity();
                r.error = e.what();
                if (r.error.empty())
                    r.error = "evaluation failed";
            }
            r.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            return r;
        }

        json point_json(const Point &x)
        {
            json a = json::array();
            for (double v : x)
                a.push_back(v);
            return a;
        }

        json options_json(const SbdOptions &o, std::size_t dims)
        {
            return {{"dims", dims},
                    {"initial_samples", o.initial_samples},
                    {"particles", o.particles},
                    {"seed", o.seed},
                    {"reduced_dims", o.reduced_dims},
                    {"acquisition", std::string(to_string(o.acquisition))},
                    {"beta", o.beta},
                    {"refit_every", o.refit_every},
                    {"swarm_steps", o.swarm_steps},
                    {"pso", {o.pso.inertia, o.pso.cognitive, o.pso.social}}};
        }

        void save_checkpoint(const std::string &path, const LoopState &s, const SbdOptions &options,
                             std::size_t dims)
        {
            json records = json::array();
            for (const auto &r : s.records)
                records.push_back({{"index", r.index},
                                   {"iteration", r.iteration},
                                   {"chi", point_json(r.chi)},
                                   {"phi", number(r.phi)},
                                   {"phi_eim", number(r.phi_eim)},
                                   {"phi_sll", number(r.phi_sll)},
                                   {"surrogate_mean", number(r.surrogate_mean)},
                                   {"surrogate_std", number(r.surrogate_std)},
                                   {"surrogate_mae10", number(r.surrogate_mae10)},
                                   {"wall_time_s", r.wall_time_s},
                                   {"error", r.error}});
            json particles = json::array();
            for (const auto &p : s.swarm.particles)
                particles.push_back({{"position", point_json(p.position)},
                                     {"velocity", point_json(p.velocity)},
                                     {"best_position", point_json(p.best_position)},
                                     {"best_value", number(p.best_value)},
                                     {"value", number(p.value)}});
            json errors = json::array();
            for (double e : s.infill_errors)
                errors.push_back(e);
            json ls = json::array();
            for (Eigen::Index k = 0; k < s.length_scales.size(); ++k)
                ls.push_back(s.length_scales(k));

            const json doc = {{"checkpoint_version", checkpoint_version},
                              {"options", options_json(options, dims)},
                              {"iteration", s.iteration},
                              {"since_refit", s.since_refit},
                              {"surrogate_records", s.surrogate_records},
                              {"length_scales", ls},
                              {"rng", save_rng(s.rng)},
                              {"infill_errors", errors},
                              {"records", records},
                              {"swarm",
                               {{"particles", particles},
                                {"global_best", point_json(s.swarm.global_best)},
                                {"global_best_value", number(s.swarm.global_best_value)}}},
                              {"warnings", s.warnings}};
            write_file_atomically(path, doc.dump() + "\n");
        }

        LoopState load_checkpoint(const std::string &path, const SbdOptions &options, std::size_t dims)
        {
            std::ifstream in(path);
            if (!in)
                throw std::runtime_error("cannot open checkpoint '" + path + "'");
            json doc;
            try
            {
                doc = json::parse(in);
            }
            catch (const json::exception &e)
            {
                throw std::runtime_error("checkpoint '" + path + "' is not valid JSON: " + e.what());
            }
            if (doc.value("checkpoint_version", 0) != checkpoint_version)
                throw std::runtime_error("checkpoint '" + path + "' has an unsupported version");
            if (doc.at("options") != options_json(options, dims))
                throw std::runtime_error("checkpoint '" + path + "' was written with different run options");

            LoopState s;
            s.iteration = doc.at("iteration").get<std::size_t>();
            s.since_refit = doc.at("since_refit").get<std::size_t>();
            s.surrogate_records = doc.at("surrogate_records").get<std::size_t>();
            const auto ls = doc.at("length_scales").get<std::vector<double>>();
            s.length_scales = Eigen::Map<const Eigen::VectorXd>(ls.data(), static_cast<Eigen::Index>(ls.size()));
            s.rng = load_rng(doc.at("rng").get<std::string>());
            s.infill_errors = doc.at("infill_errors").get<std::vector<double>>();
            s.warnings = doc.at("warnings").get<std::vector<std::string>>();
            const double inf = std::numeric_limits<double>::infinity();
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (const auto &j : doc.at("records"))
            {
                EvaluationRecord r;
                r.index = j.at("index").get<std::size_t>();
                r.iteration = j.at("iteration").get<std::size_t>();
                r.chi = j.at("chi").get<Point>();
                r.phi = number_or(j.at("phi"), inf);
                r.phi_eim = number_or(j.at("phi_eim"), nan);
                r.phi_sll = number_or(j.at("phi_sll"), nan);
                r.surrogate_mean = number_or(j.at("surrogate_mean"), nan);
                r.surrogate_std = number_or(j.at("surrogate_std"), nan);
                r.surrogate_mae10 = number_or(j.at("surrogate_mae10"), nan);
                r.wall_time_s = j.at("wall_time_s").get<double>();
                r.error = j.at("error").get<std::string>();
                s.records.push_back(std::move(r));
            }
            const auto &sw = doc.at("swarm");
            for (const auto &j : sw.at("particles"))
            {
                Particle p;
                p.position = j.at("position").get<Point>();
                p.velocity = j.at("velocity").get<Point>();
                p.best_position = j.at("best_position").get<Point>();
                p.best_value = number_or(j.at("best_value"), inf);
                p.value = number_or(j.at("value"), inf);
                s.swarm.particles.push_back(std::move(p));
            }
            s.swarm.global_best = sw.at("global_best").get<Point>();
            s.swarm.global_best_value = number_or(sw.at("global_best_value"), inf);
            return s;
        }

        BatchCost surrogate_cost(const Surrogate &surrogate)
        {
            return [&surrogate](const std::vector<Point> &xs) {
                std::vector<double> v;
                v.reserve(xs.size());
                for (const auto &x : xs)
                    v.push_back(surrogate.predict(x).mean);
                return v;
            };
        }

        double best_true_cost(const std::vector<EvaluationRecord> &records)
        {
            double best = std::numeric_limits<double>::infinity();
            for (const auto &r : records)
                best = std::min(best, r.phi);
            return best;
        }

        void finalize(SbdResult &out, std::vector<EvaluationRecord> records)
        {
            out.records = std::move(records);
            out.incumbent.clear();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < out.records.size(); ++i)
            {
                if (out.records[i].phi < best)
                {
                    best = out.records[i].phi;
                    out.best_index = i;
                }
                out.incumbent.push_back(best);
            }
            out.best_value = best;
            if (!out.records.empty())
                out.best = out.records[out.best_index].chi;
        }

        SbdResult run_loop(const Box &box, const Objective &objective, const SbdOptions &options,
                           const RecordCallback &on_record, LoopState s, std::optional<Surrogate> surrogate)
        {
            const std::size_t dims = box.dims();
            auto push = [&](EvaluationRecord r) {
                if (on_record)
                    on_record(r);
                s.records.push_back(std::move(r));
            };

            if (s.records.empty())
            {
                const auto designs = lhs_sample(box, options.initial_samples, s.rng);
                for (const auto &x : designs)
                    push(evaluate(objective, x, s.records.size(), 0));

                surrogate = train_surrogate(s.records, options, nullptr);
                s.length_scales = surrogate->model.length_scales();
                s.surrogate_records = surrogate->trained_on;
                for (const auto &w : surrogate->pls.warnings())
                    s.warnings.push_back(w);

                std::vector<double> costs;
                for (const auto &r : s.records)
                    costs.push_back(r.phi);
                s.swarm = init_swarm(designs, costs, options.particles, box, s.rng);
                if (!options.checkpoint_path.empty())
                    save_checkpoint(options.checkpoint_path, s, options, dims);
            }

            std::size_t ran = 0;
            while (s.iteration < options.iterations && ran < options.stop_after)
            {
                const std::size_t iteration = s.iteration + 1;
                for (std::size_t g = 0; g < options.swarm_steps; ++g)
                    pso_iterate(s.swarm, surrogate_cost(*surrogate), box, options.pso, s.rng);

                std::vector<Point> candidates;
                for (const auto &p : s.swarm.particles)
                    candidates.push_back(p.position);
                std::vector<Point> database;
                for (const auto &r : s.records)
                    database.push_back(r.chi);
                const Surrogate &model = *surrogate;
                const InfillChoice choice = infill_select(
                    candidates, [&model](const Point &x) { return model.predict(x); }, database, box,
                    options.acquisition, options.beta, best_true_cost(s.records));

                EvaluationRecord r = evaluate(objective, choice.chi, s.records.size(), iteration);
                r.surrogate_mean = choice.prediction.mean;
                r.surrogate_std = choice.prediction.std_dev;
                if (std::isfinite(r.phi))
                    s.infill_errors.push_back(std::abs(r.surrogate_mean - r.phi));
                if (!s.infill_errors.empty())
                {
                    const std::size_t n = std::min(error_window, s.infill_errors.size());
                    double sum = 0.0;
                    for (std::size_t k = s.infill_errors.size() - n; k < s.infill_errors.size(); ++k)
                        sum += s.infill_errors[k];
                    r.surrogate_mae10 = sum / static_cast<double>(n);
                }
                push(std::move(r));

                ++s.since_refit;
                const bool full = s.since_refit >= options.refit_every;
                try
                {
                    surrogate = train_surrogate(s.records, options, full ? nullptr : &s.length_scales);
                    s.length_scales = surrogate->model.length_scales();
                    s.surrogate_records = surrogate->trained_on;
                    if (full)
                        s.since_refit = 0;
                }
                catch (const std::exception &e)
                {
                    s.warnings.push_back("iteration " + std::to_string(iteration) +
                                         ": surrogate retrain failed, keeping the previous model (" + e.what() + ")");
                }
                rescore_swarm(s.swarm, surrogate_cost(*surrogate));

                s.iteration = iteration;
                ++ran;
                if (!options.checkpoint_path.empty())
                    save_checkpoint(options.checkpoint_path, s, options, dims);
            }

            SbdResult out;
            out.length_scales = s.length_scales;
            out.iterations_done = s.iteration;
            out.completed = s.iteration >= options.iterations;
            out.warnings = s.warnings;
            finalize(out, std::move(s.records));
            return out;
        }

    } // namespace

    std::string_view to_string(Acquisition a)
    {
        return a == Acquisition::lower_confidence_bound ? "lcb" : "ei";
    }

    Acquisition acquisition_from_string(std::string_view s)
    {
        if (s == "lcb")
            return Acquisition::lower_confidence_bound;
        if (s == "ei")
            return Acquisition::expected_improvement;
        throw std::invalid_argument("unknown acquisition '" + std::string(s) + "' (expected lcb or ei)");
    }

    void SbdOptions::validate(std::size_t dims) const
    {
        if (initial_samples < dims + 2)
            throw std::invalid_argument("B0 must be at least K + 2 = " + std::to_string(dims + 2));
        if (particles < 1)
            throw std::invalid_argument("swarm size P must be >= 1");
        if (particles > initial_samples)
            throw std::invalid_argument("swarm size P must not exceed B0");
        if (reduced_dims < 1)
            throw std::invalid_argument("reduced dimension K' must be >= 1");
        if (!(beta >= 0.0) || !std::isfinite(beta))
            throw std::invalid_argument("confidence weight beta must be finite and >= 0");
        if (swarm_steps < 1)
            throw std::invalid_argument("swarm_steps must be >= 1");
        if (refit_every < 1)
            throw std::invalid_argument("refit_every must be >= 1");
        if (!(pso.inertia >= 0.0 && pso.cognitive >= 0.0 && pso.social >= 0.0))
            throw std::invalid_argument("PSO constants must be >= 0");
    }

    double expected_improvement(const KrigingPrediction &p, double best_observed)
    {
        const double gap = best_observed - p.mean;
        if (!(p.std_dev > 0.0))
            return std::max(gap, 0.0);
        const double z = gap / p.std_dev;
        const double cdf = 0.5 * std::erfc(-z / std::sqrt(2.0));
        const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * pi);
        return gap * cdf + p.std_dev * pdf;
    }

    InfillChoice infill_select(const std::vector<Point> &candidates, const Predictor &predict,
                               const std::vector<Point> &database, const Box &box, Acquisition acquisition,
                               double beta, double best_observed)
    {
        if (candidates.empty())
            throw std::invalid_argument("infill needs at least one candidate");

        std::vector<KrigingPrediction> pred;
        std::vector<double> score;
        for (const auto &x : candidates)
        {
            pred.push_back(predict(x));
            const auto &p = pred.back();
            score.push_back(acquisition == Acquisition::lower_confidence_bound ? p.mean - beta * p.std_dev
                                                                               : -expected_improvement(p, best_observed));
        }
        auto better = [&](std::size_t a, std::size_t b) {
            if (score[a] != score[b])
                return score[a] < score[b];
            return pred[a].std_dev > pred[b].std_dev;
        };
        auto known = [&](const Point &x) {
            return std::any_of(database.begin(), database.end(), [&](const Point &d) { return same_point(x, d); });
        };

        std::vector<std::size_t> order(candidates.size());
        for (std::size_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::stable_sort(order.begin(), order.end(), better);
        for (std::size_t i : order)
            if (!known(candidates[i]))
                return {i, candidates[i], pred[i], false};

        std::size_t widest = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (pred[i].std_dev > pred[widest].std_dev)
                widest = i;
        InfillChoice c{widest, candidates[widest], {}, true};
        for (std::size_t k = 0; k < c.chi.size(); ++k)
        {
            const double step = 1e-6 * box.span(k);
            c.chi[k] = c.chi[k] + step <= box.upper[k] ? c.chi[k] + step : c.chi[k] - step;
        }
        c.prediction = predict(c.chi);
        return c;
    }

    SbdResult run_sbd(const Box &box, const Objective &objective, const SbdOptions &options,
                      const RecordCallback &on_record)
    {
        box.validate();
        options.validate(box.dims());
        LoopState s;
        s.rng = Rng(options.seed);
        return run_loop(box, objective, options, on_record, std::move(s), std::nullopt);
    }

    SbdResult resume_sbd(const Box &box, const Objective &objective, const SbdOptions &options,
                         const RecordCallback &on_record)
    {
        box.validate();
        options.validate(box.dims());
        if (options.checkpoint_path.empty())
            throw std::invalid_argument("resume needs a checkpoint path");
        LoopState s = load_checkpoint(options.checkpoint_path, options, box.dims());
        if (s.iteration > options.iterations)
            throw std::invalid_argument("checkpoint is past the requested iteration count");
        Surrogate surrogate = rebuild_surrogate(s.records, s.surrogate_records, options, s.length_scales);
        return run_loop(box, objective, options, on_record, std::move(s), std::move(surrogate));
    }

    SbdResult run_plain_pso(const Box &box, const Objective &objective, std::size_t particles, std::size_t budget,
                            std::uint64_t seed, const PsoParams &params)
    {
        box.validate();
        if (particles < 1 || budget < particles)
            throw std::invalid_argument("plain PSO needs 1 <= P <= budget");

        Rng rng(seed);
        std::vector<EvaluationRecord> records;
        std::size_t step = 0;
        const BatchCost true_cost = [&](const std::vector<Point> &xs) {
            std::vector<double> v;
            for (const auto &x : xs)
            {
                if (records.size() >= budget)
                {
                    v.push_back(std::numeric_limits<double>::infinity());
                    continue;
                }
                records.push_back(evaluate(objective, x, records.size(), step));
                v.push_back(records.back().phi);
            }
            return v;
        };

        std::vector<Point> start;
        for (std::size_t p = 0; p < particles; ++p)
        {
            Point x(box.dims());
            for (std::size_t k = 0; k < box.dims(); ++k)
                x[k] = uniform(rng, box.lower[k], box.upper[k]);
            start.push_back(std::move(x));
        }
        const auto costs = true_cost(start);
        Swarm swarm;
        for (std::size_t p = 0; p < particles; ++p)
        {
            Particle q;
            q.position = start[p];
            q.velocity.resize(box.dims());
            for (std::size_t k = 0; k < box.dims(); ++k)
                q.velocity[k] = uniform(rng, -0.1, 0.1) * box.span(k);
            q.best_position = q.position;
            q.value = q.best_value = costs[p];
            swarm.particles.push_back(std::move(q));
        }
        swarm.update_global_best();

        while (records.size() < budget)
        {
            ++step;
            pso_iterate(swarm, true_cost, box, params, rng);
        }

        SbdResult out;
        out.iterations_done = step;
        out.completed = true;
        finalize(out, std::move(records));
        return out;
    }

    Box to_box(const DesignBounds &bounds)
    {
        const auto lo = bounds.lower.to_array();
        const auto hi = bounds.upper.to_array();
        return Box{Point(lo.begin(), lo.end()), Point(hi.begin(), hi.end())};
    }

    Point to_point(const DesignVector &chi)
    {
        const auto a = chi.to_array();
        return Point(a.begin(), a.end());
    }

    DesignVector to_design(const Point &x)
    {
        if (x.size() != descriptor_count)
            throw std::invalid_argument("design point must have " + std::to_string(descriptor_count) + " coordinates");
        std::array<double, descriptor_count> a{};
        std::copy(x.begin(), x.end(), a.begin());
        return DesignVector::from_array(a);
    }

    Objective make_cost_objective(const EmEvaluator &evaluator, const ArrayGeometry &geometry, const BandSpec &band,
                                  const CostOptions &options)
    {
        return [&evaluator, geometry, band, options](const Point &x) {
            return phi_total(to_design(x), geometry, band, evaluator, options);
        };
    }

    SbdResult run_codesign(const DesignBounds &bounds, const EmEvaluator &evaluator, const ArrayGeometry &geometry,
                           const BandSpec &band, const CostOptions &cost_options, const SbdOptions &options,
                           const RecordCallback &on_record)
    {
        bounds.validate();
        band.validate();
        return run_sbd(to_box(bounds), make_cost_objective(evaluator, geometry, band, cost_options), options,
                       on_record);
    }

    std::string record_to_json_line(const EvaluationRecord &record, const std::vector<std::string> &names)
    {
        json chi;
        if (names.size() == record.chi.size())
        {
            chi = json::object();
            for (std::size_t k = 0; k < names.size(); ++k)
                chi[names[k]] = record.chi[k];
        }
        else
        {
            chi = point_json(record.chi);
        }
        json j = {{"index", record.index},
                  {"iteration", record.iteration},
                  {"chi", chi},
                  {"phi", number(record.phi)},
                  {"phi_eim", number(record.phi_eim)},
                  {"phi_sll", number(record.phi_sll)},
                  {"surrogate_mean", number(record.surrogate_mean)},
                  {"surrogate_std", number(record.surrogate_std)},
                  {"surrogate_mae10", number(record.surrogate_mae10)},
                  {"wall_time_s", record.wall_time_s}};
        if (!record.error.empty())
            j["error"] = record.error;
        return j.dump();
    }

} // namespace ospa
