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

#ifndef OSPA_CODESIGN_HPP
#define OSPA_CODESIGN_HPP

#include "ospa/cost.hpp"
#include "ospa/kriging.hpp"
#include "ospa/pls.hpp"
#include "ospa/pso.hpp"
#include "ospa/search_space.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

// System-by-Design loop: LHS start, PLS reduction, Ordinary Kriging surrogate,
// PSO on the surrogate with one confidence-based infill per iteration.

namespace ospa
{
    enum class Acquisition
    {
        lower_confidence_bound,
        expected_improvement
    };

    std::string_view to_string(Acquisition a);
    Acquisition acquisition_from_string(std::string_view s);

    struct SbdOptions
    {
        std::size_t initial_samples = 50; // B0
        std::size_t particles = 10;       // P
        std::size_t iterations = 100;     // I
        std::uint64_t seed = 1;
        int reduced_dims = 4; // K'
        PsoParams pso;
        std::size_t swarm_steps = 1; // PSO generations on the surrogate before each infill
        Acquisition acquisition = Acquisition::lower_confidence_bound;
        double beta = 2.0;
        std::size_t refit_every = 10; // full likelihood search cadence, in infills
        KrigingOptions kriging;
        std::string checkpoint_path; // empty: no checkpointing
        std::size_t stop_after = std::numeric_limits<std::size_t>::max(); // iterations to run in this call

        void validate(std::size_t dims) const;
    };

    // One true evaluation
    struct EvaluationRecord
    {
        std::size_t index = 0; // 0-based evaluation counter
        std::size_t iteration = 0; // 0 for the LHS phase
        Point chi;
        double phi = std::numeric_limits<double>::infinity();
        double phi_eim = std::numeric_limits<double>::quiet_NaN();
        double phi_sll = std::numeric_limits<double>::quiet_NaN();
        double surrogate_mean = std::numeric_limits<double>::quiet_NaN(); // NaN for LHS samples
        double surrogate_std = std::numeric_limits<double>::quiet_NaN();
        double surrogate_mae10 = std::numeric_limits<double>::quiet_NaN(); // mean |mean - phi| over the last 10 infills
        double wall_time_s = 0.0;
        std::string error; // non-empty when the evaluator failed
    };

    struct SbdResult
    {
        Point best;
        double best_value = std::numeric_limits<double>::infinity();
        std::size_t best_index = 0;
        std::vector<EvaluationRecord> records;
        std::vector<double> incumbent; // best true cost after each evaluation
        Eigen::VectorXd length_scales;
        std::size_t iterations_done = 0;
        bool completed = false;
        std::vector<std::string> warnings;

        std::size_t evaluations() const { return records.size(); }
    };

    // Objective returning the full cost breakdown; throwing marks the design as failed
    using Objective = std::function<CostBreakdown(const Point &)>;

    // Called after every true evaluation
    using RecordCallback = std::function<void(const EvaluationRecord &)>;

    SbdResult run_sbd(const Box &box, const Objective &objective, const SbdOptions &options,
                      const RecordCallback &on_record = {});

    // Continues a checkpointed run; the options must match the checkpoint's
    SbdResult resume_sbd(const Box &box, const Objective &objective, const SbdOptions &options,
                         const RecordCallback &on_record = {});

    struct InfillChoice
    {
        std::size_t candidate = 0;
        Point chi;
        KrigingPrediction prediction;
        bool perturbed = false;
    };

    using Predictor = std::function<KrigingPrediction(const Point &)>;

    // Candidate minimizing mean - beta sigma (or maximizing EI); ties go to the larger sigma.
    // Candidates matching a database entry are skipped. If all of them do, the max-sigma
    // candidate is moved by 1e-6 of the bound span per coordinate.
    InfillChoice infill_select(const std::vector<Point> &candidates, const Predictor &predict,
                               const std::vector<Point> &database, const Box &box, Acquisition acquisition,
                               double beta, double best_observed);

    double expected_improvement(const KrigingPrediction &p, double best_observed);

    // Canonical PSO on the true objective with a fixed evaluation budget
    SbdResult run_plain_pso(const Box &box, const Objective &objective, std::size_t particles, std::size_t budget,
                            std::uint64_t seed, const PsoParams &params = {});

    // DesignVector plumbing
    Box to_box(const DesignBounds &bounds);
    Point to_point(const DesignVector &chi);
    DesignVector to_design(const Point &x);

    // Phi over the band for one design; the evaluator must outlive the returned objective
    Objective make_cost_objective(const EmEvaluator &evaluator, const ArrayGeometry &geometry, const BandSpec &band,
                                  const CostOptions &options = {});

    SbdResult run_codesign(const DesignBounds &bounds, const EmEvaluator &evaluator, const ArrayGeometry &geometry,
                           const BandSpec &band, const CostOptions &cost_options, const SbdOptions &options,
                           const RecordCallback &on_record = {});

    // One JSON Lines record
    std::string record_to_json_line(const EvaluationRecord &record, const std::vector<std::string> &names = {});

} // namespace ospa

#endif
