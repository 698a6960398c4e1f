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

#ifndef OSPA_COMMANDS_HPP
#define OSPA_COMMANDS_HPP

#include "ospa/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ospa
{
    // ---- analysis helpers ----

    // G_s = G_ref + 10 log10(P(theta_s) / N), a bare element with unit peak field having gain G_ref
    double array_gain_db(const FieldCut &total, double theta_s_deg, std::size_t element_count, double reference_gain_db);

    // Unit co-polar field at every angle, no reflection data beyond a matched port
    ElementResponse isotropic_response(std::size_t element_count, std::span<const double> freq_hz,
                                       const AngleGrid &grid, FieldComponent co_pol);

    // Same design with the director centred over the patch
    DesignVector zero_offset(const DesignVector &chi);

    // Smallest box containing `bounds`, `chi` and zero_offset(chi)
    DesignBounds enclose(DesignBounds bounds, const DesignVector &chi);

    inline constexpr double no_value = std::numeric_limits<double>::quiet_NaN();

    struct SweepRow
    {
        double x = 0.0; // frequency [Hz] or scan angle [deg]
        double sll_db = no_value;
        double gain_db = no_value;
        double ref_sll_db = no_value; // Delta_z = 0 reference array
        double ref_gain_db = no_value;
        double iso_sll_db = no_value; // isotropic elements
        GratingLobeReport grating_lobe;
    };

    // SLL, G_s and GL angle against frequency at the configured scan angle
    std::vector<SweepRow> frequency_sweep(const RunConfig &config, const DesignVector &chi,
                                          std::span<const double> freq_hz);

    // Same against the scan angle at f_c
    std::vector<SweepRow> scan_sweep(const RunConfig &config, const DesignVector &chi, double from_deg, double to_deg,
                                     double step_deg);

    std::string sweep_csv(const std::vector<SweepRow> &rows, const std::string &x_column);

    // ---- commands ----

    struct DesignOutcome
    {
        SbdResult result;
        CostBreakdown best;
        std::filesystem::path directory;
    };

    // Runs the co-design and writes chi_opt.json, iterations.jsonl, checkpoint.json, s11.csv,
    // element Touchstone files, element and total pattern CSVs and reimport.json.
    DesignOutcome cmd_design(const RunConfig &config, bool resume, std::ostream &log);

    // Writes the analysis tables and pattern cuts for chi under `config` into output_dir/analyze
    std::filesystem::path cmd_analyze(const RunConfig &config, const DesignVector &chi, std::ostream &log);

    // Human-readable report for one (theta_s, d/lambda) pair
    std::string gl_report(double theta_s_deg, double d_over_lambda);

    enum class SweepKind
    {
        frequency,
        scan
    };

    // Sweep table as CSV text
    std::string cmd_sweep(const RunConfig &config, const DesignVector &chi, SweepKind kind);

    // chi from a chi_opt.json report ("chi_opt" object) or a bare object keyed by descriptor name
    DesignVector load_chi(const std::filesystem::path &path);

    // "28GHz", "26.5GHz"
    std::string frequency_label(double freq_hz);

} // namespace ospa

#endif
