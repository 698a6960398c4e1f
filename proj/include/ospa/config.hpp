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

#ifndef OSPA_CONFIG_HPP
#define OSPA_CONFIG_HPP

#include "ospa/codesign.hpp"
#include "ospa/external_import.hpp"

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ospa
{
    inline constexpr int config_schema_version = 1;

    // Invalid or inconsistent configuration (maps to the usage exit status)
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class EvaluatorKind
    {
        proxy,
        files
    };

    struct RunConfig
    {
        ArrayConfig array;
        BandSpec band;
        DesignBounds bounds = DesignBounds::around(reference_design_hpol(), 0.5, 1.5);
        EvaluatorKind evaluator = EvaluatorKind::proxy;
        std::vector<ElementFiles> element_files; // evaluator = files
        ProxyCalibration calibration;
        CostOptions cost;
        SbdOptions sbd;
        double grid_step_deg = 0.25;
        std::filesystem::path output_dir = "ospa-out";
        std::string name; // preset or file stem, informational

        // Cross-field checks; throws ConfigError
        void validate() const;

        ArrayGeometry geometry() const;
        AngleGrid grid() const { return AngleGrid::full_elevation(grid_step_deg); }

        // Proxy or file-backed evaluator as configured
        std::unique_ptr<EmEvaluator> make_evaluator() const;
    };

    // Parses and validates; relative file paths resolve against base_dir.
    RunConfig parse_config(const std::string &json_text, const std::filesystem::path &base_dir = {});
    RunConfig load_config(const std::filesystem::path &path);

    // Preset lookup under OSPA_PRESET_DIR (overridable with the environment variable of the same name)
    std::filesystem::path preset_directory();
    std::vector<std::string> preset_names();
    RunConfig load_preset(const std::string &name);

    // Canonical JSON form of a configuration (round-trips through parse_config)
    std::string config_to_json(const RunConfig &config);

} // namespace ospa

#endif
