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

// ospa: offset-stacked-patch array co-design
//
//   ospa design  --preset paper-N3 [--seed 7] [--out dir] [--resume]
//   ospa analyze --config run.json [--chi chi_opt.json | --reference-layout]
//   ospa gl      --theta-s 110 --d-over-lambda 1
//   ospa sweep   --preset paper-N3 --kind scan [--chi chi_opt.json] [--out dir]
//
// Exit status: 0 ok, 1 usage or configuration error, 2 runtime failure.

#include "ospa/commands.hpp"
#include "ospa/pattern_csv.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_usage = 1;
    constexpr int exit_runtime = 2;

    struct Source
    {
        std::string config;
        std::string preset;
        std::optional<std::uint64_t> seed;
        std::string out;
    };

    void add_source(CLI::App *cmd, Source &s)
    {
        auto *cfg = cmd->add_option("--config", s.config, "run configuration (JSON)");
        auto *pre = cmd->add_option("--preset", s.preset, "shipped scenario: paper-N3, paper-N5, paper-N10, paper-N10-vpol, smoke");
        cfg->excludes(pre);
        cmd->add_option("--seed", s.seed, "override the configured seed");
        cmd->add_option("--out", s.out, "output directory");
    }

    ospa::RunConfig resolve(const Source &s)
    {
        if (s.config.empty() && s.preset.empty())
            throw ospa::ConfigError("one of --config or --preset is required");
        ospa::RunConfig c = s.config.empty() ? ospa::load_preset(s.preset) : ospa::load_config(s.config);
        if (s.seed)
            c.sbd.seed = *s.seed;
        if (!s.out.empty())
            c.output_dir = s.out;
        c.validate();
        return c;
    }

    ospa::DesignVector pick_chi(const ospa::RunConfig &c, const std::string &chi_path)
    {
        if (!chi_path.empty())
            return ospa::load_chi(chi_path);
        return c.array.polarization == ospa::Polarization::vpol ? ospa::reference_design_vpol()
                                                                 : ospa::reference_design_hpol();
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Co-design of offset-stacked-patch phased arrays by System-by-Design"};
    app.require_subcommand(1);

    Source design_src;
    bool resume = false;
    auto *design = app.add_subcommand("design", "run the SbD co-design loop and export the optimum");
    add_source(design, design_src);
    design->add_flag("--resume", resume, "continue from the checkpoint in the output directory");

    Source analyze_src;
    std::string analyze_chi;
    bool reference_layout = false;
    auto *analyze = app.add_subcommand("analyze", "element, array, frequency and scan analysis of one design");
    add_source(analyze, analyze_src);
    auto *chi_opt = analyze->add_option("--chi", analyze_chi, "chi_opt.json report or descriptor object");
    analyze->add_flag("--reference-layout", reference_layout, "use the reference layout for the configured polarization (default)")
        ->excludes(chi_opt);

    double theta_s = 110.0;
    double d_over_lambda = 1.0;
    auto *gl = app.add_subcommand("gl", "grating-lobe angle for a scan angle and spacing");
    gl->add_option("--theta-s", theta_s, "scan angle [deg]")->required();
    gl->add_option("--d-over-lambda", d_over_lambda, "element spacing in wavelengths")->required();

    Source sweep_src;
    std::string sweep_chi;
    std::string kind = "frequency";
    auto *sweep = app.add_subcommand("sweep", "SLL / gain / GL table against frequency or scan angle (CSV)");
    add_source(sweep, sweep_src);
    sweep->add_option("--chi", sweep_chi, "chi_opt.json report or descriptor object (default: reference layout)");
    sweep->add_option("--kind", kind, "frequency or scan")->check(CLI::IsMember({"frequency", "scan"}));

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (*design)
        {
            ospa::cmd_design(resolve(design_src), resume, std::cerr);
        }
        else if (*analyze)
        {
            const auto c = resolve(analyze_src);
            ospa::cmd_analyze(c, pick_chi(c, analyze_chi), std::cerr);
        }
        else if (*gl)
        {
            try
            {
                std::cout << ospa::gl_report(theta_s, d_over_lambda);
            }
            catch (const std::invalid_argument &e)
            {
                throw ospa::ConfigError(e.what());
            }
        }
        else if (*sweep)
        {
            const auto c = resolve(sweep_src);
            const std::string csv =
                ospa::cmd_sweep(c, pick_chi(c, sweep_chi), kind == "scan" ? ospa::SweepKind::scan : ospa::SweepKind::frequency);
            if (sweep_src.out.empty())
                std::cout << csv;
            else
            {
                const std::filesystem::path p = std::filesystem::path(sweep_src.out) / ("sweep_" + kind + ".csv");
                std::filesystem::create_directories(p.parent_path());
                ospa::write_file_atomically(p, csv);
                std::cerr << "wrote " << p.string() << "\n";
            }
        }
        return exit_ok;
    }
    catch (const ospa::ConfigError &e)
    {
        std::cerr << "ospa: error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        std::cerr << "ospa: error: " << e.what() << "\n";
        return exit_runtime;
    }
}
