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

#include "ospa/config.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace ospa
{
    namespace
    {
        using json = nlohmann::json;
        namespace fs = std::filesystem;

        // Object view that rejects unknown keys and reports the dotted path on errors
        class Section
        {
        public:
            Section(const json &j, std::string path, std::initializer_list<const char *> keys)
                : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw ConfigError(where() + "must be a JSON object");
                std::set<std::string> allowed(keys.begin(), keys.end());
                for (const auto &item : j_.items())
                    if (!allowed.count(item.key()))
                        throw ConfigError("unknown config key '" + join(item.key()) + "'");
            }

            bool has(const char *key) const { return j_.contains(key); }
            const json &at(const char *key) const { return j_.at(key); }
            std::string join(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

            double number(const char *key, double fallback) const
            {
                if (!has(key))
                    return fallback;
                const auto &v = j_.at(key);
                if (!v.is_number())
                    throw ConfigError("config key '" + join(key) + "' must be a number");
                return v.get<double>();
            }

            std::size_t count(const char *key, std::size_t fallback) const
            {
                if (!has(key))
                    return fallback;
                const auto &v = j_.at(key);
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw ConfigError("config key '" + join(key) + "' must be a non-negative integer");
                return v.get<std::size_t>();
            }

            std::string text(const char *key, const std::string &fallback) const
            {
                if (!has(key))
                    return fallback;
                const auto &v = j_.at(key);
                if (!v.is_string())
                    throw ConfigError("config key '" + join(key) + "' must be a string");
                return v.get<std::string>();
            }

        private:
            const json &j_;
            std::string path_;

            std::string where() const { return path_.empty() ? "config " : "config key '" + path_ + "' "; }
        };

        template <typename F>
        auto wrap(const std::string &what, F &&f)
        {
            try
            {
                return f();
            }
            catch (const ConfigError &)
            {
                throw;
            }
            catch (const std::exception &e)
            {
                throw ConfigError(what + ": " + e.what());
            }
        }

        fs::path resolve(const fs::path &p, const fs::path &base)
        {
            return p.is_absolute() || base.empty() ? p : base / p;
        }

        void read_array(const json &j, RunConfig &c)
        {
            Section s(j, "array", {"element_count", "spacing_m", "theta_s_deg", "polarization"});
            c.array.element_count = s.count("element_count", c.array.element_count);
            c.array.spacing = s.number("spacing_m", c.array.spacing);
            c.array.theta_s_deg = s.number("theta_s_deg", c.array.theta_s_deg);
            const std::string pol = s.text("polarization", std::string(to_string(c.array.polarization)));
            c.array.polarization = wrap("array.polarization", [&] { return polarization_from_string(pol); });
        }

        void read_band(const json &j, RunConfig &c)
        {
            Section s(j, "band", {"f_min_hz", "f_c_hz", "f_max_hz", "samples", "threshold_db"});
            c.band.f_min = s.number("f_min_hz", c.band.f_min);
            c.band.f_c = s.number("f_c_hz", c.band.f_c);
            c.band.f_max = s.number("f_max_hz", c.band.f_max);
            c.band.samples = s.count("samples", c.band.samples);
            c.band.threshold_db = s.number("threshold_db", c.band.threshold_db);
        }

        void read_stack(const json &j, RunConfig &c)
        {
            if (!j.is_array() || j.size() != c.array.stack.layers.size())
                throw ConfigError("config key 'stack' must be an array of exactly 3 layers");
            for (std::size_t l = 0; l < j.size(); ++l)
            {
                Section s(j[l], "stack[" + std::to_string(l) + "]", {"permittivity", "loss_tangent", "thickness_m"});
                auto &layer = c.array.stack.layers[l];
                layer.permittivity = s.number("permittivity", layer.permittivity);
                layer.loss_tangent = s.number("loss_tangent", layer.loss_tangent);
                layer.thickness = s.number("thickness_m", layer.thickness);
            }
        }

        DesignVector read_named(const json &j, const std::string &path, DesignVector base)
        {
            const auto names = descriptor_names();
            if (!j.is_object())
                throw ConfigError("config key '" + path + "' must be a JSON object");
            auto values = base.to_array();
            for (const auto &item : j.items())
            {
                const auto it = std::find(names.begin(), names.end(), item.key());
                if (it == names.end())
                    throw ConfigError("unknown config key '" + path + "." + item.key() + "'");
                if (!item.value().is_number())
                    throw ConfigError("config key '" + path + "." + item.key() + "' must be a number");
                values[static_cast<std::size_t>(it - names.begin())] = item.value().get<double>();
            }
            return DesignVector::from_array(values);
        }

        void read_bounds(const json &j, RunConfig &c)
        {
            Section s(j, "bounds", {"reference", "lower_factor", "upper_factor", "lower", "upper"});
            const std::string ref = s.text("reference", "hpol");
            DesignVector center;
            if (ref == "hpol")
                center = reference_design_hpol();
            else if (ref == "vpol")
                center = reference_design_vpol();
            else
                throw ConfigError("config key 'bounds.reference' must be hpol or vpol");
            const double lo = s.number("lower_factor", 0.5);
            const double hi = s.number("upper_factor", 1.5);
            if (!(lo > 0.0 && lo < hi))
                throw ConfigError("bounds factors must satisfy 0 < lower_factor < upper_factor");
            c.bounds = DesignBounds::around(center, lo, hi);
            if (s.has("lower"))
                c.bounds.lower = read_named(s.at("lower"), "bounds.lower", c.bounds.lower);
            if (s.has("upper"))
                c.bounds.upper = read_named(s.at("upper"), "bounds.upper", c.bounds.upper);
        }

        void read_evaluator(const json &j, RunConfig &c, const fs::path &base)
        {
            Section s(j, "evaluator", {"kind", "elements"});
            const std::string kind = s.text("kind", "proxy");
            if (kind == "proxy")
                c.evaluator = EvaluatorKind::proxy;
            else if (kind == "files")
                c.evaluator = EvaluatorKind::files;
            else
                throw ConfigError("config key 'evaluator.kind' must be proxy or files");
            if (!s.has("elements"))
                return;
            const auto &els = s.at("elements");
            if (!els.is_array())
                throw ConfigError("config key 'evaluator.elements' must be an array");
            for (std::size_t n = 0; n < els.size(); ++n)
            {
                const std::string path = "evaluator.elements[" + std::to_string(n) + "]";
                Section e(els[n], path, {"s1p", "patterns"});
                ElementFiles f;
                const std::string s1p = e.text("s1p", "");
                if (s1p.empty())
                    throw ConfigError("config key '" + path + ".s1p' is required");
                f.s1p = resolve(s1p, base);
                if (e.has("patterns"))
                {
                    const auto &pats = e.at("patterns");
                    if (!pats.is_array())
                        throw ConfigError("config key '" + path + ".patterns' must be an array of paths");
                    for (const auto &p : pats)
                    {
                        if (!p.is_string())
                            throw ConfigError("config key '" + path + ".patterns' must be an array of paths");
                        f.patterns.push_back(resolve(p.get<std::string>(), base));
                    }
                }
                c.element_files.push_back(std::move(f));
            }
        }

        void read_proxy(const json &j, RunConfig &c)
        {
            Section s(j, "proxy",
                      {"element_exponent", "coupling_phase_rad", "coupling_ceiling", "quality_factor_1",
                       "quality_factor_2", "edge_pattern_shift_deg", "edge_frequency_shift", "cross_pol_coupling",
                       "reference_gain_db", "min_match_depth"});
            auto &p = c.calibration;
            p.element_exponent = s.number("element_exponent", p.element_exponent);
            p.coupling_phase_rad = s.number("coupling_phase_rad", p.coupling_phase_rad);
            p.coupling_ceiling = s.number("coupling_ceiling", p.coupling_ceiling);
            p.quality_factor_1 = s.number("quality_factor_1", p.quality_factor_1);
            p.quality_factor_2 = s.number("quality_factor_2", p.quality_factor_2);
            p.edge_pattern_shift_deg = s.number("edge_pattern_shift_deg", p.edge_pattern_shift_deg);
            p.edge_frequency_shift = s.number("edge_frequency_shift", p.edge_frequency_shift);
            p.cross_pol_coupling = s.number("cross_pol_coupling", p.cross_pol_coupling);
            p.reference_gain_db = s.number("reference_gain_db", p.reference_gain_db);
            p.min_match_depth = s.number("min_match_depth", p.min_match_depth);
        }

        void read_cost(const json &j, RunConfig &c)
        {
            Section s(j, "cost", {"eim_penalty", "sll_clamp_db", "main_beam_window_deg"});
            const std::string pen = s.text("eim_penalty", "indicator");
            if (pen == "indicator")
                c.cost.eim_penalty = EimPenalty::indicator;
            else if (pen == "linear")
                c.cost.eim_penalty = EimPenalty::linear;
            else
                throw ConfigError("config key 'cost.eim_penalty' must be indicator or linear");
            c.cost.sll_clamp_db = s.number("sll_clamp_db", c.cost.sll_clamp_db);
            c.cost.main_beam_window_deg = s.number("main_beam_window_deg", c.cost.main_beam_window_deg);
        }

        void read_budget(const json &j, RunConfig &c)
        {
            Section s(j, "budget", {"initial_samples", "particles", "iterations"});
            c.sbd.initial_samples = s.count("initial_samples", c.sbd.initial_samples);
            c.sbd.particles = s.count("particles", c.sbd.particles);
            c.sbd.iterations = s.count("iterations", c.sbd.iterations);
        }

        void read_sbd(const json &j, RunConfig &c)
        {
            Section s(j, "sbd",
                      {"reduced_dims", "acquisition", "beta", "refit_every", "swarm_steps", "pso", "kriging"});
            const std::size_t k = s.count("reduced_dims", static_cast<std::size_t>(c.sbd.reduced_dims));
            if (k > 1000)
                throw ConfigError("config key 'sbd.reduced_dims' is out of range");
            c.sbd.reduced_dims = static_cast<int>(k);
            const std::string acq = s.text("acquisition", std::string(to_string(c.sbd.acquisition)));
            c.sbd.acquisition = wrap("sbd.acquisition", [&] { return acquisition_from_string(acq); });
            c.sbd.beta = s.number("beta", c.sbd.beta);
            c.sbd.refit_every = s.count("refit_every", c.sbd.refit_every);
            c.sbd.swarm_steps = s.count("swarm_steps", c.sbd.swarm_steps);
            if (s.has("pso"))
            {
                Section p(s.at("pso"), "sbd.pso", {"inertia", "cognitive", "social"});
                c.sbd.pso.inertia = p.number("inertia", c.sbd.pso.inertia);
                c.sbd.pso.cognitive = p.number("cognitive", c.sbd.pso.cognitive);
                c.sbd.pso.social = p.number("social", c.sbd.pso.social);
            }
            if (s.has("kriging"))
            {
                Section kr(s.at("kriging"), "sbd.kriging", {"nugget", "max_nugget", "multistarts", "evals_per_start"});
                auto &o = c.sbd.kriging;
                o.nugget = kr.number("nugget", o.nugget);
                o.max_nugget = kr.number("max_nugget", o.max_nugget);
                o.multistarts = static_cast<int>(kr.count("multistarts", static_cast<std::size_t>(o.multistarts)));
                o.evals_per_start =
                    static_cast<int>(kr.count("evals_per_start", static_cast<std::size_t>(o.evals_per_start)));
            }
        }

        json named(const DesignVector &v)
        {
            const auto names = descriptor_names();
            const auto a = v.to_array();
            json j = json::object();
            for (std::size_t k = 0; k < names.size(); ++k)
                j[std::string(names[k])] = a[k];
            return j;
        }

    } // namespace

    void RunConfig::validate() const
    {
        auto check = [](const std::string &what, auto &&f) { wrap(what, [&] { f(); return 0; }); };
        check("array", [&] { array.validate(); });
        check("band", [&] { band.validate(); });
        check("bounds", [&] { bounds.validate(); });
        check("proxy", [&] { calibration.validate(); });
        check("budget", [&] { sbd.validate(descriptor_count); });

        if (band.f_min != array.f_min || band.f_c != array.f_c || band.f_max != array.f_max ||
            band.theta_s_deg != array.theta_s_deg)
            throw ConfigError("band and array disagree on the frequency band or scan angle");
        if (!(cost.sll_clamp_db < 0.0))
            throw ConfigError("cost.sll_clamp_db must be < 0");
        if (!(cost.main_beam_window_deg > 0.0 && cost.main_beam_window_deg < 90.0))
            throw ConfigError("cost.main_beam_window_deg must lie in (0, 90)");
        if (!(grid_step_deg > 0.0 && grid_step_deg <= 1.0))
            throw ConfigError("grid_step_deg must lie in (0, 1]");
        const double steps = 180.0 / grid_step_deg;
        if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
            throw ConfigError("grid_step_deg must divide 180 deg evenly");
        if (!(sbd.kriging.nugget > 0.0 && sbd.kriging.nugget <= sbd.kriging.max_nugget))
            throw ConfigError("sbd.kriging nugget must satisfy 0 < nugget <= max_nugget");
        if (sbd.kriging.multistarts < 1 || sbd.kriging.evals_per_start < 1)
            throw ConfigError("sbd.kriging multistarts and evals_per_start must be >= 1");
        if (output_dir.empty())
            throw ConfigError("output_dir must not be empty");

        if (evaluator == EvaluatorKind::files)
        {
            if (element_files.size() != array.element_count)
                throw ConfigError("evaluator.elements lists " + std::to_string(element_files.size()) +
                                  " elements but the array has " + std::to_string(array.element_count));
            for (const auto &e : element_files)
            {
                if (!fs::exists(e.s1p))
                    throw ConfigError("file not found: " + e.s1p.string());
                for (const auto &p : e.patterns)
                    if (!fs::exists(p))
                        throw ConfigError("file not found: " + p.string());
            }
        }
        else if (!element_files.empty())
        {
            throw ConfigError("evaluator.elements is only valid with evaluator.kind = files");
        }
    }

    ArrayGeometry RunConfig::geometry() const { return element_positions(array.element_count, array.element_spacing()); }

    std::unique_ptr<EmEvaluator> RunConfig::make_evaluator() const
    {
        if (evaluator == EvaluatorKind::files)
            return std::make_unique<FileEvaluator>(import_external(element_files, co_polar_component(array.polarization)));
        return std::make_unique<ProxyEvaluator>(array, bounds, calibration, grid());
    }

    RunConfig parse_config(const std::string &json_text, const fs::path &base_dir)
    {
        json j;
        try
        {
            j = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }

        Section top(j, "",
                    {"schema_version", "name", "array", "band", "stack", "bounds", "evaluator", "proxy", "cost",
                     "budget", "sbd", "seed", "output_dir", "grid_step_deg"});
        if (!top.has("schema_version"))
            throw ConfigError("config is missing 'schema_version'");
        if (top.count("schema_version", 0) != static_cast<std::size_t>(config_schema_version))
            throw ConfigError("unsupported schema_version (expected " + std::to_string(config_schema_version) + ")");

        RunConfig c;
        c.name = top.text("name", "");
        if (top.has("array"))
            read_array(top.at("array"), c);
        if (top.has("band"))
            read_band(top.at("band"), c);
        c.band.theta_s_deg = c.array.theta_s_deg;
        c.array.f_min = c.band.f_min;
        c.array.f_c = c.band.f_c;
        c.array.f_max = c.band.f_max;
        if (top.has("stack"))
            read_stack(top.at("stack"), c);
        if (top.has("bounds"))
            read_bounds(top.at("bounds"), c);
        if (top.has("evaluator"))
            read_evaluator(top.at("evaluator"), c, base_dir);
        if (top.has("proxy"))
            read_proxy(top.at("proxy"), c);
        if (top.has("cost"))
            read_cost(top.at("cost"), c);
        if (top.has("budget"))
            read_budget(top.at("budget"), c);
        if (top.has("sbd"))
            read_sbd(top.at("sbd"), c);
        if (top.has("seed"))
        {
            const auto &s = top.at("seed");
            if (!s.is_number_unsigned())
                throw ConfigError("config key 'seed' must be a non-negative integer");
            c.sbd.seed = s.get<std::uint64_t>();
        }
        c.output_dir = resolve(top.text("output_dir", c.output_dir.string()), base_dir);
        c.grid_step_deg = top.number("grid_step_deg", c.grid_step_deg);
        c.validate();
        return c;
    }

    RunConfig load_config(const fs::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError("cannot open config file '" + path.string() + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        RunConfig c = parse_config(ss.str(), path.parent_path());
        if (c.name.empty())
            c.name = path.stem().string();
        return c;
    }

    fs::path preset_directory()
    {
        if (const char *env = std::getenv("OSPA_PRESET_DIR"); env && *env)
            return env;
        return OSPA_PRESET_DIR;
    }

    std::vector<std::string> preset_names()
    {
        std::vector<std::string> names;
        std::error_code ec;
        for (const auto &e : fs::directory_iterator(preset_directory(), ec))
            if (e.path().extension() == ".json")
                names.push_back(e.path().stem().string());
        std::sort(names.begin(), names.end());
        return names;
    }

    RunConfig load_preset(const std::string &name)
    {
        const fs::path p = preset_directory() / (name + ".json");
        if (name.empty() || name.find('/') != std::string::npos || !fs::exists(p))
        {
            std::string known;
            for (const auto &n : preset_names())
                known += (known.empty() ? "" : ", ") + n;
            throw ConfigError("unknown preset '" + name + "' (available: " + known + ")");
        }
        RunConfig c = load_config(p);
        // preset outputs land in the working directory, not next to the preset
        c.output_dir = "ospa-out";
        c.name = name;
        return c;
    }

    std::string config_to_json(const RunConfig &c)
    {
        json stack = json::array();
        for (const auto &l : c.array.stack.layers)
            stack.push_back({{"permittivity", l.permittivity}, {"loss_tangent", l.loss_tangent}, {"thickness_m", l.thickness}});
        json elements = json::array();
        for (const auto &e : c.element_files)
        {
            json pats = json::array();
            for (const auto &p : e.patterns)
                pats.push_back(p.string());
            elements.push_back({{"s1p", e.s1p.string()}, {"patterns", pats}});
        }
        const auto &p = c.calibration;
        json j = {
            {"schema_version", config_schema_version},
            {"name", c.name},
            {"array",
             {{"element_count", c.array.element_count},
              {"spacing_m", c.array.spacing},
              {"theta_s_deg", c.array.theta_s_deg},
              {"polarization", std::string(to_string(c.array.polarization))}}},
            {"band",
             {{"f_min_hz", c.band.f_min},
              {"f_c_hz", c.band.f_c},
              {"f_max_hz", c.band.f_max},
              {"samples", c.band.samples},
              {"threshold_db", c.band.threshold_db}}},
            {"stack", stack},
            {"bounds", {{"lower", named(c.bounds.lower)}, {"upper", named(c.bounds.upper)}}},
            {"evaluator", {{"kind", c.evaluator == EvaluatorKind::proxy ? "proxy" : "files"}}},
            {"proxy",
             {{"element_exponent", p.element_exponent},
              {"coupling_phase_rad", p.coupling_phase_rad},
              {"coupling_ceiling", p.coupling_ceiling},
              {"quality_factor_1", p.quality_factor_1},
              {"quality_factor_2", p.quality_factor_2},
              {"edge_pattern_shift_deg", p.edge_pattern_shift_deg},
              {"edge_frequency_shift", p.edge_frequency_shift},
              {"cross_pol_coupling", p.cross_pol_coupling},
              {"reference_gain_db", p.reference_gain_db},
              {"min_match_depth", p.min_match_depth}}},
            {"cost",
             {{"eim_penalty", c.cost.eim_penalty == EimPenalty::indicator ? "indicator" : "linear"},
              {"sll_clamp_db", c.cost.sll_clamp_db},
              {"main_beam_window_deg", c.cost.main_beam_window_deg}}},
            {"budget",
             {{"initial_samples", c.sbd.initial_samples},
              {"particles", c.sbd.particles},
              {"iterations", c.sbd.iterations}}},
            {"sbd",
             {{"reduced_dims", c.sbd.reduced_dims},
              {"acquisition", std::string(to_string(c.sbd.acquisition))},
              {"beta", c.sbd.beta},
              {"refit_every", c.sbd.refit_every},
              {"swarm_steps", c.sbd.swarm_steps},
              {"pso", {{"inertia", c.sbd.pso.inertia}, {"cognitive", c.sbd.pso.cognitive}, {"social", c.sbd.pso.social}}},
              {"kriging",
               {{"nugget", c.sbd.kriging.nugget},
                {"max_nugget", c.sbd.kriging.max_nugget},
                {"multistarts", c.sbd.kriging.multistarts},
                {"evals_per_start", c.sbd.kriging.evals_per_start}}}}},
            {"seed", c.sbd.seed},
            {"output_dir", c.output_dir.string()},
            {"grid_step_deg", c.grid_step_deg}};
        if (c.evaluator == EvaluatorKind::files)
            j["evaluator"]["elements"] = elements;
        return j.dump(2) + "\n";
    }

} // namespace ospa
