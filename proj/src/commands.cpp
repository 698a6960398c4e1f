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

#include "ospa/commands.hpp"

#include "ospa/pattern_csv.hpp"
#include "ospa/touchstone.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

namespace ospa
{
    namespace
    {
        using json = nlohmann::json;
        namespace fs = std::filesystem;

        std::string num(double v)
        {
            if (std::isnan(v))
                return "nan";
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.10g", v);
            return buf;
        }

        std::string exact(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

        json named(const DesignVector &chi)
        {
            const auto names = descriptor_names();
            const auto a = chi.to_array();
            json j = json::object();
            for (std::size_t k = 0; k < names.size(); ++k)
                j[std::string(names[k])] = a[k];
            return j;
        }

        void write_text(const fs::path &path, const std::string &text)
        {
            if (path.has_parent_path())
                fs::create_directories(path.parent_path());
            write_file_atomically(path, text);
        }

        double sll_or_nan(const FieldCut &total, double theta_s_deg, double window)
        {
            try
            {
                const ScalarCut db{total.grid, normalized_power_db(total.power())};
                return extract_sll(db, theta_s_deg, window).sll_db;
            }
            catch (const PatternError &)
            {
                return no_value;
            }
        }

        std::unique_ptr<EmEvaluator> analysis_evaluator(const RunConfig &config, const DesignVector &chi)
        {
            if (config.evaluator == EvaluatorKind::files)
                return config.make_evaluator();
            return std::make_unique<ProxyEvaluator>(config.array, enclose(config.bounds, chi), config.calibration,
                                                    config.grid());
        }

        struct Responses
        {
            ElementResponse design;
            std::optional<ElementResponse> reference;
            ElementResponse isotropic;
        };

        Responses evaluate_all(const RunConfig &config, const DesignVector &chi, std::span<const double> freqs)
        {
            const auto ev = analysis_evaluator(config, chi);
            Responses r;
            r.design = ev->evaluate(chi, freqs);
            if (config.evaluator == EvaluatorKind::proxy)
                r.reference = ev->evaluate(zero_offset(chi), freqs);
            const AngleGrid grid = r.design.has_patterns() ? r.design.patterns.front().front().grid : config.grid();
            r.isotropic = isotropic_response(config.array.element_count, freqs, grid, r.design.co_pol);
            return r;
        }

        SweepRow sweep_row(const RunConfig &config, const Responses &r, std::size_t j, double theta_s_deg)
        {
            const ArrayGeometry geom = config.geometry();
            const std::size_t n = config.array.element_count;
            const double gref = config.calibration.reference_gain_db;
            const double window = config.cost.main_beam_window_deg;
            const double f = r.design.freq_hz[j];

            SweepRow row;
            if (r.design.has_patterns())
            {
                const FieldCut t = steered_total_pattern(r.design, j, geom, theta_s_deg);
                row.sll_db = sll_or_nan(t, theta_s_deg, window);
                row.gain_db = array_gain_db(t, theta_s_deg, n, gref);
            }
            if (r.reference)
            {
                const FieldCut t = steered_total_pattern(*r.reference, j, geom, theta_s_deg);
                row.ref_sll_db = sll_or_nan(t, theta_s_deg, window);
                row.ref_gain_db = array_gain_db(t, theta_s_deg, n, gref);
            }
            row.iso_sll_db = sll_or_nan(steered_total_pattern(r.isotropic, j, geom, theta_s_deg), theta_s_deg, window);
            row.grating_lobe = grating_lobe_angle(theta_s_deg, geom.spacing / wavelength(f));
            return row;
        }

        std::vector<std::size_t> edge_and_centre(const std::vector<double> &freqs, const BandSpec &band)
        {
            std::vector<std::size_t> idx;
            for (double target : {band.f_min, band.f_c, band.f_max})
            {
                for (std::size_t j = 0; j < freqs.size(); ++j)
                    if (std::abs(freqs[j] - target) <= 1e-9 * target)
                    {
                        idx.push_back(j);
                        break;
                    }
            }
            return idx;
        }

        // S11 table, Touchstone files and pattern cuts; returns the files for re-import
        std::vector<ElementFiles> export_response(const fs::path &dir, const ElementResponse &r,
                                                  const RunConfig &config, const Responses *with_totals)
        {
            const std::size_t n_el = r.element_count();
            std::ostringstream s11;
            s11 << "f_hz";
            for (std::size_t n = 0; n < n_el; ++n)
                s11 << ",s" << n + 1 << n + 1 << "_db";
            s11 << "\n";
            for (std::size_t j = 0; j < r.freq_hz.size(); ++j)
            {
                s11 << exact(r.freq_hz[j]);
                for (std::size_t n = 0; n < n_el; ++n)
                    s11 << "," << exact(r.s_nn_db[n][j]);
                s11 << "\n";
            }
            write_text(dir / "s11.csv", s11.str());

            std::vector<ElementFiles> files;
            for (std::size_t n = 0; n < n_el; ++n)
            {
                ElementFiles ef;
                ef.s1p = "element" + std::to_string(n + 1) + ".s1p";
                OnePortData port;
                port.freq_hz = r.freq_hz;
                for (double db : r.s_nn_db[n])
                    port.s11.push_back(cplx(std::pow(10.0, db / 20.0), 0.0));
                std::ostringstream os;
                os << "! element " << n + 1 << " of " << n_el << ", " << config.name << "\n";
                write_s1p(os, port, TouchstoneFormat::db);
                write_text(dir / ef.s1p, os.str());

                if (r.has_patterns())
                {
                    for (std::size_t j = 0; j < r.freq_hz.size(); ++j)
                    {
                        const fs::path p = fs::path("patterns") /
                                           ("element" + std::to_string(n + 1) + "_" + frequency_label(r.freq_hz[j]) + ".csv");
                        std::ostringstream cs;
                        write_pattern_csv(cs, r.patterns[n][j]);
                        write_text(dir / p, cs.str());
                        ef.patterns.push_back(p);
                    }
                }
                files.push_back(std::move(ef));
            }

            if (with_totals && r.has_patterns())
            {
                const ArrayGeometry geom = config.geometry();
                const double th = config.band.theta_s_deg;
                for (std::size_t j : edge_and_centre(r.freq_hz, config.band))
                {
                    const std::string label = frequency_label(r.freq_hz[j]);
                    auto dump = [&](const ElementResponse &resp, const std::string &stem) {
                        std::ostringstream cs;
                        write_pattern_csv(cs, steered_total_pattern(resp, j, geom, th));
                        write_text(dir / "patterns" / (stem + "_" + label + ".csv"), cs.str());
                    };
                    dump(with_totals->design, "total");
                    if (with_totals->reference)
                        dump(*with_totals->reference, "total_ref");
                    dump(with_totals->isotropic, "total_iso");
                }
            }
            return files;
        }

        void write_reimport(const fs::path &dir, const RunConfig &config, const std::vector<ElementFiles> &files)
        {
            RunConfig c = config;
            c.evaluator = EvaluatorKind::files;
            c.element_files = files;
            c.output_dir = "reimport-out";
            c.name = config.name + "-reimport";
            write_text(dir / "reimport.json", config_to_json(c));
        }

        std::string gl_table_csv(const RunConfig &config, std::span<const double> freqs)
        {
            const ArrayGeometry geom = config.geometry();
            std::ostringstream os;
            os << "f_hz,d_over_lambda,theta_s_deg,theta_gl_deg\n";
            for (double f : freqs)
            {
                const double r = geom.spacing / wavelength(f);
                const auto gl = grating_lobe_angle(config.band.theta_s_deg, r);
                os << num(f) << "," << num(r) << "," << num(config.band.theta_s_deg) << ","
                   << (gl.exists ? num(gl.theta_gl_deg) : "none") << "\n";
            }
            return os.str();
        }

    } // namespace

    double array_gain_db(const FieldCut &total, double theta_s_deg, std::size_t element_count, double reference_gain_db)
    {
        if (element_count == 0)
            throw std::invalid_argument("array gain needs at least one element");
        const auto p = total.power();
        const ScalarCut lin{total.grid, std::vector<double>(p.begin(), p.end())};
        const double at = gain_at(lin, theta_s_deg);
        if (!(at > 0.0))
            return minus_infinity_db;
        return reference_gain_db + 10.0 * std::log10(at / static_cast<double>(element_count));
    }

    ElementResponse isotropic_response(std::size_t element_count, std::span<const double> freq_hz,
                                       const AngleGrid &grid, FieldComponent co_pol)
    {
        ElementResponse r;
        r.freq_hz.assign(freq_hz.begin(), freq_hz.end());
        r.co_pol = co_pol;
        r.s_nn_db.assign(element_count, std::vector<double>(freq_hz.size(), db_floor));
        FieldCut unit;
        unit.grid = grid;
        unit.e_theta.assign(grid.count, cplx{});
        unit.e_phi.assign(grid.count, cplx{});
        unit.component(co_pol).assign(grid.count, cplx(1.0, 0.0));
        r.patterns.assign(element_count, std::vector<FieldCut>(freq_hz.size(), unit));
        return r;
    }

    DesignVector zero_offset(const DesignVector &chi)
    {
        DesignVector z = chi;
        z.director_offset = 0.0;
        return z;
    }

    DesignBounds enclose(DesignBounds bounds, const DesignVector &chi)
    {
        auto lo = bounds.lower.to_array();
        auto hi = bounds.upper.to_array();
        const auto a = chi.to_array();
        const auto z = zero_offset(chi).to_array();
        for (std::size_t k = 0; k < descriptor_count; ++k)
        {
            lo[k] = std::min({lo[k], a[k], z[k]});
            hi[k] = std::max({hi[k], a[k], z[k]});
        }
        bounds.lower = DesignVector::from_array(lo);
        bounds.upper = DesignVector::from_array(hi);
        return bounds;
    }

    std::vector<SweepRow> frequency_sweep(const RunConfig &config, const DesignVector &chi,
                                          std::span<const double> freq_hz)
    {
        const Responses r = evaluate_all(config, chi, freq_hz);
        std::vector<SweepRow> rows;
        for (std::size_t j = 0; j < freq_hz.size(); ++j)
        {
            SweepRow row = sweep_row(config, r, j, config.band.theta_s_deg);
            row.x = freq_hz[j];
            rows.push_back(row);
        }
        return rows;
    }

    std::vector<SweepRow> scan_sweep(const RunConfig &config, const DesignVector &chi, double from_deg, double to_deg,
                                     double step_deg)
    {
        if (!(step_deg > 0.0) || !(from_deg <= to_deg))
            throw std::invalid_argument("scan sweep needs from <= to and a positive step");
        const double fc[] = {config.band.f_c};
        const Responses r = evaluate_all(config, chi, fc);
        std::vector<SweepRow> rows;
        const auto count = static_cast<std::size_t>(std::floor((to_deg - from_deg) / step_deg + 1e-9)) + 1;
        for (std::size_t i = 0; i < count; ++i)
        {
            const double th = from_deg + static_cast<double>(i) * step_deg;
            SweepRow row = sweep_row(config, r, 0, th);
            row.x = th;
            rows.push_back(row);
        }
        return rows;
    }

    std::string sweep_csv(const std::vector<SweepRow> &rows, const std::string &x_column)
    {
        std::ostringstream os;
        os << x_column << ",sll_db,gain_db,ref_sll_db,ref_gain_db,iso_sll_db,theta_gl_deg\n";
        for (const auto &r : rows)
            os << num(r.x) << "," << num(r.sll_db) << "," << num(r.gain_db) << "," << num(r.ref_sll_db) << ","
               << num(r.ref_gain_db) << "," << num(r.iso_sll_db) << ","
               << (r.grating_lobe.exists ? num(r.grating_lobe.theta_gl_deg) : "none") << "\n";
        return os.str();
    }

    DesignOutcome cmd_design(const RunConfig &config, bool resume, std::ostream &log)
    {
        config.validate();
        const fs::path dir = config.output_dir / "design";
        fs::create_directories(dir);

        const auto evaluator = config.make_evaluator();
        const ArrayGeometry geom = config.geometry();
        SbdOptions options = config.sbd;
        options.checkpoint_path = (dir / "checkpoint.json").string();

        const std::size_t total = options.initial_samples + options.iterations;
        auto progress = [&](const EvaluationRecord &r) {
            if ((r.index + 1) % 25 == 0 || r.index + 1 == total)
                log << "evaluation " << r.index + 1 << "/" << total << "  phi = " << num(r.phi) << "\n";
        };

        DesignOutcome out;
        out.directory = dir;
        const Objective objective = make_cost_objective(*evaluator, geom, config.band, config.cost);
        const Box box = to_box(config.bounds);
        out.result = resume ? resume_sbd(box, objective, options, progress) : run_sbd(box, objective, options, progress);
        if (!std::isfinite(out.result.best_value))
            throw std::runtime_error("every evaluation failed; no optimum to report");

        const DesignVector chi = to_design(out.result.best);
        out.best = phi_total(chi, geom, config.band, *evaluator, config.cost);

        std::vector<std::string> names;
        for (auto n : descriptor_names())
            names.emplace_back(n);
        std::string lines;
        for (const auto &r : out.result.records)
            lines += record_to_json_line(r, names) + "\n";
        write_text(dir / "iterations.jsonl", lines);

        double lhs_best = std::numeric_limits<double>::infinity();
        for (const auto &r : out.result.records)
            if (r.iteration == 0)
                lhs_best = std::min(lhs_best, r.phi);
        json ls = json::array();
        for (Eigen::Index k = 0; k < out.result.length_scales.size(); ++k)
            ls.push_back(out.result.length_scales(k));
        json sll = json::array();
        for (double v : out.best.sll_db)
            sll.push_back(number(v));
        json report = {{"schema_version", config_schema_version},
                       {"config", config.name},
                       {"seed", config.sbd.seed},
                       {"chi_opt", named(chi)},
                       {"phi", out.best.phi},
                       {"phi_eim", out.best.phi_eim},
                       {"phi_sll", out.best.phi_sll},
                       {"freq_hz", out.best.freq_hz},
                       {"sll_db", sll},
                       {"worst_snn_db", out.best.worst_snn_db},
                       {"evaluations", out.result.evaluations()},
                       {"best_index", out.result.best_index},
                       {"iterations", out.result.iterations_done},
                       {"completed", out.result.completed},
                       {"lhs_best_phi", number(lhs_best)},
                       {"length_scales", ls},
                       {"warnings", out.result.warnings}};
        write_text(dir / "chi_opt.json", report.dump(2) + "\n");

        const auto freqs = config.band.frequencies();
        const Responses r = evaluate_all(config, chi, freqs);
        const auto files = export_response(dir, r.design, config, &r);
        write_reimport(dir, config, files);

        log << "chi_opt: phi = " << num(out.best.phi) << " (eim " << num(out.best.phi_eim) << ", sll "
            << num(out.best.phi_sll) << ") after " << out.result.evaluations() << " evaluations\n";
        log << "wrote " << dir.string() << "\n";
        return out;
    }

    fs::path cmd_analyze(const RunConfig &config, const DesignVector &chi, std::ostream &log)
    {
        config.validate();
        const fs::path dir = config.output_dir / "analyze";
        fs::create_directories(dir);

        const auto freqs = config.band.frequencies();
        const Responses r = evaluate_all(config, chi, freqs);
        const auto files = export_response(dir, r.design, config, &r);
        write_reimport(dir, config, files);

        std::vector<SweepRow> fs_rows;
        for (std::size_t j = 0; j < freqs.size(); ++j)
        {
            SweepRow row = sweep_row(config, r, j, config.band.theta_s_deg);
            row.x = freqs[j];
            fs_rows.push_back(row);
        }
        write_text(dir / "freq_sweep.csv", sweep_csv(fs_rows, "f_hz"));
        write_text(dir / "scan_sweep.csv", sweep_csv(scan_sweep(config, chi, 90.0, 150.0, 1.0), "theta_s_deg"));
        write_text(dir / "gl_table.csv", gl_table_csv(config, freqs));

        if (r.design.has_patterns())
        {
            std::ostringstream tilt;
            tilt << "f_hz";
            for (std::size_t n = 0; n < r.design.element_count(); ++n)
                tilt << ",theta0_e" << n + 1 << "_deg";
            tilt << "\n";
            for (std::size_t j = 0; j < freqs.size(); ++j)
            {
                tilt << num(freqs[j]);
                for (std::size_t n = 0; n < r.design.element_count(); ++n)
                    tilt << "," << num(element_tilt_deg(r.design.patterns[n][j], r.design.co_pol));
                tilt << "\n";
            }
            write_text(dir / "element_tilt.csv", tilt.str());
        }

        json summary = {{"chi", named(chi)}, {"config", config.name}};
        try
        {
            const auto ev = analysis_evaluator(config, chi);
            const CostBreakdown c = phi_total(chi, config.geometry(), config.band, *ev, config.cost);
            summary["phi"] = c.phi;
            summary["phi_eim"] = c.phi_eim;
            summary["phi_sll"] = c.phi_sll;
        }
        catch (const std::exception &e)
        {
            summary["phi_error"] = e.what();
        }
        write_text(dir / "summary.json", summary.dump(2) + "\n");
        log << "wrote " << dir.string() << "\n";
        return dir;
    }

    std::string gl_report(double theta_s_deg, double d_over_lambda)
    {
        if (!(theta_s_deg > 0.0 && theta_s_deg < 180.0) || !(d_over_lambda > 0.0) || !std::isfinite(d_over_lambda))
            throw std::invalid_argument("need 0 < theta_s < 180 deg and d/lambda > 0");
        const double c = std::cos(deg_to_rad(theta_s_deg));
        const double inv = 1.0 / d_over_lambda;
        std::ostringstream os;
        os << "theta_s = " << num(theta_s_deg) << " deg, d/lambda = " << num(d_over_lambda) << "\n";
        auto branch = [&](const char *label, double arg, bool applies, const char *condition) {
            os << "  " << label << ": argument " << num(arg);
            if (arg < -1.0 - 1e-12 || arg > 1.0 + 1e-12)
                os << " outside [-1, 1], no real angle";
            else
                os << " -> " << num(rad_to_deg(std::acos(std::clamp(arg, -1.0, 1.0)))) << " deg";
            os << (applies ? "  [applies, " : "  [not applicable, requires ") << condition << "]\n";
        };
        branch("arccos(cos(theta_s) + lambda/d)", c + inv, theta_s_deg >= 90.0, "theta_s >= 90");
        branch("arccos(cos(theta_s) - lambda/d)", c - inv, theta_s_deg < 90.0, "theta_s < 90");
        const auto gl = grating_lobe_angle(theta_s_deg, d_over_lambda);
        if (gl.exists)
            os << "grating lobe at " << std::fixed << std::setprecision(2) << gl.theta_gl_deg << " deg\n";
        else if (d_over_lambda <= 0.5)
            os << "no grating lobe (d <= lambda/2)\n";
        else
            os << "no grating lobe in visible space\n";
        return os.str();
    }

    std::string cmd_sweep(const RunConfig &config, const DesignVector &chi, SweepKind kind)
    {
        config.validate();
        if (kind == SweepKind::frequency)
            return sweep_csv(frequency_sweep(config, chi, config.band.frequencies()), "f_hz");
        return sweep_csv(scan_sweep(config, chi, 90.0, 150.0, 1.0), "theta_s_deg");
    }

    DesignVector load_chi(const fs::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw ConfigError("cannot open chi file '" + path.string() + "'");
        json j;
        try
        {
            j = json::parse(in);
        }
        catch (const json::exception &e)
        {
            throw ConfigError("chi file '" + path.string() + "' is not valid JSON: " + e.what());
        }
        const json &obj = j.contains("chi_opt") ? j.at("chi_opt") : j;
        if (!obj.is_object())
            throw ConfigError("chi file '" + path.string() + "' must hold an object of descriptors");
        const auto names = descriptor_names();
        std::array<double, descriptor_count> a{};
        for (std::size_t k = 0; k < names.size(); ++k)
        {
            const std::string key(names[k]);
            if (!obj.contains(key) || !obj.at(key).is_number())
                throw ConfigError("chi file '" + path.string() + "' lacks numeric descriptor " + key);
            a[k] = obj.at(key).get<double>();
        }
        for (const auto &item : obj.items())
            if (std::find(names.begin(), names.end(), item.key()) == names.end())
                throw ConfigError("chi file '" + path.string() + "' has unknown descriptor '" + item.key() + "'");
        return DesignVector::from_array(a);
    }

    std::string frequency_label(double freq_hz)
    {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.6gGHz", freq_hz / 1e9);
        return buf;
    }

} // namespace ospa
