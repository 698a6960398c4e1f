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

#include "ospa/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ospa
{
    std::vector<double> AngleGrid::angles() const
    {
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i)
            out[i] = (*this)[i];
        return out;
    }

    AngleGrid AngleGrid::full_elevation(double step_deg)
    {
        if (!(step_deg > 0.0) || step_deg > 180.0)
            throw std::invalid_argument("angle step must lie in (0, 180] deg");
        const double intervals = 180.0 / step_deg;
        const double rounded = std::round(intervals);
        if (std::abs(intervals - rounded) > 1e-9)
            throw std::invalid_argument("angle step must divide 180 deg");
        return AngleGrid{0.0, step_deg, static_cast<std::size_t>(rounded) + 1};
    }

    bool operator==(const AngleGrid &a, const AngleGrid &b)
    {
        return a.count == b.count && std::abs(a.start_deg - b.start_deg) < 1e-9 && std::abs(a.step_deg - b.step_deg) < 1e-12;
    }

    std::vector<double> FieldCut::power() const
    {
        std::vector<double> p(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i)
            p[i] = std::norm(e_theta[i]) + std::norm(e_phi[i]);
        return p;
    }

    ArrayGeometry element_positions(std::size_t element_count, double spacing)
    {
        if (element_count == 0)
            throw std::invalid_argument("element count must be >= 1");
        if (!(spacing > 0.0))
            throw std::invalid_argument("element spacing must be > 0");

        ArrayGeometry g;
        g.element_count = element_count;
        g.spacing = spacing;
        g.positions.resize(element_count);

        const double gamma = (element_count % 2 == 0) ? 0.5 : 0.0;
        const double half = static_cast<double>(element_count / 2);
        for (std::size_t n = 0; n < element_count; ++n)
            g.positions[n] = (gamma - half + static_cast<double>(n)) * spacing;
        return g;
    }

    Excitations steering_excitations(const ArrayGeometry &geometry, double theta_s_deg, double lambda)
    {
        if (!(theta_s_deg > 0.0 && theta_s_deg < 180.0))
            throw std::invalid_argument("steering angle must lie in (0, 180) deg");
        if (!(lambda > 0.0))
            throw std::invalid_argument("wavelength must be > 0");

        const double k = 2.0 * pi / lambda;
        const double cos_s = std::cos(deg_to_rad(theta_s_deg));
        Excitations ex;
        ex.weights.reserve(geometry.positions.size());
        for (double z : geometry.positions)
            ex.weights.push_back(std::polar(1.0, -k * z * cos_s));
        return ex;
    }

    std::vector<cplx> array_factor(const Excitations &excitations, const ArrayGeometry &geometry, double lambda,
                                   const AngleGrid &grid)
    {
        if (excitations.weights.size() != geometry.positions.size())
            throw std::invalid_argument("excitation count does not match element count");
        if (!(lambda > 0.0))
            throw std::invalid_argument("wavelength must be > 0");

        const double k = 2.0 * pi / lambda;
        std::vector<cplx> af(grid.count);
        for (std::size_t i = 0; i < grid.count; ++i)
        {
            const double c = std::cos(deg_to_rad(grid[i]));
            cplx sum{0.0, 0.0};
            for (std::size_t n = 0; n < geometry.positions.size(); ++n)
                sum += excitations.weights[n] * std::polar(1.0, k * geometry.positions[n] * c);
            af[i] = sum;
        }
        return af;
    }

    FieldCut total_pattern(const Excitations &excitations, std::span<const FieldCut> element_patterns,
                           const ArrayGeometry &geometry, double lambda, const AngleGrid &grid)
    {
        const std::size_t n_el = geometry.positions.size();
        if (excitations.weights.size() != n_el)
            throw std::invalid_argument("excitation count does not match element count");
        if (element_patterns.size() != n_el)
            throw std::invalid_argument("need exactly one embedded element pattern per element");
        for (std::size_t n = 0; n < n_el; ++n)
        {
            const auto &ep = element_patterns[n];
            if (!(ep.grid == grid) || ep.e_theta.size() != grid.count || ep.e_phi.size() != grid.count)
                throw PatternError("element pattern " + std::to_string(n + 1) + " is not sampled on the requested grid");
        }

        const double k = 2.0 * pi / lambda;
        FieldCut out;
        out.grid = grid;
        out.e_theta.assign(grid.count, cplx{});
        out.e_phi.assign(grid.count, cplx{});
        for (std::size_t i = 0; i < grid.count; ++i)
        {
            const double c = std::cos(deg_to_rad(grid[i]));
            for (std::size_t n = 0; n < n_el; ++n)
            {
                const cplx a = excitations.weights[n] * std::polar(1.0, k * geometry.positions[n] * c);
                out.e_theta[i] += a * element_patterns[n].e_theta[i];
                out.e_phi[i] += a * element_patterns[n].e_phi[i];
            }
        }
        return out;
    }

    GratingLobeReport grating_lobe_angle(double theta_s_deg, double d_over_lambda)
    {
        if (!(theta_s_deg > 0.0 && theta_s_deg < 180.0))
            throw std::invalid_argument("steering angle must lie in (0, 180) deg");
        if (!(d_over_lambda > 0.0))
            throw std::invalid_argument("d/lambda must be > 0");

        GratingLobeReport r;
        if (d_over_lambda <= 0.5)
            return r;

        const double cos_s = std::cos(deg_to_rad(theta_s_deg));
        const double arg = theta_s_deg >= 90.0 ? cos_s + 1.0 / d_over_lambda : cos_s - 1.0 / d_over_lambda;
        constexpr double slack = 1e-12;
        if (arg > 1.0 + slack || arg < -1.0 - slack)
            return r;

        r.exists = true;
        r.theta_gl_deg = rad_to_deg(std::acos(std::clamp(arg, -1.0, 1.0)));
        return r;
    }

    std::vector<double> normalized_power_db(std::span<const double> power)
    {
        std::vector<double> out(power.size(), db_floor);
        if (power.empty())
            return out;
        const double peak = *std::max_element(power.begin(), power.end());
        if (!(peak > 0.0))
            return out;
        for (std::size_t i = 0; i < power.size(); ++i)
        {
            const double rel = power[i] / peak;
            out[i] = rel > 1e-12 ? 10.0 * std::log10(rel) : db_floor;
        }
        return out;
    }

    PeakLocation refine_peak(const ScalarCut &cut, std::size_t i)
    {
        const auto &v = cut.values;
        PeakLocation p{cut.grid[i], v[i]};
        if (i == 0 || i + 1 >= v.size())
            return p;
        const double a = v[i - 1], b = v[i], c = v[i + 1];
        const double denom = a - 2.0 * b + c;
        if (!(denom < 0.0))
            return p;
        const double offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
        p.theta_deg = cut.grid[i] + offset * cut.grid.step_deg;
        p.value = b - 0.25 * (a - c) * offset;
        return p;
    }

    namespace
    {
        std::vector<std::size_t> local_maxima(const std::vector<double> &v)
        {
            std::vector<std::size_t> idx;
            const std::size_t n = v.size();
            if (n == 1)
            {
                idx.push_back(0);
                return idx;
            }
            // A plateau top is reported once, at its first sample. Grid ends count
            // only when strictly above their neighbour.
            for (std::size_t i = 0; i < n; ++i)
            {
                if (v[i] <= db_floor)
                    continue;
                const bool is_max = (i == 0)       ? v[0] > v[1]
                                    : (i + 1 == n) ? v[i] > v[i - 1]
                                                   : (v[i] > v[i - 1] && v[i] >= v[i + 1]);
                if (is_max)
                    idx.push_back(i);
            }
            return idx;
        }
    } // namespace

    SllResult extract_sll(const ScalarCut &pattern_db, double theta_s_deg, double main_beam_window_deg)
    {
        const auto &v = pattern_db.values;
        if (v.size() != pattern_db.grid.count || v.empty())
            throw std::invalid_argument("pattern values do not match the angle grid");

        // Clamp to the display floor relative to the peak
        const double peak = *std::max_element(v.begin(), v.end());
        ScalarCut cut = pattern_db;
        for (double &x : cut.values)
            x = std::max(x - peak, db_floor);

        const auto maxima = local_maxima(cut.values);

        std::size_t main = v.size();
        for (std::size_t i : maxima)
        {
            if (std::abs(cut.grid[i] - theta_s_deg) > main_beam_window_deg + 1e-9)
                continue;
            if (main == v.size() || cut.values[i] > cut.values[main])
                main = i;
        }
        if (main == v.size())
            throw PatternError("no main beam within " + std::to_string(main_beam_window_deg) + " deg of theta_s = " +
                               std::to_string(theta_s_deg) + " deg");

        std::size_t lo = main, hi = main;
        while (lo > 0 && cut.values[lo - 1] <= cut.values[lo])
            --lo;
        while (hi + 1 < v.size() && cut.values[hi + 1] <= cut.values[hi])
            ++hi;

        SllResult r;
        r.main_beam = refine_peak(cut, main);
        bool found = false;
        for (std::size_t i : maxima)
        {
            if (i >= lo && i <= hi)
                continue;
            const PeakLocation p = refine_peak(cut, i);
            if (!found || p.value > r.worst_sidelobe.value)
                r.worst_sidelobe = p;
            found = true;
        }
        if (found)
            r.sll_db = r.worst_sidelobe.value - r.main_beam.value;
        return r;
    }

    double gain_at(const ScalarCut &pattern_db, double theta_deg)
    {
        const auto &g = pattern_db.grid;
        if (pattern_db.values.size() != g.count || g.count == 0)
            throw std::invalid_argument("pattern values do not match the angle grid");
        constexpr double slack = 1e-9;
        if (theta_deg < g.start_deg - slack || theta_deg > g.stop_deg() + slack)
            throw std::out_of_range("theta = " + std::to_string(theta_deg) + " deg outside the pattern grid");
        if (g.count == 1)
            return pattern_db.values[0];

        const double pos = std::clamp((theta_deg - g.start_deg) / g.step_deg, 0.0, static_cast<double>(g.count - 1));
        const auto i = std::min(static_cast<std::size_t>(pos), g.count - 2);
        const double t = pos - static_cast<double>(i);
        if (t == 0.0)
            return pattern_db.values[i];
        return (1.0 - t) * pattern_db.values[i] + t * pattern_db.values[i + 1];
    }

    double cross_pol_level(const FieldCut &field, FieldComponent co_pol)
    {
        const auto &co = field.component(co_pol);
        const auto &cx = field.component(cross_of(co_pol));
        if (co.size() != cx.size())
            throw std::invalid_argument("field components are not on the same grid");

        double co_max = 0.0, cx_max = 0.0;
        for (std::size_t i = 0; i < co.size(); ++i)
        {
            co_max = std::max(co_max, std::abs(co[i]));
            cx_max = std::max(cx_max, std::abs(cx[i]));
        }
        if (!(co_max > 0.0))
            throw PatternError("co-polar component is identically zero");
        if (cx_max == 0.0)
            return minus_infinity_db;
        return 20.0 * std::log10(cx_max / co_max);
    }

} // namespace ospa
