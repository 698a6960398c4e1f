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

// Analytic element model.
//
// Pattern: a driven patch with element factor EF(theta) = max(sin theta, 0)^p and a
// parasitic director raised by h = t_3 and displaced by -Delta_z along the array
// axis. The two sources interfere:
//
//   E_co(theta) = EF(theta) |1 + rho exp(j (psi_c + k (h sin theta - Delta_z cos theta)))|
//
// with rho = rho_max * (director/patch overlap fraction). For Delta_z = 0 the phase
// depends on sin(theta) only and the pattern is symmetric about broadside.
//
// Reflection: product of two single-pole resonances (driven patch, director) whose
// centre frequencies follow the half-wave microstrip resonance and whose match
// depths depend on the slot offset and the slot length.
//
// Mutual coupling: elements with exactly one neighbour get a fixed pattern shift and
// a fixed relative resonance shift.

#include "ospa/em_proxy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ospa
{
    namespace
    {
        constexpr std::array<std::string_view, descriptor_count> names = {
            "L_f", "W_f", "L_s", "W_s", "O_s", "L_p", "W_p", "L_d", "W_d", "Delta_z"};

        double interval_overlap(double width_a, double width_b, double offset)
        {
            const double lo = std::max(-0.5 * width_a, offset - 0.5 * width_b);
            const double hi = std::min(0.5 * width_a, offset + 0.5 * width_b);
            return std::max(0.0, hi - lo);
        }
    } // namespace

    std::array<double, descriptor_count> DesignVector::to_array() const
    {
        return {feed_length, feed_width,   slot_length,     slot_width,     slot_offset,
                patch_length, patch_width, director_length, director_width, director_offset};
    }

    DesignVector DesignVector::from_array(std::span<const double> v)
    {
        if (v.size() != descriptor_count)
            throw std::invalid_argument("design vector needs exactly 10 descriptors");
        return DesignVector{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
    }

    const std::array<std::string_view, descriptor_count> &descriptor_names() { return names; }

    DesignVector reference_design_hpol()
    {
        return DesignVector{4.63e-3, 3.14e-4, 2.42e-3, 4.80e-4, 7.27e-4, 2.54e-3, 4.83e-3, 2.63e-3, 4.05e-3, 2.83e-3};
    }

    DesignVector reference_design_vpol()
    {
        return DesignVector{4.63e-3, 3.56e-4, 2.43e-3, 4.79e-4, 7.26e-4, 2.64e-3, 4.86e-3, 2.70e-3, 4.46e-3, 3.35e-3};
    }

    DesignBounds DesignBounds::around(const DesignVector &reference, double scale_lo, double scale_hi)
    {
        auto r = reference.to_array();
        std::array<double, descriptor_count> lo{}, hi{};
        for (std::size_t k = 0; k < descriptor_count; ++k)
        {
            lo[k] = scale_lo * r[k];
            hi[k] = scale_hi * r[k];
        }
        return DesignBounds{DesignVector::from_array(lo), DesignVector::from_array(hi)};
    }

    void DesignBounds::validate() const
    {
        const auto lo = lower.to_array();
        const auto hi = upper.to_array();
        for (std::size_t k = 0; k < descriptor_count; ++k)
        {
            const std::string name(names[k]);
            if (!std::isfinite(lo[k]) || !std::isfinite(hi[k]))
                throw std::invalid_argument("bounds of " + name + " must be finite");
            if (!(lo[k] < hi[k]))
                throw std::invalid_argument("degenerate bounds for " + name + " (lower must be < upper)");
            const bool may_be_zero = (k == 4 || k == 9);
            if (may_be_zero ? lo[k] < 0.0 : !(lo[k] > 0.0))
                throw std::invalid_argument("lower bound of " + name + (may_be_zero ? " must be >= 0" : " must be > 0"));
        }
    }

    bool DesignBounds::contains(const DesignVector &chi) const
    {
        const auto x = chi.to_array();
        const auto lo = lower.to_array();
        const auto hi = upper.to_array();
        for (std::size_t k = 0; k < descriptor_count; ++k)
            if (!(x[k] >= lo[k] && x[k] <= hi[k]))
                return false;
        return true;
    }

    void DesignBounds::require_contains(const DesignVector &chi) const
    {
        const auto x = chi.to_array();
        const auto lo = lower.to_array();
        const auto hi = upper.to_array();
        for (std::size_t k = 0; k < descriptor_count; ++k)
            if (!(x[k] >= lo[k] && x[k] <= hi[k]))
                throw std::out_of_range("descriptor " + std::string(names[k]) + " = " + std::to_string(x[k]) +
                                        " m outside [" + std::to_string(lo[k]) + ", " + std::to_string(hi[k]) + "]");
    }

    double StackUp::total_thickness() const
    {
        double t = 0.0;
        for (const auto &l : layers)
            t += l.thickness;
        return t;
    }

    void StackUp::validate() const
    {
        for (std::size_t l = 0; l < layers.size(); ++l)
        {
            const auto &layer = layers[l];
            const std::string tag = "layer " + std::to_string(l + 1);
            if (!(layer.thickness > 0.0))
                throw std::invalid_argument(tag + " thickness must be > 0");
            if (!(layer.permittivity >= 1.0))
                throw std::invalid_argument(tag + " permittivity must be >= 1");
            if (!(layer.loss_tangent >= 0.0))
                throw std::invalid_argument(tag + " loss tangent must be >= 0");
        }
    }

    FieldComponent co_polar_component(Polarization p)
    {
        return p == Polarization::hpol ? FieldComponent::phi : FieldComponent::theta;
    }

    std::string_view to_string(Polarization p) { return p == Polarization::hpol ? "hpol" : "vpol"; }

    Polarization polarization_from_string(std::string_view s)
    {
        if (s == "hpol")
            return Polarization::hpol;
        if (s == "vpol")
            return Polarization::vpol;
        throw std::invalid_argument("unknown polarization '" + std::string(s) + "' (expected hpol or vpol)");
    }

    void ArrayConfig::validate() const
    {
        if (element_count < 1)
            throw std::invalid_argument("array needs at least one element");
        if (!(spacing >= 0.0))
            throw std::invalid_argument("spacing must be > 0 (or 0 for lambda_c)");
        if (!(f_min > 0.0 && f_min < f_c && f_c < f_max))
            throw std::invalid_argument("band must satisfy 0 < f_min < f_c < f_max");
        if (!(theta_s_deg > 0.0 && theta_s_deg < 180.0))
            throw std::invalid_argument("theta_s must lie in (0, 180) deg");
        stack.validate();
    }

    void ProxyCalibration::validate() const
    {
        if (!(element_exponent > 0.0))
            throw std::invalid_argument("proxy element_exponent must be > 0");
        if (!(coupling_ceiling >= 0.0 && coupling_ceiling < 1.0))
            throw std::invalid_argument("proxy coupling_ceiling must lie in [0, 1)");
        if (!(quality_factor_1 > 0.0 && quality_factor_2 > 0.0))
            throw std::invalid_argument("proxy quality factors must be > 0");
        if (!(std::abs(edge_pattern_shift_deg) < 45.0))
            throw std::invalid_argument("proxy edge_pattern_shift_deg out of range");
        if (!(edge_frequency_shift > -0.5 && edge_frequency_shift < 0.5))
            throw std::invalid_argument("proxy edge_frequency_shift out of range");
        if (!(cross_pol_coupling >= 0.0))
            throw std::invalid_argument("proxy cross_pol_coupling must be >= 0");
        if (!(min_match_depth > 0.0 && min_match_depth <= 1.0))
            throw std::invalid_argument("proxy min_match_depth must lie in (0, 1]");
        if (!std::isfinite(reference_gain_db) || !std::isfinite(coupling_phase_rad))
            throw std::invalid_argument("proxy constants must be finite");
    }

    double effective_permittivity(double permittivity, double thickness, double width)
    {
        return 0.5 * (permittivity + 1.0) + 0.5 * (permittivity - 1.0) / std::sqrt(1.0 + 12.0 * thickness / width);
    }

    double director_overlap_fraction(const DesignVector &chi)
    {
        // Widths run along the array axis (the director offset direction), lengths across it
        const double along = interval_overlap(chi.patch_width, chi.director_width, -chi.director_offset);
        const double across = std::min(chi.patch_length, chi.director_length);
        return std::clamp(along * across / (chi.patch_length * chi.patch_width), 0.0, 1.0);
    }

    bool is_edge_element(std::size_t element_index, std::size_t element_count)
    {
        return element_count >= 2 && (element_index == 0 || element_index + 1 == element_count);
    }

    ResonanceModel element_resonances(const DesignVector &chi, const ArrayConfig &config, const ProxyCalibration &cal,
                                      std::size_t element_index)
    {
        const auto &l2 = config.stack.layers[1];
        const auto &l3 = config.stack.layers[2];
        const double lambda_c = speed_of_light / config.f_c;

        ResonanceModel r;
        r.f1 = speed_of_light /
               (2.0 * chi.patch_length * std::sqrt(effective_permittivity(l2.permittivity, l2.thickness, chi.patch_width)));
        r.f2 = speed_of_light / (2.0 * chi.director_length *
                                 std::sqrt(effective_permittivity(l3.permittivity, l3.thickness, chi.director_width)));
        if (is_edge_element(element_index, config.element_count))
        {
            r.f1 *= 1.0 + cal.edge_frequency_shift;
            r.f2 *= 1.0 + cal.edge_frequency_shift;
        }

        const double slot_ref = 0.15 * lambda_c;
        r.depth1 = std::clamp(std::abs(chi.slot_offset - slot_ref) / slot_ref, cal.min_match_depth, 1.0);
        const double len_ref = 0.5 * chi.patch_length;
        r.depth2 = std::clamp(std::abs(chi.slot_length - len_ref) / len_ref, cal.min_match_depth, 1.0);
        return r;
    }

    double resonance_reflection(double freq_hz, double f_res, double quality, double depth)
    {
        const double delta = freq_hz / f_res - f_res / freq_hz;
        const double qd2 = quality * quality * delta * delta;
        return std::sqrt((depth * depth + qd2) / (1.0 + qd2));
    }

    FieldCut proxy_element_pattern(const DesignVector &chi, const ArrayConfig &config, const ProxyCalibration &cal,
                                   std::size_t element_index, double freq_hz, const AngleGrid &grid)
    {
        const double k = 2.0 * pi * freq_hz / speed_of_light;
        const double h = config.stack.layers[2].thickness;
        const double rho = cal.coupling_ceiling * director_overlap_fraction(chi);
        const double shift = is_edge_element(element_index, config.element_count) ? cal.edge_pattern_shift_deg : 0.0;
        const FieldComponent co = co_polar_component(config.polarization);

        FieldCut cut;
        cut.grid = grid;
        cut.e_theta.assign(grid.count, cplx{});
        cut.e_phi.assign(grid.count, cplx{});
        auto &co_vals = cut.component(co);
        auto &cx_vals = cut.component(cross_of(co));
        for (std::size_t i = 0; i < grid.count; ++i)
        {
            const double t = deg_to_rad(grid[i] - shift);
            const double s = std::sin(t);
            const double c = std::cos(t);
            const double ef = std::pow(std::max(s, 0.0), cal.element_exponent);
            const double phase = cal.coupling_phase_rad + k * (h * s - chi.director_offset * c);
            co_vals[i] = ef * std::abs(1.0 + std::polar(rho, phase));
            cx_vals[i] = cal.cross_pol_coupling * rho * ef * c;
        }
        return cut;
    }

    ElementResponse evaluate_proxy(const DesignVector &chi, const ArrayConfig &config, const DesignBounds &bounds,
                                   const ProxyCalibration &cal, std::span<const double> freq_hz, const AngleGrid &grid)
    {
        bounds.require_contains(chi);
        for (double f : freq_hz)
            if (!(f >= 0.5 * config.f_min && f <= 1.5 * config.f_max))
                throw std::out_of_range("frequency " + std::to_string(f) + " Hz outside the proxy validity range");

        const std::size_t n_el = config.element_count;
        ElementResponse r;
        r.freq_hz.assign(freq_hz.begin(), freq_hz.end());
        r.co_pol = co_polar_component(config.polarization);
        r.s_nn_db.assign(n_el, std::vector<double>(freq_hz.size()));
        r.patterns.assign(n_el, {});
        for (std::size_t n = 0; n < n_el; ++n)
        {
            const ResonanceModel res = element_resonances(chi, config, cal, n);
            r.patterns[n].reserve(freq_hz.size());
            for (std::size_t j = 0; j < freq_hz.size(); ++j)
            {
                const double f = freq_hz[j];
                const double g = resonance_reflection(f, res.f1, cal.quality_factor_1, res.depth1) *
                                 resonance_reflection(f, res.f2, cal.quality_factor_2, res.depth2);
                r.s_nn_db[n][j] = 20.0 * std::log10(g);
                r.patterns[n].push_back(proxy_element_pattern(chi, config, cal, n, f, grid));
            }
        }
        return r;
    }

    double element_tilt_deg(const FieldCut &pattern, FieldComponent co_pol)
    {
        const auto &co = pattern.component(co_pol);
        ScalarCut mag{pattern.grid, std::vector<double>(co.size())};
        std::size_t best = 0;
        for (std::size_t i = 0; i < co.size(); ++i)
        {
            mag.values[i] = std::abs(co[i]);
            if (mag.values[i] > mag.values[best])
                best = i;
        }
        return refine_peak(mag, best).theta_deg;
    }

    ProxyEvaluator::ProxyEvaluator(ArrayConfig config, DesignBounds bounds, ProxyCalibration cal, AngleGrid grid)
        : config_(std::move(config)), bounds_(std::move(bounds)), cal_(cal), grid_(grid)
    {
        config_.validate();
        bounds_.validate();
        cal_.validate();
    }

    ElementResponse ProxyEvaluator::evaluate(const DesignVector &chi, std::span<const double> freq_hz) const
    {
        return evaluate_proxy(chi, config_, bounds_, cal_, freq_hz, grid_);
    }

} // namespace ospa
