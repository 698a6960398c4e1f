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

#ifndef OSPA_EM_PROXY_HPP
#define OSPA_EM_PROXY_HPP

#include "ospa/pattern.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ospa
{
    inline constexpr std::size_t descriptor_count = 10;

    // Geometric descriptors of one offset stacked patch (OSP) element, all in meters:
    // feed line (L_f, W_f), coupling slot (L_s, W_s) and its offset O_s, driven patch
    // (L_p, W_p), parasitic director (L_d, W_d) and the director offset Delta_z.
    struct DesignVector
    {
        double feed_length = 0.0;     // L_f
        double feed_width = 0.0;      // W_f
        double slot_length = 0.0;     // L_s
        double slot_width = 0.0;      // W_s
        double slot_offset = 0.0;     // O_s
        double patch_length = 0.0;    // L_p
        double patch_width = 0.0;     // W_p
        double director_length = 0.0; // L_d
        double director_width = 0.0;  // W_d
        double director_offset = 0.0; // Delta_z

        std::array<double, descriptor_count> to_array() const;
        static DesignVector from_array(std::span<const double> v);

        bool operator==(const DesignVector &) const = default;
    };

    // Names used in configs, logs and diagnostics, in descriptor order
    const std::array<std::string_view, descriptor_count> &descriptor_names();

    // Optimized H-Pol / V-Pol layouts of the 28 GHz reference design
    DesignVector reference_design_hpol();
    DesignVector reference_design_vpol();

    struct DesignBounds
    {
        DesignVector lower;
        DesignVector upper;

        // [scale_lo, scale_hi] x reference (0.5x - 1.5x by default)
        static DesignBounds around(const DesignVector &reference, double scale_lo = 0.5, double scale_hi = 1.5);

        // Throws std::invalid_argument on lo >= hi or negative / zero lower bounds
        // (O_s and Delta_z may start at 0)
        void validate() const;

        bool contains(const DesignVector &chi) const;

        // Throws std::out_of_range naming the first offending descriptor
        void require_contains(const DesignVector &chi) const;
    };

    struct Layer
    {
        double permittivity = 2.2; // epsilon_r
        double loss_tangent = 9e-4;
        double thickness = 508e-6; // [m]
    };

    // Three-layer stack: feed substrate, driven-patch substrate, director substrate
    struct StackUp
    {
        std::array<Layer, 3> layers{};

        double total_thickness() const;
        void validate() const;
    };

    enum class Polarization
    {
        hpol, // co-polar field along phi-hat in the phi = 0 cut
        vpol  // co-polar field along theta-hat
    };

    FieldComponent co_polar_component(Polarization p);
    std::string_view to_string(Polarization p);
    Polarization polarization_from_string(std::string_view s);

    struct ArrayConfig
    {
        std::size_t element_count = 3;
        double spacing = 0.0; // [m]; d = lambda_c when not set explicitly
        double f_min = 26e9;
        double f_c = 28e9;
        double f_max = 30e9;
        double theta_s_deg = 110.0;
        Polarization polarization = Polarization::hpol;
        StackUp stack;

        // d, defaulting to lambda at f_c
        double element_spacing() const { return spacing > 0.0 ? spacing : speed_of_light / f_c; }
        void validate() const;
    };

    // Constants of the analytic element model. All of them are exposed through the
    // run configuration.
    struct ProxyCalibration
    {
        double element_exponent = 1.0;           // p in EF = max(sin theta, 0)^p
        double coupling_phase_rad = -pi / 2.0;   // psi_c
        double coupling_ceiling = 0.9;           // rho ceiling
        double quality_factor_1 = 15.0;          // driven-patch resonance
        double quality_factor_2 = 15.0;          // director resonance
        double edge_pattern_shift_deg = 1.5;     // elements with one missing neighbour
        double edge_frequency_shift = 0.005;     // relative resonance shift, same elements
        double cross_pol_coupling = 0.05;        // cross-polar leakage per unit rho
        double reference_gain_db = 8.8;          // gain of a bare broadside element at its peak
        double min_match_depth = 0.05;

        void validate() const;
    };

    // Per-element reflection coefficients and embedded element patterns over a frequency grid
    struct ElementResponse
    {
        std::vector<double> freq_hz;
        std::vector<std::vector<double>> s_nn_db;      // [element][frequency]
        std::vector<std::vector<FieldCut>> patterns;   // [element][frequency]; may be empty
        FieldComponent co_pol = FieldComponent::phi;

        std::size_t element_count() const { return s_nn_db.size(); }
        bool has_patterns() const { return !patterns.empty(); }
    };

    // Microstrip effective permittivity (eps+1)/2 + (eps-1)/2 (1 + 12 t/W)^-1/2
    double effective_permittivity(double permittivity, double thickness, double width);

    // Fraction of the driven-patch area shadowed by the director, in [0, 1]
    double director_overlap_fraction(const DesignVector &chi);

    struct ResonanceModel
    {
        double f1 = 0.0;     // driven patch [Hz]
        double f2 = 0.0;     // director [Hz]
        double depth1 = 1.0; // match depth m_1
        double depth2 = 1.0; // match depth m_2
    };

    // Resonances of element n (0-based) inside an N-element array
    ResonanceModel element_resonances(const DesignVector &chi, const ArrayConfig &config, const ProxyCalibration &cal,
                                      std::size_t element_index);

    // |Gamma_i(f)| of a single resonance: sqrt((m^2 + Q^2 delta^2) / (1 + Q^2 delta^2)), delta = f/f_i - f_i/f
    double resonance_reflection(double freq_hz, double f_res, double quality, double depth);

    bool is_edge_element(std::size_t element_index, std::size_t element_count);

    // Deterministic analytic stand-in for a full-wave solve of the N-element array.
    // Throws std::out_of_range when chi violates the bounds (naming the descriptor)
    // or a frequency lies outside [0.5 f_min, 1.5 f_max].
    ElementResponse evaluate_proxy(const DesignVector &chi, const ArrayConfig &config, const DesignBounds &bounds,
                                   const ProxyCalibration &cal, std::span<const double> freq_hz,
                                   const AngleGrid &grid = AngleGrid::full_elevation());

    // Embedded pattern of one element at one frequency
    FieldCut proxy_element_pattern(const DesignVector &chi, const ArrayConfig &config, const ProxyCalibration &cal,
                                   std::size_t element_index, double freq_hz, const AngleGrid &grid);

    // Elevation of the co-polar maximum (parabolically refined)
    double element_tilt_deg(const FieldCut &pattern, FieldComponent co_pol);

    // Abstract electromagnetic evaluator: maps a design to the array's embedded response.
    class EmEvaluator
    {
    public:
        virtual ~EmEvaluator() = default;
        virtual ElementResponse evaluate(const DesignVector &chi, std::span<const double> freq_hz) const = 0;
        virtual std::size_t element_count() const = 0;
    };

    class ProxyEvaluator final : public EmEvaluator
    {
    public:
        ProxyEvaluator(ArrayConfig config, DesignBounds bounds, ProxyCalibration cal,
                       AngleGrid grid = AngleGrid::full_elevation());

        ElementResponse evaluate(const DesignVector &chi, std::span<const double> freq_hz) const override;
        std::size_t element_count() const override { return config_.element_count; }

        const ArrayConfig &config() const { return config_; }
        const ProxyCalibration &calibration() const { return cal_; }

    private:
        ArrayConfig config_;
        DesignBounds bounds_;
        ProxyCalibration cal_;
        AngleGrid grid_;
    };

} // namespace ospa

#endif
