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

#ifndef OSPA_PATTERN_HPP
#define OSPA_PATTERN_HPP

#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

// Array-level mathematics for a linear array laid along the z axis.
// Elevation angle theta is measured from +z; theta > 90 deg looks "down".
// Every function here is pure.

namespace ospa
{
    using cplx = std::complex<double>;

    inline constexpr double pi = 3.14159265358979323846;
    inline constexpr double speed_of_light = 299792458.0; // [m/s]

    // Floor applied to normalized power patterns, in dB below the peak
    inline constexpr double db_floor = -120.0;

    // Returned by extract_sll / cross_pol_level when no lobe / no cross-pol exists
    inline constexpr double minus_infinity_db = -std::numeric_limits<double>::infinity();

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }
    inline double wavelength(double freq_hz) { return speed_of_light / freq_hz; }

    class PatternError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class FieldComponent
    {
        theta,
        phi
    };

    // Uniform elevation grid [start, start + (count-1)*step] in degrees
    struct AngleGrid
    {
        double start_deg = 0.0;
        double step_deg = 0.25;
        std::size_t count = 721;

        double operator[](std::size_t i) const { return start_deg + static_cast<double>(i) * step_deg; }
        double stop_deg() const { return (*this)[count - 1]; }
        std::vector<double> angles() const;

        // [0, 180] with the given step; 180 must be a multiple of step
        static AngleGrid full_elevation(double step_deg = 0.25);
    };

    bool operator==(const AngleGrid &a, const AngleGrid &b);

    struct ArrayGeometry
    {
        std::size_t element_count = 0;
        double spacing = 0.0;          // d [m]
        std::vector<double> positions; // z_n [m], symmetric about the origin
    };

    struct Excitations
    {
        std::vector<cplx> weights; // w_n = alpha_n * exp(j beta_n)
    };

    // Complex far-field samples (E_theta, E_phi) on an elevation cut
    struct FieldCut
    {
        AngleGrid grid;
        std::vector<cplx> e_theta;
        std::vector<cplx> e_phi;

        const std::vector<cplx> &component(FieldComponent q) const { return q == FieldComponent::theta ? e_theta : e_phi; }
        std::vector<cplx> &component(FieldComponent q) { return q == FieldComponent::theta ? e_theta : e_phi; }

        // |E_theta|^2 + |E_phi|^2
        std::vector<double> power() const;
    };

    // Real-valued cut, typically power or gain in dB
    struct ScalarCut
    {
        AngleGrid grid;
        std::vector<double> values;
    };

    struct GratingLobeReport
    {
        bool exists = false;
        double theta_gl_deg = 0.0;
    };

    // z_n = [gamma - floor(N/2) + (n-1)] * d, gamma = 1/2 for even N, 0 otherwise
    ArrayGeometry element_positions(std::size_t element_count, double spacing);

    // Isophoric phase-only steering towards theta_s: alpha_n = 1, beta_n = -k z_n cos(theta_s)
    Excitations steering_excitations(const ArrayGeometry &geometry, double theta_s_deg, double lambda);

    // AF(theta) = sum_n w_n exp(j k z_n cos(theta))
    std::vector<cplx> array_factor(const Excitations &excitations, const ArrayGeometry &geometry, double lambda,
                                   const AngleGrid &grid);

    // E_q(theta) = sum_n w_n E_nq(theta) exp(j k z_n cos(theta)), q in {theta, phi}.
    // element_patterns holds one embedded element pattern per element, all on `grid`.
    FieldCut total_pattern(const Excitations &excitations, std::span<const FieldCut> element_patterns,
                           const ArrayGeometry &geometry, double lambda, const AngleGrid &grid);

    // Grating-lobe angle for d > lambda/2: arccos(cos(theta_s) + lambda/d) for theta_s >= 90,
    // arccos(cos(theta_s) - lambda/d) otherwise; exists = false when that argument leaves [-1, 1].
    // Beyond d = lambda only this first replica is reported.
    GratingLobeReport grating_lobe_angle(double theta_s_deg, double d_over_lambda);

    // 10 log10(p / max p), floored at db_floor
    std::vector<double> normalized_power_db(std::span<const double> power);

    struct PeakLocation
    {
        double theta_deg = 0.0;
        double value = 0.0;
    };

    // Three-point parabolic refinement around sample i (clamped to grid ends)
    PeakLocation refine_peak(const ScalarCut &cut, std::size_t i);

    struct SllResult
    {
        double sll_db = minus_infinity_db; // highest sidelobe minus main peak
        PeakLocation main_beam;
        PeakLocation worst_sidelobe; // meaningful only when sll_db is finite
    };

    // Main beam: highest local maximum within +-main_beam_window_deg of theta_s.
    // Main lobe spans null-to-null (adjacent local minima). Throws PatternError if
    // no local maximum lies in the window.
    SllResult extract_sll(const ScalarCut &pattern_db, double theta_s_deg, double main_beam_window_deg = 3.0);

    // Linear interpolation; throws outside the grid
    double gain_at(const ScalarCut &pattern_db, double theta_deg);

    // max_theta 20 log10(|E_cx| / max |E_co|)
    double cross_pol_level(const FieldCut &field, FieldComponent co_pol);

    inline FieldComponent cross_of(FieldComponent q)
    {
        return q == FieldComponent::theta ? FieldComponent::phi : FieldComponent::theta;
    }

} // namespace ospa

#endif
