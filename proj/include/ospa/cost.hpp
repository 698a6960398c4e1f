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

#ifndef OSPA_COST_HPP
#define OSPA_COST_HPP

#include "ospa/em_proxy.hpp"

#include <span>
#include <string>
#include <vector>

// Co-design cost  Phi = Phi_EIM + Phi_SLL  over the target band.
//
//   Phi_EIM = 1/(N F) sum_n sum_f R{S_nn(f) - S_th} / |S_th|
//   Phi_SLL = 1/F sum_f 1 / |SLL(f)|
//
// Both band integrals are realized as the mean over uniform frequency samples.

namespace ospa
{
    struct BandSpec
    {
        double f_min = 26e9;
        double f_c = 28e9;
        double f_max = 30e9;
        std::size_t samples = 9;        // F, odd so that f_c is sampled
        double threshold_db = -10.0;    // S_th
        double theta_s_deg = 110.0;

        double fractional_bandwidth() const { return (f_max - f_min) / f_c; }

        // F uniform samples from f_min to f_max inclusive
        std::vector<double> frequencies() const;

        void validate() const;
    };

    enum class EimPenalty
    {
        indicator, // R{x} = 1 if x > 0 else 0
        linear     // R{x} = max(x, 0)
    };

    struct CostOptions
    {
        EimPenalty eim_penalty = EimPenalty::indicator;
        double sll_clamp_db = -0.1;         // SLL is clamped to <= this before inversion
        double main_beam_window_deg = 3.0;
    };

    // Throws std::invalid_argument if the response grid does not cover [f_min, f_max]
    double phi_eim(const ElementResponse &response, const BandSpec &band, EimPenalty penalty = EimPenalty::indicator);

    // Mean of 1/|min(SLL, clamp)| over the given levels; a -inf level (no sidelobe) contributes 0
    double sll_penalty(std::span<const double> sll_db, double clamp_db = -0.1);

    // Total field of the array steered to theta_s, excitations derived at that sample's wavelength
    FieldCut steered_total_pattern(const ElementResponse &response, std::size_t freq_index,
                                   const ArrayGeometry &geometry, double theta_s_deg);

    // SLL of the steered total pattern at one frequency
    SllResult array_sll(const ElementResponse &response, std::size_t freq_index, const ArrayGeometry &geometry,
                        double theta_s_deg, double main_beam_window_deg = 3.0);

    struct PhiSll
    {
        double value = 0.0;
        std::vector<double> freq_hz;
        std::vector<double> sll_db;
    };

    // Excitations are re-derived per frequency (lambda = c0 / f). A main-beam detection
    // failure is rethrown as PatternError naming the frequency.
    PhiSll phi_sll(const ElementResponse &response, const ArrayGeometry &geometry, const BandSpec &band,
                   const CostOptions &options = {});

    struct CostBreakdown
    {
        double phi = 0.0;
        double phi_eim = 0.0;
        double phi_sll = 0.0;
        std::vector<double> freq_hz;
        std::vector<double> sll_db;        // per frequency
        std::vector<double> worst_snn_db;  // per element, max over the band
    };

    CostBreakdown phi_total(const DesignVector &chi, const ArrayGeometry &geometry, const BandSpec &band,
                            const EmEvaluator &evaluator, const CostOptions &options = {});

    // Same, on an already evaluated response
    CostBreakdown phi_total(const ElementResponse &response, const ArrayGeometry &geometry, const BandSpec &band,
                            const CostOptions &options = {});

} // namespace ospa

#endif
