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

#include "ospa/cost.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ospa
{
    namespace
    {
        constexpr double freq_slack = 1e-9;

        bool in_band(double f, const BandSpec &band)
        {
            return f >= band.f_min * (1.0 - freq_slack) && f <= band.f_max * (1.0 + freq_slack);
        }

        void require_coverage(const ElementResponse &response, const BandSpec &band)
        {
            if (response.freq_hz.empty() || response.element_count() == 0)
                throw std::invalid_argument("empty element response");
            const auto [lo, hi] = std::minmax_element(response.freq_hz.begin(), response.freq_hz.end());
            if (*lo > band.f_min * (1.0 + freq_slack) || *hi < band.f_max * (1.0 - freq_slack))
                throw std::invalid_argument("response frequency grid does not cover the band [" +
                                            std::to_string(band.f_min) + ", " + std::to_string(band.f_max) + "] Hz");
        }
    } // namespace

    std::vector<double> BandSpec::frequencies() const
    {
        std::vector<double> f(samples);
        if (samples == 1)
        {
            f[0] = f_c;
            return f;
        }
        const double step = (f_max - f_min) / static_cast<double>(samples - 1);
        for (std::size_t j = 0; j < samples; ++j)
            f[j] = f_min + static_cast<double>(j) * step;
        f.back() = f_max;
        return f;
    }

    void BandSpec::validate() const
    {
        if (!(f_min > 0.0 && f_min < f_c && f_c < f_max))
            throw std::invalid_argument("band must satisfy 0 < f_min < f_c < f_max");
        if (samples < 3 || samples % 2 == 0)
            throw std::invalid_argument("frequency sample count must be odd and >= 3");
        if (!(threshold_db < 0.0))
            throw std::invalid_argument("reflection threshold must be negative (dB)");
        if (!(theta_s_deg > 0.0 && theta_s_deg < 180.0))
            throw std::invalid_argument("theta_s must lie in (0, 180) deg");
    }

    double phi_eim(const ElementResponse &response, const BandSpec &band, EimPenalty penalty)
    {
        require_coverage(response, band);
        const double scale = std::abs(band.threshold_db);
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t n = 0; n < response.element_count(); ++n)
        {
            for (std::size_t j = 0; j < response.freq_hz.size(); ++j)
            {
                if (!in_band(response.freq_hz[j], band))
                    continue;
                const double excess = response.s_nn_db[n][j] - band.threshold_db;
                const double r = penalty == EimPenalty::indicator ? (excess > 0.0 ? 1.0 : 0.0) : std::max(excess, 0.0);
                sum += r / scale;
                ++count;
            }
        }
        return sum / static_cast<double>(count);
    }

    double sll_penalty(std::span<const double> sll_db, double clamp_db)
    {
        if (sll_db.empty())
            throw std::invalid_argument("no SLL samples");
        if (!(clamp_db < 0.0))
            throw std::invalid_argument("SLL clamp must be negative");
        double sum = 0.0;
        for (double s : sll_db)
        {
            if (std::isinf(s) && s < 0.0)
                continue;
            sum += 1.0 / std::abs(std::min(s, clamp_db));
        }
        return sum / static_cast<double>(sll_db.size());
    }

    FieldCut steered_total_pattern(const ElementResponse &response, std::size_t freq_index,
                                   const ArrayGeometry &geometry, double theta_s_deg)
    {
        if (!response.has_patterns())
            throw std::invalid_argument("response carries no element patterns");
        const double lambda = wavelength(response.freq_hz.at(freq_index));
        const Excitations w = steering_excitations(geometry, theta_s_deg, lambda);

        std::vector<FieldCut> elements;
        elements.reserve(response.element_count());
        for (std::size_t n = 0; n < response.element_count(); ++n)
            elements.push_back(response.patterns[n].at(freq_index));
        return total_pattern(w, elements, geometry, lambda, elements.front().grid);
    }

    SllResult array_sll(const ElementResponse &response, std::size_t freq_index, const ArrayGeometry &geometry,
                        double theta_s_deg, double main_beam_window_deg)
    {
        const FieldCut total = steered_total_pattern(response, freq_index, geometry, theta_s_deg);
        const ScalarCut db{total.grid, normalized_power_db(total.power())};
        return extract_sll(db, theta_s_deg, main_beam_window_deg);
    }

    PhiSll phi_sll(const ElementResponse &response, const ArrayGeometry &geometry, const BandSpec &band,
                   const CostOptions &options)
    {
        require_coverage(response, band);
        PhiSll out;
        for (std::size_t j = 0; j < response.freq_hz.size(); ++j)
        {
            const double f = response.freq_hz[j];
            if (!in_band(f, band))
                continue;
            try
            {
                out.sll_db.push_back(array_sll(response, j, geometry, band.theta_s_deg, options.main_beam_window_deg).sll_db);
            }
            catch (const PatternError &e)
            {
                throw PatternError("at f = " + std::to_string(f) + " Hz: " + e.what());
            }
            out.freq_hz.push_back(f);
        }
        out.value = sll_penalty(out.sll_db, options.sll_clamp_db);
        return out;
    }

    CostBreakdown phi_total(const ElementResponse &response, const ArrayGeometry &geometry, const BandSpec &band,
                            const CostOptions &options)
    {
        CostBreakdown b;
        b.phi_eim = phi_eim(response, band, options.eim_penalty);
        PhiSll s = phi_sll(response, geometry, band, options);
        b.phi_sll = s.value;
        b.freq_hz = std::move(s.freq_hz);
        b.sll_db = std::move(s.sll_db);
        b.phi = b.phi_eim + b.phi_sll;

        for (std::size_t n = 0; n < response.element_count(); ++n)
        {
            double worst = -std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < response.freq_hz.size(); ++j)
                if (in_band(response.freq_hz[j], band))
                    worst = std::max(worst, response.s_nn_db[n][j]);
            b.worst_snn_db.push_back(worst);
        }
        return b;
    }

    CostBreakdown phi_total(const DesignVector &chi, const ArrayGeometry &geometry, const BandSpec &band,
                            const EmEvaluator &evaluator, const CostOptions &options)
    {
        const auto freqs = band.frequencies();
        const ElementResponse r = evaluator.evaluate(chi, freqs);
        return phi_total(r, geometry, band, options);
    }

} // namespace ospa
