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

#include "ospa/external_import.hpp"
#include "ospa/pattern_csv.hpp"
#include "ospa/touchstone.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ospa
{
    namespace
    {
        bool same_frequency(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(std::abs(a), std::abs(b)); }

        FieldCut as_field(PatternCsv &&csv, FieldComponent co_pol)
        {
            if (auto *f = std::get_if<FieldCut>(&csv))
                return std::move(*f);
            const auto &s = std::get<ScalarCut>(csv);
            FieldCut cut;
            cut.grid = s.grid;
            cut.e_theta.assign(s.grid.count, cplx{});
            cut.e_phi.assign(s.grid.count, cplx{});
            auto &co = cut.component(co_pol);
            for (std::size_t i = 0; i < s.grid.count; ++i)
                co[i] = std::sqrt(std::pow(10.0, s.values[i] / 10.0));
            return cut;
        }
    } // namespace

    ElementResponse import_external(std::span<const ElementFiles> elements, FieldComponent co_pol)
    {
        if (elements.empty())
            throw std::invalid_argument("no element files given");

        ElementResponse r;
        r.co_pol = co_pol;
        const bool with_patterns = !elements.front().patterns.empty();
        for (std::size_t n = 0; n < elements.size(); ++n)
        {
            const auto &files = elements[n];
            const OnePortData s = read_s1p(files.s1p);
            if (n == 0)
                r.freq_hz = s.freq_hz;
            else
            {
                bool agree = s.freq_hz.size() == r.freq_hz.size();
                for (std::size_t j = 0; agree && j < s.freq_hz.size(); ++j)
                    agree = same_frequency(s.freq_hz[j], r.freq_hz[j]);
                if (!agree)
                    throw std::runtime_error("frequency grid of " + files.s1p.string() +
                                             " disagrees with element 1 (" + elements.front().s1p.string() + ")");
            }
            std::vector<double> db(s.s11.size());
            for (std::size_t j = 0; j < s.s11.size(); ++j)
                db[j] = 20.0 * std::log10(std::abs(s.s11[j]));
            r.s_nn_db.push_back(std::move(db));

            if (files.patterns.empty() != !with_patterns)
                throw std::runtime_error("either every element or no element must supply pattern files");
            if (!with_patterns)
                continue;
            if (files.patterns.size() != r.freq_hz.size())
                throw std::runtime_error("element " + std::to_string(n + 1) + " has " +
                                         std::to_string(files.patterns.size()) + " pattern files for " +
                                         std::to_string(r.freq_hz.size()) + " frequencies");
            std::vector<FieldCut> cuts;
            for (const auto &p : files.patterns)
            {
                cuts.push_back(as_field(read_pattern_csv(p), co_pol));
                const AngleGrid &common = r.patterns.empty() ? cuts.front().grid : r.patterns.front().front().grid;
                if (!(cuts.back().grid == common))
                    throw std::runtime_error("pattern " + p.string() + " is not on the common angle grid");
            }
            r.patterns.push_back(std::move(cuts));
        }
        return r;
    }

    FileEvaluator::FileEvaluator(ElementResponse response) : response_(std::move(response))
    {
        if (response_.element_count() == 0)
            throw std::invalid_argument("imported response has no elements");
    }

    ElementResponse FileEvaluator::evaluate(const DesignVector &, std::span<const double> freq_hz) const
    {
        ElementResponse out;
        out.co_pol = response_.co_pol;
        out.freq_hz.assign(freq_hz.begin(), freq_hz.end());
        out.s_nn_db.assign(response_.element_count(), {});
        if (response_.has_patterns())
            out.patterns.assign(response_.element_count(), {});
        for (double f : freq_hz)
        {
            std::size_t j = 0;
            while (j < response_.freq_hz.size() && !same_frequency(response_.freq_hz[j], f))
                ++j;
            if (j == response_.freq_hz.size())
                throw std::out_of_range("imported data has no sample at " + std::to_string(f) + " Hz");
            for (std::size_t n = 0; n < response_.element_count(); ++n)
            {
                out.s_nn_db[n].push_back(response_.s_nn_db[n][j]);
                if (response_.has_patterns())
                    out.patterns[n].push_back(response_.patterns[n][j]);
            }
        }
        return out;
    }

} // namespace ospa
