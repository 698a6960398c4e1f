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

#ifndef OSPA_EXTERNAL_IMPORT_HPP
#define OSPA_EXTERNAL_IMPORT_HPP

#include "ospa/em_proxy.hpp"

#include <filesystem>
#include <span>
#include <vector>

namespace ospa
{
    // Files describing one array element: its port reflection and, optionally, one
    // embedded pattern cut per frequency of the Touchstone file (same order).
    struct ElementFiles
    {
        std::filesystem::path s1p;
        std::vector<std::filesystem::path> patterns;
    };

    // Builds an ElementResponse from measured or externally simulated data.
    // Scalar pattern CSVs are read as power in dB and mapped onto the co-polar component.
    ElementResponse import_external(std::span<const ElementFiles> elements, FieldComponent co_pol);

    // Evaluator backed by a fixed imported response. The design vector is ignored;
    // requested frequencies must be present in the imported grid.
    class FileEvaluator final : public EmEvaluator
    {
    public:
        explicit FileEvaluator(ElementResponse response);

        ElementResponse evaluate(const DesignVector &chi, std::span<const double> freq_hz) const override;
        std::size_t element_count() const override { return response_.element_count(); }

    private:
        ElementResponse response_;
    };

} // namespace ospa

#endif
