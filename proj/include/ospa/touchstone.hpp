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

#ifndef OSPA_TOUCHSTONE_HPP
#define OSPA_TOUCHSTONE_HPP

#include "ospa/pattern.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ospa
{
    // Touchstone v1 one-port data (.s1p). RI, MA and DB encodings are accepted;
    // values are stored as linear complex reflection coefficients.
    struct OnePortData
    {
        std::vector<double> freq_hz;
        std::vector<cplx> s11;
        double reference_ohm = 50.0;
    };

    OnePortData parse_s1p(std::istream &is, const std::string &source_name = "<stream>");
    OnePortData read_s1p(const std::filesystem::path &path);

    enum class TouchstoneFormat
    {
        ri,
        ma,
        db
    };

    // Frequencies written in Hz with 17 significant digits
    void write_s1p(std::ostream &os, const OnePortData &data, TouchstoneFormat format = TouchstoneFormat::db);

} // namespace ospa

#endif
