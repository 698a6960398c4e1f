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

#ifndef OSPA_PATTERN_CSV_HPP
#define OSPA_PATTERN_CSV_HPP

#include "ospa/pattern.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <variant>

// Pattern cut CSV files:
//   theta_deg,value                                         (power / gain cuts)
//   theta_deg,re_Etheta,im_Etheta,re_Ephi,im_Ephi           (field cuts)
// One row per grid sample, LF line endings, values written with 17 significant digits.

namespace ospa
{
    class ParseError : public std::runtime_error
    {
    public:
        ParseError(const std::string &source, std::size_t line, const std::string &what);

        const std::string &source() const { return source_; }
        std::size_t line() const { return line_; }

    private:
        std::string source_;
        std::size_t line_;
    };

    void write_pattern_csv(std::ostream &os, const ScalarCut &cut);
    void write_pattern_csv(std::ostream &os, const FieldCut &cut);

    using PatternCsv = std::variant<ScalarCut, FieldCut>;

    // Rejects unknown headers, ragged rows, non-numeric cells and non-uniform or
    // non-increasing angle grids.
    PatternCsv read_pattern_csv(std::istream &is, const std::string &source_name = "<stream>");
    PatternCsv read_pattern_csv(const std::filesystem::path &path);

    // Writes through a temporary file and renames it into place
    void write_file_atomically(const std::filesystem::path &path, const std::string &contents);

} // namespace ospa

#endif
