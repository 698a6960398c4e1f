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

#include "ospa/pattern_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace ospa
{
    ParseError::ParseError(const std::string &source, std::size_t line, const std::string &what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), source_(source), line_(line)
    {
    }

    namespace
    {
        constexpr const char *scalar_header = "theta_deg,value";
        constexpr const char *field_header = "theta_deg,re_Etheta,im_Etheta,re_Ephi,im_Ephi";

        void put(std::ostream &os, double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            os << buf;
        }

        std::string trim(const std::string &s)
        {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                return {};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        }

        std::vector<double> split_numbers(const std::string &line, const std::string &source, std::size_t lineno)
        {
            std::vector<double> out;
            std::size_t pos = 0;
            while (true)
            {
                const auto comma = line.find(',', pos);
                const std::string cell = trim(line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
                double x = 0.0;
                const char *first = cell.data();
                const char *last = cell.data() + cell.size();
                if (!cell.empty() && *first == '+')
                    ++first;
                const auto [ptr, ec] = std::from_chars(first, last, x);
                if (cell.empty() || ec != std::errc() || ptr != last)
                    throw ParseError(source, lineno, "not a number: '" + cell + "'");
                out.push_back(x);
                if (comma == std::string::npos)
                    break;
                pos = comma + 1;
            }
            return out;
        }

        AngleGrid grid_from_angles(const std::vector<double> &theta, const std::vector<std::size_t> &lines,
                                   const std::string &source)
        {
            if (theta.empty())
                throw ParseError(source, 1, "no data rows");
            if (theta.size() == 1)
                return AngleGrid{theta[0], 1.0, 1};
            for (std::size_t i = 1; i < theta.size(); ++i)
                if (!(theta[i] > theta[i - 1]))
                    throw ParseError(source, lines[i], "angles are not strictly increasing");

            const double step = (theta.back() - theta.front()) / static_cast<double>(theta.size() - 1);
            for (std::size_t i = 1; i < theta.size(); ++i)
                if (std::abs((theta[i] - theta[i - 1]) - step) > 1e-6 * step + 1e-9)
                    throw ParseError(source, lines[i], "angle grid is not uniform");
            return AngleGrid{theta.front(), step, theta.size()};
        }
    } // namespace

    void write_pattern_csv(std::ostream &os, const ScalarCut &cut)
    {
        os << scalar_header << '\n';
        for (std::size_t i = 0; i < cut.grid.count; ++i)
        {
            put(os, cut.grid[i]);
            os << ',';
            put(os, cut.values[i]);
            os << '\n';
        }
    }

    void write_pattern_csv(std::ostream &os, const FieldCut &cut)
    {
        os << field_header << '\n';
        for (std::size_t i = 0; i < cut.grid.count; ++i)
        {
            put(os, cut.grid[i]);
            for (double x : {cut.e_theta[i].real(), cut.e_theta[i].imag(), cut.e_phi[i].real(), cut.e_phi[i].imag()})
            {
                os << ',';
                put(os, x);
            }
            os << '\n';
        }
    }

    PatternCsv read_pattern_csv(std::istream &is, const std::string &source_name)
    {
        std::string line;
        std::size_t lineno = 0;
        std::string header;
        while (header.empty() && std::getline(is, line))
        {
            ++lineno;
            header = trim(line);
        }
        const bool field = header == field_header;
        if (!field && header != scalar_header)
            throw ParseError(source_name, lineno, "unrecognized header '" + header + "'");
        const std::size_t columns = field ? 5 : 2;

        std::vector<double> theta;
        std::vector<std::size_t> lines;
        std::vector<std::vector<double>> rows;
        while (std::getline(is, line))
        {
            ++lineno;
            if (trim(line).empty())
                continue;
            auto cells = split_numbers(line, source_name, lineno);
            if (cells.size() != columns)
                throw ParseError(source_name, lineno,
                                 "expected " + std::to_string(columns) + " columns, got " + std::to_string(cells.size()));
            theta.push_back(cells[0]);
            lines.push_back(lineno);
            rows.push_back(std::move(cells));
        }

        const AngleGrid grid = grid_from_angles(theta, lines, source_name);
        if (field)
        {
            FieldCut cut;
            cut.grid = grid;
            for (const auto &r : rows)
            {
                cut.e_theta.emplace_back(r[1], r[2]);
                cut.e_phi.emplace_back(r[3], r[4]);
            }
            return cut;
        }
        ScalarCut cut;
        cut.grid = grid;
        for (const auto &r : rows)
            cut.values.push_back(r[1]);
        return cut;
    }

    PatternCsv read_pattern_csv(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open pattern file " + path.string());
        return read_pattern_csv(in, path.string());
    }

    void write_file_atomically(const std::filesystem::path &path, const std::string &contents)
    {
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + tmp.string());
            out << contents;
            out.flush();
            if (!out)
                throw std::runtime_error("short write to " + tmp.string());
        }
        std::filesystem::rename(tmp, path);
    }

} // namespace ospa
