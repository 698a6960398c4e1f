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

#include "ospa/touchstone.hpp"
#include "ospa/pattern_csv.hpp" // ParseError

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ospa
{
    namespace
    {
        std::string upper(std::string s)
        {
            std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
            return s;
        }

        bool to_double(const std::string &tok, double &x)
        {
            const char *first = tok.data();
            const char *last = tok.data() + tok.size();
            if (first != last && *first == '+')
                ++first;
            const auto [ptr, ec] = std::from_chars(first, last, x);
            return ec == std::errc() && ptr == last;
        }

        void put(std::ostream &os, double x)
        {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", x);
            os << buf;
        }
    } // namespace

    OnePortData parse_s1p(std::istream &is, const std::string &source_name)
    {
        double freq_scale = 1e9; // Touchstone default unit is GHz
        TouchstoneFormat format = TouchstoneFormat::ma;
        bool have_options = false;

        OnePortData out;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(is, line))
        {
            ++lineno;
            if (const auto bang = line.find('!'); bang != std::string::npos)
                line.erase(bang);

            std::istringstream ss(line);
            std::vector<std::string> tok;
            for (std::string t; ss >> t;)
                tok.push_back(t);
            if (tok.empty())
                continue;

            if (tok[0][0] == '#')
            {
                if (have_options)
                    throw ParseError(source_name, lineno, "duplicate option line");
                if (!out.freq_hz.empty())
                    throw ParseError(source_name, lineno, "option line after data");
                have_options = true;
                if (tok[0].size() > 1)
                    tok[0].erase(0, 1);
                else
                    tok.erase(tok.begin());
                for (std::size_t i = 0; i < tok.size(); ++i)
                {
                    const std::string t = upper(tok[i]);
                    if (t == "HZ")
                        freq_scale = 1.0;
                    else if (t == "KHZ")
                        freq_scale = 1e3;
                    else if (t == "MHZ")
                        freq_scale = 1e6;
                    else if (t == "GHZ")
                        freq_scale = 1e9;
                    else if (t == "S")
                        continue;
                    else if (t == "Y" || t == "Z" || t == "H" || t == "G")
                        throw ParseError(source_name, lineno, "only S-parameters are supported");
                    else if (t == "RI")
                        format = TouchstoneFormat::ri;
                    else if (t == "MA")
                        format = TouchstoneFormat::ma;
                    else if (t == "DB")
                        format = TouchstoneFormat::db;
                    else if (t == "R")
                    {
                        if (i + 1 >= tok.size() || !to_double(tok[i + 1], out.reference_ohm) || !(out.reference_ohm > 0.0))
                            throw ParseError(source_name, lineno, "R must be followed by a positive impedance");
                        ++i;
                    }
                    else
                        throw ParseError(source_name, lineno, "unknown option '" + tok[i] + "'");
                }
                continue;
            }

            if (tok.size() != 3)
                throw ParseError(source_name, lineno,
                                 "one-port data rows need 3 values, got " + std::to_string(tok.size()));
            double v[3];
            for (int i = 0; i < 3; ++i)
                if (!to_double(tok[i], v[i]))
                    throw ParseError(source_name, lineno, "not a number: '" + tok[i] + "'");

            const double f = v[0] * freq_scale;
            if (!(f >= 0.0))
                throw ParseError(source_name, lineno, "negative frequency");
            if (!out.freq_hz.empty() && !(f > out.freq_hz.back()))
                throw ParseError(source_name, lineno, "frequencies must be strictly increasing");

            cplx s;
            switch (format)
            {
            case TouchstoneFormat::ri:
                s = cplx(v[1], v[2]);
                break;
            case TouchstoneFormat::ma:
                s = std::polar(v[1], deg_to_rad(v[2]));
                break;
            case TouchstoneFormat::db:
                s = std::polar(std::pow(10.0, v[1] / 20.0), deg_to_rad(v[2]));
                break;
            }
            out.freq_hz.push_back(f);
            out.s11.push_back(s);
        }
        if (out.freq_hz.empty())
            throw ParseError(source_name, lineno, "no data rows");
        return out;
    }

    OnePortData read_s1p(const std::filesystem::path &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("cannot open Touchstone file " + path.string());
        return parse_s1p(in, path.string());
    }

    void write_s1p(std::ostream &os, const OnePortData &data, TouchstoneFormat format)
    {
        const char *tag = format == TouchstoneFormat::ri ? "RI" : format == TouchstoneFormat::ma ? "MA" : "DB";
        os << "# HZ S " << tag << " R ";
        put(os, data.reference_ohm);
        os << '\n';
        for (std::size_t i = 0; i < data.freq_hz.size(); ++i)
        {
            const cplx s = data.s11[i];
            double a = 0.0, b = 0.0;
            switch (format)
            {
            case TouchstoneFormat::ri:
                a = s.real();
                b = s.imag();
                break;
            case TouchstoneFormat::ma:
                a = std::abs(s);
                b = rad_to_deg(std::arg(s));
                break;
            case TouchstoneFormat::db:
                a = 20.0 * std::log10(std::abs(s));
                b = rad_to_deg(std::arg(s));
                break;
            }
            put(os, data.freq_hz[i]);
            os << ' ';
            put(os, a);
            os << ' ';
            put(os, b);
            os << '\n';
        }
    }

} // namespace ospa
