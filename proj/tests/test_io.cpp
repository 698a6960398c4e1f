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
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

using namespace ospa;

namespace
{
    void write_text(const std::filesystem::path &p, const std::string &text)
    {
        std::ofstream os(p, std::ios::binary);
        os << text;
    }

    std::size_t parse_error_line(const std::string &text, bool touchstone)
    {
        std::istringstream is(text);
        try
        {
            if (touchstone)
                parse_s1p(is, "x.s1p");
            else
                read_pattern_csv(is, "x.csv");
        }
        catch (const ParseError &e)
        {
            return e.line();
        }
        return 0;
    }
} // namespace

TEST_SUITE("io")
{
    TEST_CASE("pattern CSV round trip")
    {
        const AngleGrid grid{10.0, 0.5, 7};
        ScalarCut scalar{grid, {0.0, -1.25, -3.0e-7, 1.0 / 3.0, -120.0, 2.5, -0.1}};
        std::ostringstream os;
        write_pattern_csv(os, scalar);
        CHECK(os.str().rfind("theta_deg,value\n", 0) == 0);
        CHECK(os.str().find('\r') == std::string::npos);
        std::istringstream is(os.str());
        const auto back = std::get<ScalarCut>(read_pattern_csv(is));
        CHECK(back.grid == grid);
        CHECK(back.values == scalar.values);

        FieldCut field{grid, {}, {}};
        for (std::size_t i = 0; i < grid.count; ++i)
        {
            field.e_theta.emplace_back(std::sin(0.3 * static_cast<double>(i)), -1.0 / (1.0 + static_cast<double>(i)));
            field.e_phi.emplace_back(1e-9 * static_cast<double>(i), std::exp(-static_cast<double>(i)));
        }
        std::ostringstream fs;
        write_pattern_csv(fs, field);
        CHECK(fs.str().rfind("theta_deg,re_Etheta,im_Etheta,re_Ephi,im_Ephi\n", 0) == 0);
        std::istringstream fis(fs.str());
        const auto fback = std::get<FieldCut>(read_pattern_csv(fis));
        CHECK(fback.grid == grid);
        CHECK(fback.e_theta == field.e_theta);
        CHECK(fback.e_phi == field.e_phi);
    }

    TEST_CASE("pattern CSV errors carry the line number")
    {
        CHECK(parse_error_line("theta_deg,value\n0,1\n1,2\n0.5,3\n", false) == 4);
        CHECK(parse_error_line("theta_deg,value\n0,1\n1,2\n3,3\n", false) == 3);
        CHECK(parse_error_line("theta_deg,value\n0,1\n1,abc\n", false) == 3);
        CHECK(parse_error_line("theta_deg,value\n0,1\n1,2,3\n", false) == 3);
        CHECK(parse_error_line("angle,gain\n0,1\n", false) == 1);
        CHECK(parse_error_line("theta_deg,value\n", false) == 1);
        CHECK(parse_error_line("theta_deg,value\n0,1\n1,1\n", false) == 0);
    }

    TEST_CASE("Touchstone encodings agree")
    {
        const std::vector<double> f{26e9, 28e9, 30e9};
        const std::vector<cplx> s{{0.1, -0.2}, {-0.05, 0.01}, {0.3, 0.4}};
        std::ostringstream ri, ma, db;
        ri << "! synthetic\n# GHz S RI R 50\n";
        ma << "# GHz S MA R 50\n";
        db << "# GHz S DB R 50\n";
        for (std::size_t i = 0; i < f.size(); ++i)
        {
            const double deg = std::arg(s[i]) * 180.0 / pi;
            ri << f[i] / 1e9 << " " << s[i].real() << " " << s[i].imag() << "\n";
            ma << std::setprecision(12) << f[i] / 1e9 << " " << std::abs(s[i]) << " " << deg << "\n";
            db << std::setprecision(12) << f[i] / 1e9 << " " << 20.0 * std::log10(std::abs(s[i])) << " " << deg
               << "   ! trailing comment\n";
        }
        std::istringstream a(ri.str()), b(ma.str()), c(db.str());
        const auto x = parse_s1p(a), y = parse_s1p(b), z = parse_s1p(c);
        REQUIRE(x.s11.size() == 3);
        for (std::size_t i = 0; i < 3; ++i)
        {
            CHECK(x.freq_hz[i] == doctest::Approx(f[i]).epsilon(1e-15));
            CHECK(std::abs(x.s11[i] - s[i]) < 1e-15);
            CHECK(std::abs(y.s11[i] - x.s11[i]) < 1e-6);
            CHECK(std::abs(z.s11[i] - x.s11[i]) < 1e-6);
        }
    }

    TEST_CASE("Touchstone defaults and errors")
    {
        std::istringstream plain("1 0.5 0\n2 0.25 90\n");
        const auto d = parse_s1p(plain);
        CHECK(d.freq_hz[0] == 1e9);
        CHECK(std::abs(d.s11[1] - cplx{0.0, 0.25}) < 1e-15);
        CHECK(d.reference_ohm == 50.0);

        CHECK(parse_error_line("# GHz S RI R 50\n1 0.1 0.1\n2 0.1\n", true) == 3);
        CHECK(parse_error_line("# GHz S RI R 50\n2 0.1 0.1\n1 0.1 0.1\n", true) == 3);
        CHECK(parse_error_line("# GHz Y RI R 50\n1 0.1 0.1\n", true) == 1);
        CHECK(parse_error_line("# GHz S RI\n1 0.1 x\n", true) == 2);
        CHECK(parse_error_line("! only a comment\n", true) > 0);
    }

    TEST_CASE("Touchstone write and read back")
    {
        OnePortData d{{26e9, 26.5e9, 27e9}, {{0.1, -0.2}, {-0.5, 0.0}, {1e-4, 2e-4}}, 50.0};
        for (auto fmt : {TouchstoneFormat::ri, TouchstoneFormat::ma, TouchstoneFormat::db})
        {
            std::ostringstream os;
            write_s1p(os, d, fmt);
            std::istringstream is(os.str());
            const auto back = parse_s1p(is);
            REQUIRE(back.s11.size() == 3);
            for (std::size_t i = 0; i < 3; ++i)
            {
                CHECK(back.freq_hz[i] == d.freq_hz[i]);
                CHECK(std::abs(back.s11[i] - d.s11[i]) <= 1e-12 * std::abs(d.s11[i]));
            }
        }
    }

    TEST_CASE("external import")
    {
        test::TempDir dir;
        write_text(dir / "a.s1p", "# Hz S DB R 50\n26e9 -12 0\n28e9 -8 10\n30e9 -15 20\n");
        write_text(dir / "b.s1p", "# GHz S DB R 50\n26 -11 0\n28 -9 0\n30 -20 0\n");
        write_text(dir / "c.s1p", "# GHz S DB R 50\n26 -11 0\n28.5 -9 0\n30 -20 0\n");

        SUBCASE("three rows give three frequencies")
        {
            const std::vector<ElementFiles> one{{dir / "a.s1p", {}}};
            const auto r = import_external(one, FieldComponent::phi);
            CHECK(r.freq_hz.size() == 3);
            REQUIRE(r.element_count() == 1);
            CHECK(r.s_nn_db[0][1] == doctest::Approx(-8.0).epsilon(1e-12));
            CHECK_FALSE(r.has_patterns());
        }

        SUBCASE("disagreeing grids")
        {
            const std::vector<ElementFiles> two{{dir / "a.s1p", {}}, {dir / "c.s1p", {}}};
            CHECK_THROWS_WITH(import_external(two, FieldComponent::phi), doctest::Contains("disagrees"));
        }

        SUBCASE("malformed pattern file names its line")
        {
            write_text(dir / "bad.csv", "theta_deg,value\n0,0\n1,-1\n0.5,-2\n");
            const std::vector<ElementFiles> e{
                {dir / "a.s1p", {dir / "bad.csv", dir / "bad.csv", dir / "bad.csv"}}};
            CHECK_THROWS_WITH(import_external(e, FieldComponent::phi), doctest::Contains("bad.csv:4"));
        }

        SUBCASE("scalar patterns map onto the co-polar component")
        {
            write_text(dir / "p.csv", "theta_deg,value\n0,-20\n90,0\n180,-6\n");
            const std::vector<ElementFiles> e{{dir / "a.s1p", {dir / "p.csv", dir / "p.csv", dir / "p.csv"}},
                                              {dir / "b.s1p", {dir / "p.csv", dir / "p.csv", dir / "p.csv"}}};
            const auto r = import_external(e, FieldComponent::theta);
            REQUIRE(r.has_patterns());
            const FieldCut &cut = r.patterns[1][2];
            CHECK(std::abs(cut.e_theta[0]) == doctest::Approx(0.1).epsilon(1e-12));
            CHECK(std::abs(cut.e_theta[1]) == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::abs(cut.e_phi[2]) == 0.0);

            const FileEvaluator ev(r);
            const std::vector<double> f{28e9};
            const auto sub = ev.evaluate(DesignVector{}, f);
            CHECK(sub.s_nn_db[1][0] == doctest::Approx(-9.0).epsilon(1e-12));
            const std::vector<double> missing{27e9};
            CHECK_THROWS_AS(ev.evaluate(DesignVector{}, missing), std::out_of_range);
        }

        SUBCASE("missing file")
        {
            const std::vector<ElementFiles> e{{dir / "nope.s1p", {}}};
            CHECK_THROWS(import_external(e, FieldComponent::phi));
        }
    }

    TEST_CASE("atomic write replaces the file")
    {
        test::TempDir dir;
        const auto p = dir / "out.txt";
        write_file_atomically(p, "first");
        write_file_atomically(p, "second");
        std::ifstream is(p);
        std::string s;
        std::getline(is, s);
        CHECK(s == "second");
        std::size_t files = 0;
        for ([[maybe_unused]] const auto &e : std::filesystem::directory_iterator(dir.path()))
            ++files;
        CHECK(files == 1);
    }
}
