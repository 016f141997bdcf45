#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ewenspoly/parse.hpp"
#include "ewenspoly/portrait.hpp"

using namespace ewenspoly;

TEST_CASE("complex literals parse") {
    REQUIRE(parse_complex("0.5") == cdouble(0.5, 0.0));
    REQUIRE(parse_complex("-0.3") == cdouble(-0.3, 0.0));
    REQUIRE(parse_complex("0.3+0.4i") == cdouble(0.3, 0.4));
    REQUIRE(parse_complex("0.3-0.4i") == cdouble(0.3, -0.4));
    REQUIRE(parse_complex("0.7i") == cdouble(0.0, 0.7));
    REQUIRE(parse_complex("-0.7i") == cdouble(0.0, -0.7));
    REQUIRE(parse_complex("i") == cdouble(0.0, 1.0));
    REQUIRE(parse_complex("-i") == cdouble(0.0, -1.0));
    REQUIRE(parse_complex("2") == cdouble(2.0, 0.0));
    REQUIRE(parse_complex("0.25+i") == cdouble(0.25, 1.0));
}

TEST_CASE("bad complex literals are rejected") {
    for (const char* s : {"", "abc", "1+2", "1+", "i5", "1+2i+3i", "0.5 ", "1e-3", "++1", "1+-2i"}) {
        INFO(s);
        REQUIRE_THROWS_AS(parse_complex(s), std::invalid_argument);
    }
}

TEST_CASE("phase colors hit the primary hues") {
    auto red = phase_color(cdouble(1.0, 0.0));
    REQUIRE(static_cast<int>(red.r) == 255);
    REQUIRE(static_cast<int>(red.g) == 0);
    REQUIRE(static_cast<int>(red.b) == 0);
    auto green = phase_color(std::exp(cdouble(0.0, 2.0 * M_PI / 3.0)));
    REQUIRE(static_cast<int>(green.g) == 255);
    REQUIRE(static_cast<int>(green.r) == 0);
    auto blue = phase_color(std::exp(cdouble(0.0, -2.0 * M_PI / 3.0)));
    REQUIRE(static_cast<int>(blue.b) == 255);
    REQUIRE(static_cast<int>(blue.g) == 0);
}

TEST_CASE("grid evaluation masks the outside and matches the map") {
    std::vector<std::pair<std::int64_t, std::int64_t>> factors = {{1, 1}};  // p(z) = 1 - z
    const std::int64_t grid = 32;
    auto values = evaluate_grid(grid, 1, factors);
    REQUIRE(values.size() == static_cast<std::size_t>(grid * grid));
    // corners lie outside the disk
    REQUIRE(std::isnan(values[0].real()));
    REQUIRE(std::isnan(values[static_cast<std::size_t>(grid - 1)].real()));
    REQUIRE(std::isnan(values.back().real()));
    // an interior pixel carries 1 - z exactly
    std::int64_t i = grid / 2, j = grid / 3;
    double step = 2.0 * kGridExtent / static_cast<double>(grid - 1);
    cdouble z(-kGridExtent + step * static_cast<double>(j), kGridExtent - step * static_cast<double>(i));
    cdouble expect = cdouble(1.0, 0.0) - z;
    REQUIRE(std::abs(values[static_cast<std::size_t>(i * grid + j)] - expect) < 1e-12);
    REQUIRE_THROWS_AS(evaluate_grid(15, 1, factors), std::domain_error);
}

TEST_CASE("grid evaluation is thread count invariant") {
    std::vector<std::pair<std::int64_t, std::int64_t>> factors = {{1, 2}, {3, 1}, {7, 4}};
    auto a = evaluate_grid(48, 1, factors);
    auto b = evaluate_grid(48, 4, factors);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isnan(a[i].real())) {
            REQUIRE(std::isnan(b[i].real()));
        } else {
            REQUIRE(a[i] == b[i]);
        }
    }
}

TEST_CASE("colorize blacks out masked pixels") {
    std::vector<cdouble> vals = {cdouble(1.0, 0.0), cdouble(std::nan(""), std::nan(""))};
    auto bytes = colorize(vals);
    REQUIRE(bytes.size() == 6);
    REQUIRE(static_cast<int>(bytes[0]) == 255);
    REQUIRE(static_cast<int>(bytes[3]) == 0);
    REQUIRE(static_cast<int>(bytes[4]) == 0);
    REQUIRE(static_cast<int>(bytes[5]) == 0);
}

TEST_CASE("ppm files carry the right header and payload") {
    const std::int64_t grid = 16;
    std::vector<std::pair<std::int64_t, std::int64_t>> factors = {{2, 1}};
    auto bytes = colorize(evaluate_grid(grid, 1, factors));
    const std::string path = "test_portrait_tmp.ppm";
    write_ppm(path, grid, bytes);
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::string magic;
    std::int64_t w = 0, h = 0, maxval = 0;
    in >> magic >> w >> h >> maxval;
    REQUIRE(magic == "P6");
    REQUIRE(w == grid);
    REQUIRE(h == grid);
    REQUIRE(maxval == 255);
    in.get();  // single whitespace after the header
    std::vector<char> payload(static_cast<std::size_t>(grid * grid * 3));
    in.read(payload.data(), static_cast<std::streamsize>(payload.size()));
    REQUIRE(in.gcount() == static_cast<std::streamsize>(payload.size()));
    in.get();
    REQUIRE(in.eof());
    std::remove(path.c_str());
    REQUIRE_THROWS_AS(write_ppm("x.ppm", grid, std::vector<std::uint8_t>(5)), std::invalid_argument);
}

TEST_CASE("csv grids have a header and one row per pixel") {
    const std::int64_t grid = 16;
    std::vector<std::pair<std::int64_t, std::int64_t>> factors = {{1, 1}};
    auto values = evaluate_grid(grid, 1, factors);
    const std::string path = "test_portrait_tmp.csv";
    write_grid_csv(path, grid, values);
    std::ifstream in(path);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "x,y,re,im");
    std::int64_t rows = 0;
    bool saw_nan = false;
    while (std::getline(in, line)) {
        ++rows;
        if (line.find("nan") != std::string::npos) saw_nan = true;
    }
    REQUIRE(rows == grid * grid);
    REQUIRE(saw_nan);  // corners are masked
    std::remove(path.c_str());
}
