#ifndef EWENSPOLY_PORTRAIT_HPP
#define EWENSPOLY_PORTRAIT_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ewenspoly/numeric.hpp"
#include "ewenspoly/stats.hpp"

namespace ewenspoly {

// The rendered square covers [-kGridExtent, kGridExtent]^2; points at or
// beyond that modulus are masked.
inline constexpr double kGridExtent = 0.98;

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
};

// Classic phase coloring: hue from the argument, full saturation and value.
// h is taken in turns ([0,1), red at 0).
inline Rgb hsv_to_rgb(double h, double s, double v) {
    double hh = (h - std::floor(h)) * 6.0;
    int sector = static_cast<int>(hh);
    double f = hh - sector;
    double p = v * (1.0 - s);
    double q = v * (1.0 - s * f);
    double t = v * (1.0 - s * (1.0 - f));
    double r, g, b;
    switch (sector % 6) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        default: r = v; g = p; b = q; break;
    }
    auto to_byte = [](double x) { return static_cast<std::uint8_t>(std::lround(x * 255.0)); };
    return {to_byte(r), to_byte(g), to_byte(b)};
}

inline Rgb phase_color(cdouble v) {
    double a = std::arg(v);
    if (a < 0.0) a += 2.0 * M_PI;
    return hsv_to_rgb(a / (2.0 * M_PI), 1.0, 1.0);
}

// Pixel (row i, col j) of a grid x grid image maps to
//   x = -E + 2E j/(grid-1),  y = E - 2E i/(grid-1),
// so row 0 is the top of the square. Masked points become NaN.
inline std::vector<cdouble> evaluate_grid(std::int64_t grid, unsigned threads,
                                          const std::vector<std::pair<std::int64_t, std::int64_t>>& factors) {
    if (grid < 16) throw std::domain_error("evaluate_grid: need grid >= 16");
    std::vector<cdouble> out(static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid));
    double total_mult = 0.0;
    for (const auto& [k, c] : factors) total_mult += static_cast<double>(c);
    const double nan = std::nan("");
    for_each_replica(grid * grid, threads, [&](std::int64_t idx) {
        std::int64_t i = idx / grid;
        std::int64_t j = idx % grid;
        double step = 2.0 * kGridExtent / static_cast<double>(grid - 1);
        double x = -kGridExtent + step * static_cast<double>(j);
        double y = kGridExtent - step * static_cast<double>(i);
        cdouble z(x, y);
        double az = std::abs(z);
        if (az >= kGridExtent) {
            out[static_cast<std::size_t>(idx)] = cdouble(nan, nan);
            return;
        }
        // Factors are sorted by k; once the bound on everything that can
        // still contribute to the log drops below 1e-13 the rest is skipped.
        cdouble acc(0.0, 0.0);
        cdouble zk(1.0, 0.0);
        std::int64_t k_prev = 0;
        const double cutoff = 1e-13 * (1.0 - az);
        for (const auto& [k, c] : factors) {
            if (total_mult * std::pow(az, static_cast<double>(k_prev)) < cutoff) break;
            zk *= cpow_int(z, k - k_prev);
            k_prev = k;
            acc += static_cast<double>(c) * std::log(cdouble(1.0, 0.0) - zk);
        }
        out[static_cast<std::size_t>(idx)] = std::exp(acc);
    });
    return out;
}

inline std::vector<std::uint8_t> colorize(const std::vector<cdouble>& values) {
    std::vector<std::uint8_t> bytes(values.size() * 3, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        cdouble v = values[i];
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) continue;  // stays black
        Rgb c = phase_color(v);
        bytes[3 * i] = c.r;
        bytes[3 * i + 1] = c.g;
        bytes[3 * i + 2] = c.b;
    }
    return bytes;
}

inline void write_ppm(const std::string& path, std::int64_t grid, const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() != static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid) * 3) {
        throw std::invalid_argument("write_ppm: payload does not match grid");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_ppm: cannot open '" + path + "'");
    os << "P6\n" << grid << " " << grid << "\n255\n";
    os.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!os) throw std::runtime_error("write_ppm: write failed for '" + path + "'");
}

inline void write_grid_csv(const std::string& path, std::int64_t grid, const std::vector<cdouble>& values) {
    if (values.size() != static_cast<std::size_t>(grid) * static_cast<std::size_t>(grid)) {
        throw std::invalid_argument("write_grid_csv: payload does not match grid");
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_grid_csv: cannot open '" + path + "'");
    os << "x,y,re,im\n";
    char buf[128];
    double step = 2.0 * kGridExtent / static_cast<double>(grid - 1);
    for (std::int64_t i = 0; i < grid; ++i) {
        for (std::int64_t j = 0; j < grid; ++j) {
            double x = -kGridExtent + step * static_cast<double>(j);
            double y = kGridExtent - step * static_cast<double>(i);
            cdouble v = values[static_cast<std::size_t>(i * grid + j)];
            std::snprintf(buf, sizeof(buf), "%.6f,%.6f,%.17g,%.17g\n", x, y, v.real(), v.imag());
            os << buf;
        }
    }
    if (!os) throw std::runtime_error("write_grid_csv: write failed for '" + path + "'");
}

}  // namespace ewenspoly

#endif
