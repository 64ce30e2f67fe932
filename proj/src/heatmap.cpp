// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/heatmap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "luxsim/error.hpp"

namespace luxsim {

std::vector<double> read_illuminance_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty illuminance CSV " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        for (std::string col; std::getline(hs, col, ',');) header.push_back(col);
    }
    const auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw FormatError(path.string() + ": missing column '" + name + "'", 1);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t id_col = column("patch_id");
    const std::size_t lux_col = column("illuminance_lux");

    std::vector<double> lux;
    std::vector<bool> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string c; std::getline(ls, c, ',');) cells.push_back(c);
        if (cells.size() != header.size()) throw FormatError(path.string() + ": wrong column count", line_no);
        std::size_t id = 0;
        double value = 0;
        try {
            std::size_t used = 0;
            const long long raw = std::stoll(cells[id_col], &used);
            if (raw < 0 || used != cells[id_col].size()) throw std::invalid_argument("id");
            id = static_cast<std::size_t>(raw);
            value = std::stod(cells[lux_col], &used);
            if (used != cells[lux_col].size()) throw std::invalid_argument("lux");
        } catch (const std::exception&) {
            throw FormatError(path.string() + ": bad number", line_no);
        }
        if (id >= lux.size()) {
            lux.resize(id + 1, 0.0);
            seen.resize(id + 1, false);
        }
        if (seen[id]) throw FormatError(path.string() + ": duplicate patch " + std::to_string(id), line_no);
        seen[id] = true;
        lux[id] = value;
    }
    if (lux.empty()) throw FormatError("illuminance CSV has no rows: " + path.string());
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw FormatError(path.string() + ": patch ids are not contiguous");
    return lux;
}

Rgb lux_color(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {48, 18, 59}, {40, 120, 230}, {40, 200, 120}, {250, 200, 40}, {200, 30, 20}}};
    if (!(t > 0)) t = 0;  // also catches NaN
    if (t > 1) t = 1;
    const double x = t * 4;
    const int k = std::min(3, static_cast<int>(x));
    const double f = x - k;
    Rgb c{};
    for (int ch = 0; ch < 3; ++ch)
        c[ch] = static_cast<std::uint8_t>(std::lround(stops[k][ch] + f * (stops[k + 1][ch] - stops[k][ch])));
    return c;
}

namespace {

// Top-left rule for a counter-clockwise triangle in image space (y down).
bool owns_edge(double ex, double ey) { return (ey == 0 && ex > 0) || ey < 0; }

}  // namespace

RgbImage render_heatmap(std::span<const Patch> patches, std::span<const double> lux, const HeatmapOptions& options) {
    if (lux.size() != patches.size())
        throw ArgumentError("illuminance has " + std::to_string(lux.size()) + " entries for " +
                            std::to_string(patches.size()) + " patches");
    if (options.width < 1) throw ArgumentError("heatmap width must be >= 1");

    std::vector<std::size_t> drawn;
    for (std::size_t i = 0; i < patches.size(); ++i)
        if (patches[i].normal.z > 0) drawn.push_back(i);
    if (drawn.empty()) throw ArgumentError("no upward-facing patches to draw");
    std::stable_sort(drawn.begin(), drawn.end(), [&](std::size_t a, std::size_t b) {
        return patches[a].centroid.z < patches[b].centroid.z;
    });

    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i : drawn) {
        for (const Vec3& c : patches[i].corners) {
            x0 = std::min(x0, c.x), x1 = std::max(x1, c.x);
            y0 = std::min(y0, c.y), y1 = std::max(y1, c.y);
        }
        lo = std::min(lo, lux[i]), hi = std::max(hi, lux[i]);
    }
    if (options.scale) std::tie(lo, hi) = *options.scale;

    const double extent = std::max(x1 - x0, 1e-12);
    const double px_per_m = options.width / extent;
    RgbImage img;
    img.width = options.width;
    img.height = std::max(1, static_cast<int>(std::ceil((y1 - y0) * px_per_m)));
    img.rgb.assign(static_cast<std::size_t>(img.width) * img.height * 3, 0);

    for (std::size_t i : drawn) {
        const Rgb color = lux_color(hi > lo ? (lux[i] - lo) / (hi - lo) : 0.5);
        std::array<double, 3> u{}, v{};
        for (int k = 0; k < 3; ++k) {
            u[k] = (patches[i].corners[k].x - x0) * px_per_m;
            v[k] = (y1 - patches[i].corners[k].y) * px_per_m;
        }
        double area = (u[1] - u[0]) * (v[2] - v[0]) - (u[2] - u[0]) * (v[1] - v[0]);
        if (area == 0) continue;
        if (area < 0) {
            std::swap(u[1], u[2]);
            std::swap(v[1], v[2]);
        }
        const int px0 = std::max(0, static_cast<int>(std::floor(*std::min_element(u.begin(), u.end()))));
        const int px1 = std::min(img.width - 1, static_cast<int>(std::ceil(*std::max_element(u.begin(), u.end()))));
        const int py0 = std::max(0, static_cast<int>(std::floor(*std::min_element(v.begin(), v.end()))));
        const int py1 = std::min(img.height - 1, static_cast<int>(std::ceil(*std::max_element(v.begin(), v.end()))));
        for (int py = py0; py <= py1; ++py)
            for (int px = px0; px <= px1; ++px) {
                const double cx = px + 0.5, cy = py + 0.5;
                bool inside = true;
                for (int k = 0; k < 3 && inside; ++k) {
                    const int k1 = (k + 1) % 3;
                    const double ex = u[k1] - u[k], ey = v[k1] - v[k];
                    // Positive for points to the left of the edge in y-down space,
                    // the interior side of a counter-clockwise triangle.
                    const double w = ex * (cy - v[k]) - ey * (cx - u[k]);
                    inside = w > 0 || (w == 0 && owns_edge(ex, ey));
                }
                if (!inside) continue;
                std::uint8_t* p = &img.rgb[(static_cast<std::size_t>(py) * img.width + px) * 3];
                std::copy(color.begin(), color.end(), p);
            }
    }
    return img;
}

}  // namespace luxsim
