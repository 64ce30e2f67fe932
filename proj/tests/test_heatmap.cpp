// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "luxsim/error.hpp"
#include "luxsim/heatmap.hpp"
#include "oracles.hpp"

using namespace luxsim;

namespace {

std::set<Rgb> colors(const RgbImage& img, bool skip_black = true) {
    std::set<Rgb> out;
    for (std::size_t i = 0; i < img.rgb.size(); i += 3) {
        const Rgb c{img.rgb[i], img.rgb[i + 1], img.rgb[i + 2]};
        if (skip_black && c == Rgb{0, 0, 0}) continue;
        out.insert(c);
    }
    return out;
}

std::vector<Patch> floor_grid(int nx, int ny) {
    TriangleMesh m;
    for (int y = 0; y <= ny; ++y)
        for (int x = 0; x <= nx; ++x) m.vertices.push_back({double(x), double(y), 0});
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            const std::size_t a = y * (nx + 1) + x, b = a + 1, c = a + nx + 1, d = c + 1;
            m.faces.push_back({a, b, d});
            m.faces.push_back({a, d, c});
        }
    return derive_patches(m, 0.5, NormalOrientation::as_authored);
}

}  // namespace

TEST(Ramp, Stops) {
    EXPECT_EQ(lux_color(0), (Rgb{48, 18, 59}));
    EXPECT_EQ(lux_color(0.5), (Rgb{40, 200, 120}));
    EXPECT_EQ(lux_color(1), (Rgb{200, 30, 20}));
    EXPECT_EQ(lux_color(-3), lux_color(0));
    EXPECT_EQ(lux_color(7), lux_color(1));
    EXPECT_EQ(lux_color(0.125), (Rgb{44, 69, 145}));
}

TEST(Heatmap, UniformSceneSingleColor) {
    const auto p = floor_grid(4, 3);
    const RgbImage img = render_heatmap(p, std::vector<double>(p.size(), 120.0), {64, {}});
    EXPECT_EQ(img.width, 64);
    EXPECT_EQ(img.height, 48);
    EXPECT_EQ(colors(img).size(), 1u);
    // A filled grid has no gaps along shared edges.
    EXPECT_EQ(colors(img, false).size(), 1u);
}

TEST(Heatmap, TwoLevelsTwoColors) {
    const auto p = floor_grid(4, 4);
    std::vector<double> lux(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) lux[i] = p[i].centroid.x < 2 ? 100 : 400;
    EXPECT_EQ(colors(render_heatmap(p, lux, {50, {}})).size(), 2u);
}

TEST(Heatmap, FixedScaleIsComparable) {
    const auto p = floor_grid(2, 2);
    const HeatmapOptions opt{20, std::make_pair(0.0, 500.0)};
    const RgbImage a = render_heatmap(p, std::vector<double>(p.size(), 250.0), opt);
    std::vector<double> lux(p.size(), 250.0);
    lux[0] = 500;
    const RgbImage b = render_heatmap(p, lux, opt);
    EXPECT_TRUE(colors(a).count(lux_color(0.5)));
    EXPECT_TRUE(colors(b).count(lux_color(0.5)));
    EXPECT_TRUE(colors(b).count(lux_color(1.0)));
}

TEST(Heatmap, OnlyUpwardPatchesDrawn) {
    auto p = derive_patches(oracle::unit_cube(), 0.5, NormalOrientation::inward);
    std::vector<double> lux(12, 0.0);
    lux[0] = lux[1] = 10;  // floor faces up
    const RgbImage img = render_heatmap(p, lux, {10, std::make_pair(0.0, 10.0)});
    EXPECT_EQ(colors(img), (std::set<Rgb>{lux_color(1.0)}));
}

TEST(Heatmap, CsvReading) {
    const auto path = std::filesystem::temp_directory_path() / "luxsim_heat.csv";
    std::ofstream(path) << "patch_id,area_m2,radiosity,irradiance_lux,illuminance_lux\n1,0.5,3,4,5.5\n0,0.5,1,2,2.5\n";
    EXPECT_EQ(read_illuminance_csv(path), (std::vector<double>{2.5, 5.5}));
    std::ofstream(path) << "";
    EXPECT_THROW(read_illuminance_csv(path), FormatError);
    std::ofstream(path) << "patch_id,area_m2,radiosity,irradiance_lux,illuminance_lux\n";
    EXPECT_THROW(read_illuminance_csv(path), FormatError);
    std::ofstream(path) << "patch_id,illuminance_lux\n0,1\n2,1\n";
    EXPECT_THROW(read_illuminance_csv(path), FormatError);
    std::filesystem::remove(path);
}
