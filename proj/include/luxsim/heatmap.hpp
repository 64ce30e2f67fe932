// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "luxsim/image_io.hpp"
#include "luxsim/mesh.hpp"

namespace luxsim {

/// Reads the `patch_id` and `illuminance_lux` columns of a solution CSV into
/// a vector indexed by patch id. Throws FormatError on an empty or malformed
/// file.
std::vector<double> read_illuminance_csv(const std::filesystem::path& path);

using Rgb = std::array<std::uint8_t, 3>;

/// Piecewise-linear ramp through five stops at t = 0, .25, .5, .75, 1:
/// dark violet, blue, green, amber, red. t is clamped to [0, 1].
Rgb lux_color(double t);

struct HeatmapOptions {
    int width = 800;  // pixels; height follows the aspect ratio
    std::optional<std::pair<double, double>> scale;  // lux bounds; default min/max of drawn patches
};

/// Top-down orthographic view (looking along -z) of patches whose normal has
/// a positive z component. Higher patches are drawn over lower ones; pixel
/// centers use the top-left fill rule. Background is black.
RgbImage render_heatmap(std::span<const Patch> patches, std::span<const double> lux, const HeatmapOptions& options);

}  // namespace luxsim
