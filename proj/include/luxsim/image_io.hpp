// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "luxsim/mesh.hpp"

namespace luxsim {

/// Single-channel image with floating point samples, row-major.
struct GrayImage {
    int width = 0, height = 0;
    std::vector<double> pixels;

    double at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Reads binary PGM (P5). Samples are returned as raw integer values.
GrayImage read_pgm(const std::filesystem::path& path);
/// Writes a 16-bit binary PGM; values are rounded and clamped to [0, 65535].
void write_pgm16(const GrayImage& image, const std::filesystem::path& path);

/// Portable float map, single channel ("Pf"). Rows are stored top to bottom
/// in memory and bottom to top on disk, as the format requires.
GrayImage read_pfm(const std::filesystem::path& path);
void write_pfm(const GrayImage& image, const std::filesystem::path& path);

/// Picks PFM or PGM by extension (".pfm" → float map, anything else → PGM).
GrayImage read_gray(const std::filesystem::path& path);

struct RgbImage {
    int width = 0, height = 0;
    std::vector<std::uint8_t> rgb;  // 3 bytes per pixel, row-major
};
void write_ppm(const RgbImage& image, const std::filesystem::path& path);

/// Camera sidecar JSON: {"fx", "fy", "cx", "cy", optional "pose": 4x4
/// row-major camera→world, optional "depth_scale" (meters per unit, default
/// 0.001)}.
PinholeCamera read_camera_json(const std::filesystem::path& path, double* depth_scale = nullptr);
void write_camera_json(const PinholeCamera& camera, const std::filesystem::path& path,
                       double depth_scale = 0.001);

/// 16-bit depth PGM in millimeters plus its JSON sidecar.
DepthImage load_depth(const std::filesystem::path& pgm, const std::filesystem::path& sidecar);

}  // namespace luxsim
