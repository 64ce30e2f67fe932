// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "luxsim/image_io.hpp"
#include "luxsim/mesh.hpp"

namespace luxsim {

/// A frame in which exactly one luminaire is on.
struct LightImage {
    GrayImage intensity;
    Vec3 light_position;  // world, meters
    double light_flux = 0;  // lumens
};

struct AlbedoMap {
    int width = 0, height = 0;
    std::vector<double> rho;           // row-major, in [0, 1]
    std::vector<std::uint8_t> valid;   // 1 where rho is meaningful

    double at(int x, int y) const { return rho[static_cast<std::size_t>(y) * width + x]; }
    bool is_valid(int x, int y) const { return valid[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Per-pixel surface sample; `valid` is false where depth was missing.
struct PixelGeometry {
    int width = 0, height = 0;
    std::vector<Vec3> positions;
    std::vector<Vec3> normals;  // unit, facing the camera; zero where invalid
};

/// Back-projects every valid depth pixel and estimates its normal from the
/// cross product of neighboring positions (central differences, one-sided at
/// borders), flipped toward the camera.
PixelGeometry pixel_geometry(const DepthImage& depth);

/// Shading basis ambient + max(n · l, 0) · flux / (4π d²) of a point light at
/// distance d in direction l.
double shading_basis(const Vec3& normal, const Vec3& position, const Vec3& light_position, double light_flux,
                     double ambient);

/// Renders rho · basis for one light; pixels with a zero normal get 0.
GrayImage render_shading(std::span<const double> rho, const PixelGeometry& geom, const Vec3& light_position,
                         double light_flux, double ambient);

/// Per-pixel one-unknown least squares rho = Σ_m I_m b_m / Σ_m b_m², clamped
/// to [0, 1]. Pixels with Σ b² < 1e-12 or no normal are invalid. With
/// ambient = 0, scaling every intensity and flux by one constant leaves the
/// result unchanged. Throws ArgumentError on dimension mismatch.
AlbedoMap estimate_albedo(std::span<const LightImage> images, const PixelGeometry& geom, double ambient);

struct PatchAlbedo {
    std::vector<double> rho;
    std::vector<PatchId> uncovered;  // patches that fell back to the default
};

/// Mean of valid albedo pixels whose centers fall inside each projected
/// patch (top-left fill rule, so a pixel on a shared edge counts once).
/// Patches with no covered pixel, or with a vertex behind the camera, get
/// `default_rho` and are listed in `uncovered`.
PatchAlbedo map_albedo_to_patches(const AlbedoMap& albedo, std::span<const Patch> patches,
                                  const PinholeCamera& camera, double default_rho);

/// Writes `<stem>.pfm` (float rho), `<stem>.pgm` (rho · 65535) and
/// `<stem>_mask.pgm` (65535 where valid).
void save_albedo_map(const AlbedoMap& map, const std::filesystem::path& stem);
/// Reads an albedo image (.pfm or 16-bit .pgm scaled by 1/65535) and an
/// optional mask (non-zero = valid).
AlbedoMap load_albedo_map(const std::filesystem::path& image, const std::filesystem::path& mask = {});

}  // namespace luxsim
