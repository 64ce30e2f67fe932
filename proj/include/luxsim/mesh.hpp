// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "luxsim/vec3.hpp"

namespace luxsim {

using PatchId = std::size_t;
using Face = std::array<std::size_t, 3>;

/// Faces below this area are treated as degenerate.
inline constexpr double kMinFaceArea = 1e-12;

/// Triangle soup with shared vertices. Units are meters.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;

    double face_area(std::size_t f) const;
    Vec3 face_centroid(std::size_t f) const;
};

enum class PatchRole { surface, luminaire, sensor };

/// One triangular face with the per-patch quantities the radiosity model needs.
struct Patch {
    PatchId id = 0;
    Face face{};
    std::array<Vec3, 3> corners{};
    double area = 0;
    Vec3 normal;
    Vec3 centroid;
    double albedo = 0;
    double emission = 0;  // lm/m²
    PatchRole role = PatchRole::surface;
};

enum class NormalOrientation { inward, as_authored };

/// Pinhole camera with OpenCV conventions (x right, y down, z forward).
/// `pose` maps camera coordinates to world coordinates. Pixel (u, v) has its
/// center at image coordinate (u, v).
struct PinholeCamera {
    double fx = 1, fy = 1, cx = 0, cy = 0;
    RigidTransform pose;

    Vec3 backproject(double u, double v, double depth) const;

    struct Projection {
        double u, v, depth;
    };
    /// Image coordinates of a world point; nullopt when it lies behind the camera.
    std::optional<Projection> project(const Vec3& world) const;
};

/// Range image; depth in meters, 0 marks an invalid pixel.
struct DepthImage {
    int width = 0, height = 0;
    std::vector<double> depth;  // row-major
    PinholeCamera camera;

    double at(int x, int y) const { return depth[static_cast<std::size_t>(y) * width + x]; }
};

TriangleMesh parse_obj(std::istream& in);
TriangleMesh load_mesh(const std::filesystem::path& path);
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

/// One patch per face. Albedo is set to `albedo_default`, emission to zero and
/// role to surface; the scene loader fills in the rest.
std::vector<Patch> derive_patches(const TriangleMesh& mesh, double albedo_default,
                                  NormalOrientation orientation);

struct DepthMeshOptions {
    int median_radius = 1;
    double edge_threshold = 0.1;  // meters
    int smooth_iters = 0;
};

/// Median filter over valid (non-zero) pixels in a (2r+1)² window. Invalid
/// pixels stay invalid.
std::vector<double> median_filter(const DepthImage& depth, int radius);

/// Grid triangulation of a depth image: median denoise, back-project, two
/// triangles per fully valid cell, drop triangles with an edge longer than
/// `edge_threshold`, then uniform Laplacian smoothing with boundary vertices
/// held fixed.
TriangleMesh mesh_from_depth(const DepthImage& depth, const DepthMeshOptions& options);

}  // namespace luxsim
