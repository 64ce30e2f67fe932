// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "luxsim/vec3.hpp"

namespace luxsim {

enum class SamplerMethod { isocell, monte_carlo };

std::string to_string(SamplerMethod m);
/// Accepts "isocell", "mc" and "monte-carlo".
SamplerMethod parse_sampler_method(const std::string& s);

struct DiscPoint {
    double x = 0, y = 0;
    bool operator==(const DiscPoint&) const = default;
};

/// Cosine-weighted hemisphere directions in a local frame where +z is the
/// patch normal. Each direction is the Malley lift (x, y, sqrt(1 - x² - y²))
/// of the matching unit-disc point.
struct DirectionSet {
    SamplerMethod method = SamplerMethod::isocell;
    std::uint64_t seed = 0;            // Monte Carlo only
    int rings = 0;                     // Isocell only
    std::vector<Vec3> directions;
    std::vector<DiscPoint> disc_points;
    std::vector<double> cell_areas;    // Isocell only; disc area of each cell

    std::size_t count() const { return directions.size(); }
    bool operator==(const DirectionSet&) const = default;
};

/// Cells in the innermost Isocell ring.
inline constexpr int kIsocellBaseCells = 3;

/// Smallest ring count R with 3·R² >= target_count.
int isocell_ring_count(std::size_t target_count);

/// Equal-area Isocell partition of the unit disc: R rings of width 1/R, ring j
/// (1-based) split into 3(2j-1) equal sectors, one sample at each cell's area
/// centroid. The realized count is 3·R², which may exceed the target.
DirectionSet isocell_directions(std::size_t target_count);

/// `count` uniform disc samples (r = sqrt(u1), phi = 2·pi·u2) drawn from
/// std::mt19937_64; each 64-bit draw becomes a double as (x >> 11) · 2^-53.
DirectionSet monte_carlo_directions(std::size_t count, std::uint64_t seed);

/// Rotates local directions into the frame whose z axis is `normal`, using
/// the branchless orthonormal basis of Duff et al. (a revision of Frisvad's).
std::vector<Vec3> to_world_frame(const DirectionSet& set, const Vec3& normal);

struct SamplerConfig {
    SamplerMethod method = SamplerMethod::isocell;
    std::size_t rays = 1000;
    std::uint64_t seed = 0;
};

/// Per-patch Monte Carlo seed: splitmix64(seed ^ splitmix64(patch)). Keeps
/// every row independent of evaluation order.
std::uint64_t patch_seed(std::uint64_t seed, std::size_t patch);

/// The direction set a given patch casts with. Isocell ignores `patch`.
DirectionSet directions_for_patch(const SamplerConfig& config, std::size_t patch);

/// Ray count the configuration actually produces.
std::size_t realized_ray_count(const SamplerConfig& config);

}  // namespace luxsim
