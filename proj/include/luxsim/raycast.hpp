// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "luxsim/mesh.hpp"

namespace luxsim {

/// Minimum accepted hit distance; together with source exclusion it keeps a
/// patch from hitting itself.
inline constexpr double kMinHitDistance = 1e-9;
/// Hits closer than this to the nearest one count as a tie; ties go to the
/// lowest patch id.
inline constexpr double kHitTieWindow = 1e-12;

struct RayHit {
    std::optional<PatchId> patch;
    double distance = std::numeric_limits<double>::infinity();
    double incidence_cosine = 0;  // |dir · n_hit|

    bool hit() const { return patch.has_value(); }
    bool operator==(const RayHit&) const = default;
};

/// Bounding volume hierarchy over patch triangles. Immutable after
/// construction, so concurrent queries are safe.
class AccelStructure {
public:
    AccelStructure(std::span<const Patch> patches, int leaf_size = 4);

    RayHit first_hit(const Vec3& origin, const Vec3& direction,
                     std::optional<PatchId> exclude = std::nullopt) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const;
    std::size_t triangle_count() const { return tris_.size(); }
    /// Every triangle id referenced by some leaf, in leaf order.
    std::vector<PatchId> reachable_ids() const;

private:
    struct Tri {
        Vec3 v0, v1, v2, normal;
        PatchId id;
    };
    struct Node {
        Vec3 lo, hi;
        std::uint32_t first = 0;  // leaf: first triangle; inner: right child
        std::uint32_t count = 0;  // 0 for inner nodes
    };

    std::uint32_t build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids);

    std::vector<Tri> tris_;
    std::vector<Node> nodes_;
    int leaf_size_;
};

AccelStructure build_accel(std::span<const Patch> patches, int leaf_size = 4);

/// Nearest hit with t > kMinHitDistance among patches other than `exclude`.
/// Triangles are double-sided; the test is the watertight algorithm of Woop,
/// Benthin and Wald. Throws ArgumentError for a non-unit direction.
RayHit first_hit(const AccelStructure& accel, const Vec3& origin, const Vec3& direction,
                 std::optional<PatchId> exclude = std::nullopt);

/// Linear scan over all patches with the same intersection and tie rules.
RayHit first_hit_brute_force(std::span<const Patch> patches, const Vec3& origin,
                             const Vec3& direction, std::optional<PatchId> exclude = std::nullopt);

/// Watertight ray/triangle distance, or nullopt on a miss.
std::optional<double> intersect_triangle(const Vec3& origin, const Vec3& direction, const Vec3& v0,
                                         const Vec3& v1, const Vec3& v2);

}  // namespace luxsim
