// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "luxsim/error.hpp"
#include "luxsim/raycast.hpp"
#include "luxsim/sampling.hpp"
#include "oracles.hpp"

using namespace luxsim;

namespace {

std::vector<Patch> soup(const std::vector<std::array<Vec3, 3>>& tris) {
    TriangleMesh m;
    for (const auto& t : tris) {
        const std::size_t b = m.vertices.size();
        m.vertices.insert(m.vertices.end(), t.begin(), t.end());
        m.faces.push_back({b, b + 1, b + 2});
    }
    return derive_patches(m, 0.5, NormalOrientation::as_authored);
}

std::vector<Patch> random_scene(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> pos(-10, 10), off(-0.6, 0.6);
    std::vector<std::array<Vec3, 3>> tris;
    while (tris.size() < count) {
        const Vec3 c{pos(rng), pos(rng), pos(rng)};
        const std::array<Vec3, 3> t{c + Vec3{off(rng), off(rng), off(rng)}, c + Vec3{off(rng), off(rng), off(rng)},
                                    c + Vec3{off(rng), off(rng), off(rng)}};
        if (length(cross(t[1] - t[0], t[2] - t[0])) > 1e-3) tris.push_back(t);
    }
    return soup(tris);
}

}  // namespace

TEST(Triangle, HitDistance) {
    const auto t = intersect_triangle({0.2, 0.2, -1}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    ASSERT_TRUE(t);
    EXPECT_DOUBLE_EQ(*t, 1.0);
}

TEST(Triangle, DoubleSided) {
    EXPECT_TRUE(intersect_triangle({0.2, 0.2, 1}, {0, 0, -1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
    EXPECT_TRUE(intersect_triangle({0.2, 0.2, 1}, {0, 0, -1}, {0, 0, 0}, {0, 1, 0}, {1, 0, 0}));
}

TEST(Triangle, MissesAndBehind) {
    EXPECT_FALSE(intersect_triangle({2, 2, -1}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
    EXPECT_FALSE(intersect_triangle({0.2, 0.2, 1}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
    // Parallel to the plane.
    EXPECT_FALSE(intersect_triangle({-1, 0.2, 0}, {1, 0, 0}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
}

TEST(Triangle, MinimumDistance) {
    EXPECT_FALSE(intersect_triangle({0.2, 0.2, -1e-10}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
    EXPECT_TRUE(intersect_triangle({0.2, 0.2, -1e-8}, {0, 0, 1}, {0, 0, 0}, {1, 0, 0}, {0, 1, 0}));
}

TEST(FirstHit, NearestAndExclusion) {
    const auto p = soup({{{{-1, -1, 1}, {1, -1, 1}, {0, 1, 1}}},
                         {{{-1, -1, 2}, {1, -1, 2}, {0, 1, 2}}}});
    const AccelStructure accel(p);
    RayHit h = first_hit(accel, {0, 0, 0}, {0, 0, 1});
    ASSERT_TRUE(h.hit());
    EXPECT_EQ(*h.patch, 0u);
    EXPECT_DOUBLE_EQ(h.distance, 1.0);
    EXPECT_DOUBLE_EQ(h.incidence_cosine, 1.0);
    h = first_hit(accel, {0, 0, 0}, {0, 0, 1}, 0);
    EXPECT_EQ(*h.patch, 1u);
    EXPECT_FALSE(first_hit(accel, {0, 0, 0}, {0, 0, -1}).hit());
}

TEST(FirstHit, OriginPatchNeverHitsItself) {
    const auto patches = derive_patches(oracle::unit_cube(), 0.5, NormalOrientation::inward);
    const AccelStructure accel(patches);
    const DirectionSet s = isocell_directions(300);
    for (const Patch& p : patches)
        for (const Vec3& d : to_world_frame(s, p.normal)) {
            const RayHit h = first_hit(accel, p.centroid, d, p.id);
            ASSERT_TRUE(h.hit());  // closed cube: every ray lands somewhere
            EXPECT_NE(*h.patch, p.id);
            EXPECT_GT(h.distance, kMinHitDistance);
        }
}

TEST(FirstHit, SharedEdgeGivesOneHitLowestId) {
    // Two triangles sharing the edge x = y; the ray passes exactly through it.
    const auto p = soup({{{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}}},
                         {{{0, 0, 1}, {1, 1, 1}, {0, 1, 1}}}});
    const auto rev = soup({{{{0, 0, 1}, {1, 1, 1}, {0, 1, 1}}},
                           {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}}}});
    for (const auto* scene : {&p, &rev}) {
        const AccelStructure accel(*scene, 1);
        const RayHit a = first_hit(accel, {0.25, 0.25, 0}, {0, 0, 1});
        const RayHit b = first_hit_brute_force(*scene, {0.25, 0.25, 0}, {0, 0, 1});
        ASSERT_TRUE(a.hit());
        EXPECT_EQ(*a.patch, 0u);
        EXPECT_EQ(a, b);
    }
}

TEST(FirstHit, WatertightAcrossSharedEdges) {
    // A fan of triangles around a vertex; rays aimed at edges and the hub
    // must never slip through.
    TriangleMesh m;
    m.vertices.push_back({0, 0, 1});
    const int k = 12;
    for (int i = 0; i < k; ++i) {
        const double a = 2 * oracle::kPi * i / k;
        m.vertices.push_back({std::cos(a), std::sin(a), 1});
    }
    for (int i = 0; i < k; ++i) m.faces.push_back({0, std::size_t(1 + i), std::size_t(1 + (i + 1) % k)});
    const auto patches = derive_patches(m, 0.5, NormalOrientation::as_authored);
    const AccelStructure accel(patches);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.01, 0.95);
    for (int i = 0; i < k; ++i) {
        const double a = 2 * oracle::kPi * i / k;
        for (int s = 0; s < 50; ++s) {
            const double r = u(rng);
            const Vec3 target{r * std::cos(a), r * std::sin(a), 1};
            const Vec3 origin{0.1 * u(rng), -0.1 * u(rng), 0};
            const Vec3 d = normalize(target - origin);
            EXPECT_TRUE(first_hit(accel, origin, d).hit());
        }
    }
    EXPECT_TRUE(first_hit(accel, {0.3, -0.2, 0}, normalize(Vec3{-0.3, 0.2, 1})).hit());
}

TEST(FirstHit, RejectsNonUnitDirection) {
    const auto p = soup({{{{-1, -1, 1}, {1, -1, 1}, {0, 1, 1}}}});
    const AccelStructure accel(p);
    EXPECT_THROW(first_hit(accel, {0, 0, 0}, {0, 0, 2}), ArgumentError);
    EXPECT_THROW(first_hit_brute_force(p, {0, 0, 0}, {0, 0, 0.5}), ArgumentError);
}

TEST(Bvh, EveryTriangleReachableOnce) {
    const auto patches = random_scene(1000, 3);
    for (int leaf : {1, 4, 16}) {
        const AccelStructure accel(patches, leaf);
        auto ids = accel.reachable_ids();
        std::sort(ids.begin(), ids.end());
        ASSERT_EQ(ids.size(), patches.size());
        for (std::size_t i = 0; i < ids.size(); ++i) EXPECT_EQ(ids[i], i);
        EXPECT_EQ(accel.triangle_count(), patches.size());
        EXPECT_GE(accel.leaf_count(), (patches.size() + leaf - 1) / leaf);
    }
}

TEST(Bvh, MatchesBruteForce) {
    const auto patches = random_scene(2000, 17);
    const AccelStructure accel(patches, 4);
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pos(-12, 12);
    std::normal_distribution<double> g;
    std::size_t hits = 0;
    for (int i = 0; i < 10000; ++i) {
        const Vec3 o{pos(rng), pos(rng), pos(rng)};
        const Vec3 d = normalize(Vec3{g(rng), g(rng), g(rng)});
        const std::optional<PatchId> ex =
            i % 3 == 0 ? std::optional<PatchId>(static_cast<PatchId>(i % patches.size())) : std::nullopt;
        const RayHit a = first_hit(accel, o, d, ex);
        const RayHit b = first_hit_brute_force(patches, o, d, ex);
        ASSERT_EQ(a, b) << "ray " << i;
        hits += a.hit();
    }
    EXPECT_GT(hits, 1000u);
}
