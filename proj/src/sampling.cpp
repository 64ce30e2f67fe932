// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/sampling.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "luxsim/error.hpp"

namespace luxsim {

std::string to_string(SamplerMethod m) {
    return m == SamplerMethod::isocell ? "isocell" : "mc";
}

SamplerMethod parse_sampler_method(const std::string& s) {
    if (s == "isocell") return SamplerMethod::isocell;
    if (s == "mc" || s == "monte-carlo") return SamplerMethod::monte_carlo;
    throw ArgumentError("unknown sampler '" + s + "' (expected isocell or mc)");
}

int isocell_ring_count(std::size_t target_count) {
    if (target_count < 1) throw ArgumentError("ray budget must be >= 1");
    int rings = 1;
    while (static_cast<std::size_t>(kIsocellBaseCells) * rings * rings < target_count) ++rings;
    return rings;
}

DirectionSet isocell_directions(std::size_t target_count) {
    const int rings = isocell_ring_count(target_count);
    DirectionSet set;
    set.method = SamplerMethod::isocell;
    set.rings = rings;
    const std::size_t total = static_cast<std::size_t>(kIsocellBaseCells) * rings * rings;
    set.directions.reserve(total);
    set.disc_points.reserve(total);
    set.cell_areas.reserve(total);

    for (int j = 1; j <= rings; ++j) {
        const double r0 = static_cast<double>(j - 1) / rings;
        const double r1 = static_cast<double>(j) / rings;
        const int cells = kIsocellBaseCells * (2 * j - 1);
        const double dphi = 2.0 * std::numbers::pi / cells;
        // Area centroid of an annular sector.
        const double half = 0.5 * dphi;
        const double rc = (2.0 / 3.0) * (r1 * r1 * r1 - r0 * r0 * r0) / (r1 * r1 - r0 * r0) *
                          std::sin(half) / half;
        const double area = half * (r1 * r1 - r0 * r0);
        for (int c = 0; c < cells; ++c) {
            const double phi = (c + 0.5) * dphi;
            const DiscPoint p{rc * std::cos(phi), rc * std::sin(phi)};
            set.disc_points.push_back(p);
            set.directions.push_back({p.x, p.y, std::sqrt(1.0 - rc * rc)});
            set.cell_areas.push_back(area);
        }
    }
    return set;
}

DirectionSet monte_carlo_directions(std::size_t count, std::uint64_t seed) {
    if (count < 1) throw ArgumentError("ray budget must be >= 1");
    DirectionSet set;
    set.method = SamplerMethod::monte_carlo;
    set.seed = seed;
    set.directions.reserve(count);
    set.disc_points.reserve(count);
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    for (std::size_t i = 0; i < count; ++i) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(u1);
        const double phi = 2.0 * std::numbers::pi * u2;
        const DiscPoint p{r * std::cos(phi), r * std::sin(phi)};
        set.disc_points.push_back(p);
        set.directions.push_back({p.x, p.y, std::sqrt(1.0 - u1)});
    }
    return set;
}

std::vector<Vec3> to_world_frame(const DirectionSet& set, const Vec3& n) {
    if (std::abs(length(n) - 1.0) > 1e-9) throw ArgumentError("frame normal must be unit length");
    const double sign = std::copysign(1.0, n.z);
    const double a = -1.0 / (sign + n.z);
    const double b = n.x * n.y * a;
    const Vec3 t1{1.0 + sign * n.x * n.x * a, sign * b, -sign * n.x};
    const Vec3 t2{b, sign + n.y * n.y * a, -n.y};
    std::vector<Vec3> out;
    out.reserve(set.count());
    for (const Vec3& d : set.directions) out.push_back(t1 * d.x + t2 * d.y + n * d.z);
    return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t patch_seed(std::uint64_t seed, std::size_t patch) {
    return splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(patch)));
}

DirectionSet directions_for_patch(const SamplerConfig& config, std::size_t patch) {
    if (config.method == SamplerMethod::isocell) return isocell_directions(config.rays);
    return monte_carlo_directions(config.rays, patch_seed(config.seed, patch));
}

std::size_t realized_ray_count(const SamplerConfig& config) {
    if (config.method == SamplerMethod::isocell) {
        const auto r = static_cast<std::size_t>(isocell_ring_count(config.rays));
        return kIsocellBaseCells * r * r;
    }
    if (config.rays < 1) throw ArgumentError("ray budget must be >= 1");
    return config.rays;
}

}  // namespace luxsim
