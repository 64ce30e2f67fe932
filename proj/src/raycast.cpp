// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/raycast.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "luxsim/error.hpp"

namespace luxsim {

std::optional<double> intersect_triangle(const Vec3& o, const Vec3& d, const Vec3& v0, const Vec3& v1,
                                         const Vec3& v2) {
    // Permute so the dominant direction component is z.
    int kz = 0;
    if (std::abs(d.y) > std::abs(d[kz])) kz = 1;
    if (std::abs(d.z) > std::abs(d[kz])) kz = 2;
    int kx = (kz + 1) % 3, ky = (kx + 1) % 3;
    if (d[kz] < 0) std::swap(kx, ky);
    const double sx = d[kx] / d[kz], sy = d[ky] / d[kz], sz = 1.0 / d[kz];

    const Vec3 a = v0 - o, b = v1 - o, c = v2 - o;
    const double ax = a[kx] - sx * a[kz], ay = a[ky] - sy * a[kz];
    const double bx = b[kx] - sx * b[kz], by = b[ky] - sy * b[kz];
    const double cx = c[kx] - sx * c[kz], cy = c[ky] - sy * c[kz];

    double u = cx * by - cy * bx;
    double v = ax * cy - ay * cx;
    double w = bx * ay - by * ax;
    if (u == 0 || v == 0 || w == 0) {
        // Edge case: redo the 2D edge functions in extended precision.
        using ld = long double;
        u = static_cast<double>(ld(cx) * ld(by) - ld(cy) * ld(bx));
        v = static_cast<double>(ld(ax) * ld(cy) - ld(ay) * ld(cx));
        w = static_cast<double>(ld(bx) * ld(ay) - ld(by) * ld(ax));
    }
    if ((u < 0 || v < 0 || w < 0) && (u > 0 || v > 0 || w > 0)) return std::nullopt;
    const double det = u + v + w;
    if (det == 0) return std::nullopt;
    const double t = (u * sz * a[kz] + v * sz * b[kz] + w * sz * c[kz]) / det;
    if (!(t > kMinHitDistance)) return std::nullopt;
    return t;
}

namespace {

void check_direction(const Vec3& d) {
    if (std::abs(length(d) - 1.0) > 1e-9) throw ArgumentError("ray direction must be unit length");
}

// Order-independent nearest-hit selection: find the minimum distance, then
// return the lowest id among hits within kHitTieWindow of it.
class HitSelector {
public:
    void offer(double t, PatchId id, double cosine) {
        if (t > bound()) return;
        if (t < best_) best_ = t;
        candidates_.push_back({t, id, cosine});
    }
    double bound() const { return best_ + kHitTieWindow; }

    RayHit result() const {
        RayHit hit;
        for (const auto& c : candidates_) {
            if (c.t > bound()) continue;
            if (!hit.patch || c.id < *hit.patch) {
                hit.patch = c.id;
                hit.distance = c.t;
                hit.incidence_cosine = c.cosine;
            }
        }
        return hit;
    }

private:
    struct Candidate {
        double t;
        PatchId id;
        double cosine;
    };
    double best_ = std::numeric_limits<double>::infinity();
    std::vector<Candidate> candidates_;
};

constexpr double kGamma3 = 3 * std::numeric_limits<double>::epsilon() /
                           (1 - 3 * std::numeric_limits<double>::epsilon());

bool hit_box(const Vec3& lo, const Vec3& hi, const Vec3& o, const Vec3& inv, const Vec3& d, double tmax) {
    double t0 = 0, t1 = tmax;
    for (int k = 0; k < 3; ++k) {
        if (d[k] == 0) {
            if (o[k] < lo[k] || o[k] > hi[k]) return false;
            continue;
        }
        double tn = (lo[k] - o[k]) * inv[k];
        double tf = (hi[k] - o[k]) * inv[k];
        if (tn > tf) std::swap(tn, tf);
        tf *= 1 + 2 * kGamma3;
        t0 = std::max(t0, tn);
        t1 = std::min(t1, tf);
        if (t0 > t1) return false;
    }
    return true;
}

}  // namespace

AccelStructure::AccelStructure(std::span<const Patch> patches, int leaf_size)
    : leaf_size_(std::max(1, leaf_size)) {
    if (patches.empty()) throw ArgumentError("acceleration structure needs at least one patch");
    tris_.reserve(patches.size());
    std::vector<Vec3> centroids;
    centroids.reserve(patches.size());
    for (const Patch& p : patches) {
        tris_.push_back({p.corners[0], p.corners[1], p.corners[2], p.normal, p.id});
        centroids.push_back(p.centroid);
    }
    nodes_.reserve(2 * patches.size());
    build(0, static_cast<std::uint32_t>(tris_.size()), centroids);
}

std::uint32_t AccelStructure::build(std::uint32_t begin, std::uint32_t end, std::vector<Vec3>& centroids) {
    const auto index = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({});
    Vec3 lo = tris_[begin].v0, hi = lo, clo = centroids[begin], chi = clo;
    for (std::uint32_t i = begin; i < end; ++i) {
        for (const Vec3& v : {tris_[i].v0, tris_[i].v1, tris_[i].v2}) {
            lo = min(lo, v);
            hi = max(hi, v);
        }
        clo = min(clo, centroids[i]);
        chi = max(chi, centroids[i]);
    }
    nodes_[index].lo = lo;
    nodes_[index].hi = hi;

    const std::uint32_t n = end - begin;
    const Vec3 extent = chi - clo;
    if (n <= static_cast<std::uint32_t>(leaf_size_) || (extent.x == 0 && extent.y == 0 && extent.z == 0)) {
        nodes_[index].first = begin;
        nodes_[index].count = n;
        return index;
    }

    // Median split along the widest centroid axis; ties ordered by id.
    int axis = 0;
    if (extent.y > extent[axis]) axis = 1;
    if (extent.z > extent[axis]) axis = 2;
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), begin);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (centroids[a][axis] != centroids[b][axis]) return centroids[a][axis] < centroids[b][axis];
        return tris_[a].id < tris_[b].id;
    });
    std::vector<Tri> tris(n);
    std::vector<Vec3> cents(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        tris[i] = tris_[order[i]];
        cents[i] = centroids[order[i]];
    }
    std::copy(tris.begin(), tris.end(), tris_.begin() + begin);
    std::copy(cents.begin(), cents.end(), centroids.begin() + begin);

    const std::uint32_t mid = begin + n / 2;
    build(begin, mid, centroids);  // left child is index + 1
    const std::uint32_t right = build(mid, end, centroids);
    nodes_[index].first = right;
    nodes_[index].count = 0;
    return index;
}

std::size_t AccelStructure::leaf_count() const {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.count > 0; }));
}

std::vector<PatchId> AccelStructure::reachable_ids() const {
    std::vector<PatchId> ids;
    for (const Node& n : nodes_)
        for (std::uint32_t i = 0; i < n.count; ++i) ids.push_back(tris_[n.first + i].id);
    return ids;
}

RayHit AccelStructure::first_hit(const Vec3& origin, const Vec3& direction,
                                 std::optional<PatchId> exclude) const {
    check_direction(direction);
    const Vec3 inv{1.0 / direction.x, 1.0 / direction.y, 1.0 / direction.z};
    HitSelector sel;
    std::array<std::uint32_t, 128> stack;
    std::size_t top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        if (!hit_box(node.lo, node.hi, origin, inv, direction, sel.bound())) continue;
        if (node.count > 0) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const Tri& tri = tris_[i];
                if (exclude && tri.id == *exclude) continue;
                if (auto t = intersect_triangle(origin, direction, tri.v0, tri.v1, tri.v2))
                    sel.offer(*t, tri.id, std::abs(dot(direction, tri.normal)));
            }
        } else {
            const auto self = static_cast<std::uint32_t>(&node - nodes_.data());
            stack[top++] = node.first;
            stack[top++] = self + 1;
        }
    }
    return sel.result();
}

AccelStructure build_accel(std::span<const Patch> patches, int leaf_size) {
    return AccelStructure(patches, leaf_size);
}

RayHit first_hit(const AccelStructure& accel, const Vec3& origin, const Vec3& direction,
                 std::optional<PatchId> exclude) {
    return accel.first_hit(origin, direction, exclude);
}

RayHit first_hit_brute_force(std::span<const Patch> patches, const Vec3& origin, const Vec3& direction,
                             std::optional<PatchId> exclude) {
    check_direction(direction);
    HitSelector sel;
    for (const Patch& p : patches) {
        if (exclude && p.id == *exclude) continue;
        if (auto t = intersect_triangle(origin, direction, p.corners[0], p.corners[1], p.corners[2]))
            sel.offer(*t, p.id, std::abs(dot(direction, p.normal)));
    }
    return sel.result();
}

}  // namespace luxsim
