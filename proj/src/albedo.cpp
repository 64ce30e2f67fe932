// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/albedo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "luxsim/error.hpp"

namespace luxsim {

PixelGeometry pixel_geometry(const DepthImage& depth) {
    PixelGeometry g;
    g.width = depth.width;
    g.height = depth.height;
    const std::size_t n = static_cast<std::size_t>(depth.width) * depth.height;
    g.positions.assign(n, Vec3{});
    g.normals.assign(n, Vec3{});
    const auto valid = [&](int x, int y) {
        return x >= 0 && y >= 0 && x < depth.width && y < depth.height && depth.at(x, y) > 0;
    };
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x)
            if (valid(x, y))
                g.positions[static_cast<std::size_t>(y) * depth.width + x] =
                    depth.camera.backproject(x, y, depth.at(x, y));

    const Vec3 eye = depth.camera.pose.t;
    const auto pos = [&](int x, int y) { return g.positions[static_cast<std::size_t>(y) * depth.width + x]; };
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x) {
            if (!valid(x, y)) continue;
            const int x0 = valid(x - 1, y) ? x - 1 : x, x1 = valid(x + 1, y) ? x + 1 : x;
            const int y0 = valid(x, y - 1) ? y - 1 : y, y1 = valid(x, y + 1) ? y + 1 : y;
            if (x0 == x1 || y0 == y1) continue;
            Vec3 n = cross(pos(x1, y) - pos(x0, y), pos(x, y1) - pos(x, y0));
            const double len = length(n);
            if (!(len > 0)) continue;
            n = n / len;
            if (dot(n, eye - pos(x, y)) < 0) n = -n;
            g.normals[static_cast<std::size_t>(y) * depth.width + x] = n;
        }
    return g;
}

double shading_basis(const Vec3& normal, const Vec3& position, const Vec3& light_position, double light_flux,
                     double ambient) {
    const Vec3 to_light = light_position - position;
    const double d2 = dot(to_light, to_light);
    if (!(d2 > 0)) return ambient;
    const double cosine = std::max(dot(normal, to_light / std::sqrt(d2)), 0.0);
    return ambient + cosine * light_flux / (4.0 * std::numbers::pi * d2);
}

GrayImage render_shading(std::span<const double> rho, const PixelGeometry& geom, const Vec3& light_position,
                         double light_flux, double ambient) {
    GrayImage img;
    img.width = geom.width;
    img.height = geom.height;
    img.pixels.assign(geom.normals.size(), 0.0);
    for (std::size_t i = 0; i < geom.normals.size(); ++i) {
        if (geom.normals[i] == Vec3{}) continue;
        img.pixels[i] = rho[i] * shading_basis(geom.normals[i], geom.positions[i], light_position, light_flux, ambient);
    }
    return img;
}

AlbedoMap estimate_albedo(std::span<const LightImage> images, const PixelGeometry& geom, double ambient) {
    if (images.empty()) throw ArgumentError("albedo estimation needs at least one image");
    const std::size_t n = static_cast<std::size_t>(geom.width) * geom.height;
    if (geom.positions.size() != n || geom.normals.size() != n)
        throw ArgumentError("pixel geometry does not match its dimensions");
    for (const LightImage& im : images)
        if (im.intensity.width != geom.width || im.intensity.height != geom.height || im.intensity.pixels.size() != n)
            throw ArgumentError("image dimensions " + std::to_string(im.intensity.width) + "x" +
                                std::to_string(im.intensity.height) + " do not match depth " +
                                std::to_string(geom.width) + "x" + std::to_string(geom.height));

    AlbedoMap map;
    map.width = geom.width;
    map.height = geom.height;
    map.rho.assign(n, 0.0);
    map.valid.assign(n, 0);
    for (std::size_t p = 0; p < n; ++p) {
        if (geom.normals[p] == Vec3{}) continue;
        double num = 0, den = 0;
        for (const LightImage& im : images) {
            const double b = shading_basis(geom.normals[p], geom.positions[p], im.light_position, im.light_flux, ambient);
            num += im.intensity.pixels[p] * b;
            den += b * b;
        }
        if (den < 1e-12) continue;
        map.rho[p] = std::clamp(num / den, 0.0, 1.0);
        map.valid[p] = 1;
    }
    return map;
}

namespace {

struct P2 {
    double x, y;
};

double edge(const P2& a, const P2& b, const P2& p) { return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x); }

// With vertices ordered so edge() is positive inside, exactly one of the two
// directed copies of a shared edge satisfies this.
bool owns_edge(const P2& a, const P2& b) {
    const double dy = b.y - a.y, dx = b.x - a.x;
    return dy < 0 || (dy == 0 && dx > 0);
}

bool covers(const P2& a, const P2& b, const P2& p) {
    const double e = edge(a, b, p);
    return e > 0 || (e == 0 && owns_edge(a, b));
}

}  // namespace

PatchAlbedo map_albedo_to_patches(const AlbedoMap& albedo, std::span<const Patch> patches,
                                  const PinholeCamera& camera, double default_rho) {
    PatchAlbedo out;
    out.rho.assign(patches.size(), default_rho);
    for (std::size_t k = 0; k < patches.size(); ++k) {
        std::array<P2, 3> v;
        bool behind = false;
        for (int c = 0; c < 3; ++c) {
            const auto proj = camera.project(patches[k].corners[c]);
            if (!proj) {
                behind = true;
                break;
            }
            v[c] = {proj->u, proj->v};
        }
        if (behind) {
            out.uncovered.push_back(patches[k].id);
            continue;
        }
        if (edge(v[0], v[1], v[2]) < 0) std::swap(v[1], v[2]);
        if (edge(v[0], v[1], v[2]) == 0) {
            out.uncovered.push_back(patches[k].id);
            continue;
        }
        const double xmin = std::min({v[0].x, v[1].x, v[2].x}), xmax = std::max({v[0].x, v[1].x, v[2].x});
        const double ymin = std::min({v[0].y, v[1].y, v[2].y}), ymax = std::max({v[0].y, v[1].y, v[2].y});
        const int x0 = std::max(0, static_cast<int>(std::ceil(xmin)));
        const int x1 = std::min(albedo.width - 1, static_cast<int>(std::floor(xmax)));
        const int y0 = std::max(0, static_cast<int>(std::ceil(ymin)));
        const int y1 = std::min(albedo.height - 1, static_cast<int>(std::floor(ymax)));
        double sum = 0;
        std::size_t count = 0;
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const P2 p{static_cast<double>(x), static_cast<double>(y)};
                if (!covers(v[0], v[1], p) || !covers(v[1], v[2], p) || !covers(v[2], v[0], p)) continue;
                if (!albedo.is_valid(x, y)) continue;
                sum += albedo.at(x, y);
                ++count;
            }
        if (count == 0) {
            out.uncovered.push_back(patches[k].id);
            continue;
        }
        out.rho[k] = sum / static_cast<double>(count);
    }
    return out;
}

void save_albedo_map(const AlbedoMap& map, const std::filesystem::path& stem) {
    GrayImage f{map.width, map.height, map.rho};
    write_pfm(f, stem.string() + ".pfm");
    GrayImage q{map.width, map.height, {}};
    GrayImage m{map.width, map.height, {}};
    for (std::size_t i = 0; i < map.rho.size(); ++i) {
        q.pixels.push_back(map.rho[i] * 65535.0);
        m.pixels.push_back(map.valid[i] ? 65535.0 : 0.0);
    }
    write_pgm16(q, stem.string() + ".pgm");
    write_pgm16(m, stem.string() + "_mask.pgm");
}

AlbedoMap load_albedo_map(const std::filesystem::path& image, const std::filesystem::path& mask) {
    const GrayImage img = read_gray(image);
    const bool is_float = image.extension() == ".pfm";
    AlbedoMap map;
    map.width = img.width;
    map.height = img.height;
    map.rho.resize(img.pixels.size());
    map.valid.assign(img.pixels.size(), 1);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        map.rho[i] = std::clamp(is_float ? img.pixels[i] : img.pixels[i] / 65535.0, 0.0, 1.0);
    if (!mask.empty()) {
        const GrayImage m = read_gray(mask);
        if (m.width != img.width || m.height != img.height)
            throw FormatError("albedo mask " + mask.string() + " does not match the albedo image size");
        for (std::size_t i = 0; i < m.pixels.size(); ++i) map.valid[i] = m.pixels[i] > 0 ? 1 : 0;
    }
    return map;
}

}  // namespace luxsim
