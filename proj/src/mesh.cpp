// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>

#include "luxsim/error.hpp"

namespace luxsim {

double TriangleMesh::face_area(std::size_t f) const {
    const Face& t = faces[f];
    return 0.5 * length(cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]));
}

Vec3 TriangleMesh::face_centroid(std::size_t f) const {
    const Face& t = faces[f];
    return (vertices[t[0]] + vertices[t[1]] + vertices[t[2]]) / 3.0;
}

Vec3 PinholeCamera::backproject(double u, double v, double depth) const {
    const Vec3 local{(u - cx) * depth / fx, (v - cy) * depth / fy, depth};
    return pose.apply(local);
}

std::optional<PinholeCamera::Projection> PinholeCamera::project(const Vec3& world) const {
    const Vec3 c = pose.inverse().apply(world);
    if (c.z <= 0) return std::nullopt;
    return Projection{fx * c.x / c.z + cx, fy * c.y / c.z + cy, c.z};
}

namespace {

// Vertex index of an OBJ face token ("7", "7/2", "7//3", "-1").
long parse_face_index(const std::string& token, std::size_t line) {
    const std::string head = token.substr(0, token.find('/'));
    try {
        std::size_t used = 0;
        const long idx = std::stol(head, &used);
        if (used != head.size() || idx == 0) throw std::invalid_argument(head);
        return idx;
    } catch (const std::exception&) {
        throw FormatError("bad face index '" + token + "'", line);
    }
}

}  // namespace

TriangleMesh parse_obj(std::istream& in) {
    TriangleMesh mesh;
    std::vector<std::size_t> face_lines;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "v") {
            Vec3 p;
            if (!(ls >> p.x >> p.y >> p.z)) throw FormatError("vertex needs three coordinates", line_no);
            if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z))
                throw FormatError("non-finite vertex coordinate", line_no);
            mesh.vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<long> idx;
            std::string tok;
            while (ls >> tok) {
                long i = parse_face_index(tok, line_no);
                // Negative indices are relative to the vertices read so far.
                if (i < 0) i = static_cast<long>(mesh.vertices.size()) + i + 1;
                if (i <= 0) throw FormatError("face index out of range: " + tok, line_no);
                idx.push_back(i - 1);
            }
            if (idx.size() < 3) throw FormatError("face needs at least three vertices", line_no);
            for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
                mesh.faces.push_back({static_cast<std::size_t>(idx[0]), static_cast<std::size_t>(idx[k]),
                                      static_cast<std::size_t>(idx[k + 1])});
                face_lines.push_back(line_no);
            }
        }
        // vt, vn, g, o, s, usemtl, mtllib, ... carry nothing we use.
    }
    for (std::size_t f = 0; f < mesh.faces.size(); ++f)
        for (std::size_t v : mesh.faces[f])
            if (v >= mesh.vertices.size())
                throw FormatError("face index " + std::to_string(v + 1) + " out of range (" +
                                      std::to_string(mesh.vertices.size()) + " vertices)",
                                  face_lines[f]);
    if (mesh.faces.empty()) throw GeometryError("mesh has no faces");
    return mesh;
}

TriangleMesh load_mesh(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file " + path.string());
    try {
        return parse_obj(in);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << std::setprecision(17);
    for (const Vec3& v : mesh.vertices) out << "v " << v.x << ' ' << v.y << ' ' << v.z << '\n';
    for (const Face& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Patch> derive_patches(const TriangleMesh& mesh, double albedo_default,
                                  NormalOrientation orientation) {
    if (mesh.faces.empty()) throw GeometryError("mesh has no faces");
    Vec3 lo = mesh.vertices.at(0), hi = lo;
    for (const Vec3& v : mesh.vertices) {
        lo = min(lo, v);
        hi = max(hi, v);
    }
    const Vec3 interior = (lo + hi) * 0.5;

    std::vector<Patch> patches;
    patches.reserve(mesh.faces.size());
    for (std::size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& t = mesh.faces[f];
        for (std::size_t v : t)
            if (v >= mesh.vertices.size())
                throw GeometryError("face " + std::to_string(f) + " references missing vertex");
        Patch p;
        p.id = f;
        p.face = t;
        p.corners = {mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]};
        const Vec3 n = cross(p.corners[1] - p.corners[0], p.corners[2] - p.corners[0]);
        p.area = 0.5 * length(n);
        if (!(p.area > kMinFaceArea)) throw GeometryError("degenerate face " + std::to_string(f));
        p.normal = normalize(n);
        p.centroid = (p.corners[0] + p.corners[1] + p.corners[2]) / 3.0;
        if (orientation == NormalOrientation::inward && dot(p.normal, interior - p.centroid) < 0)
            p.normal = -p.normal;
        p.albedo = albedo_default;
        patches.push_back(p);
    }
    return patches;
}

std::vector<double> median_filter(const DepthImage& depth, int radius) {
    std::vector<double> out(depth.depth.size(), 0.0);
    std::vector<double> window;
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            if (depth.at(x, y) <= 0) continue;
            window.clear();
            for (int dy = -radius; dy <= radius; ++dy)
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx, yy = y + dy;
                    if (xx < 0 || yy < 0 || xx >= depth.width || yy >= depth.height) continue;
                    if (const double d = depth.at(xx, yy); d > 0) window.push_back(d);
                }
            std::sort(window.begin(), window.end());
            const std::size_t k = window.size();
            out[static_cast<std::size_t>(y) * depth.width + x] =
                k % 2 ? window[k / 2] : 0.5 * (window[k / 2 - 1] + window[k / 2]);
        }
    }
    return out;
}

namespace {

void laplacian_smooth(TriangleMesh& mesh, int iterations) {
    if (iterations <= 0) return;
    const std::size_t nv = mesh.vertices.size();
    std::map<std::pair<std::size_t, std::size_t>, int> edge_use;
    for (const Face& f : mesh.faces)
        for (int k = 0; k < 3; ++k) {
            const std::size_t a = f[k], b = f[(k + 1) % 3];
            ++edge_use[{std::min(a, b), std::max(a, b)}];
        }
    std::vector<std::vector<std::size_t>> neighbors(nv);
    std::vector<bool> boundary(nv, false);
    for (const auto& [e, count] : edge_use) {
        neighbors[e.first].push_back(e.second);
        neighbors[e.second].push_back(e.first);
        if (count == 1) boundary[e.first] = boundary[e.second] = true;
    }
    constexpr double kStep = 0.5;
    std::vector<Vec3> next(nv);
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t v = 0; v < nv; ++v) {
            next[v] = mesh.vertices[v];
            if (boundary[v] || neighbors[v].empty()) continue;
            Vec3 avg;
            for (std::size_t w : neighbors[v]) avg += mesh.vertices[w];
            avg = avg / static_cast<double>(neighbors[v].size());
            next[v] += (avg - mesh.vertices[v]) * kStep;
        }
        mesh.vertices.swap(next);
    }
}

}  // namespace

TriangleMesh mesh_from_depth(const DepthImage& depth, const DepthMeshOptions& options) {
    if (depth.width < 2 || depth.height < 2 ||
        depth.depth.size() != static_cast<std::size_t>(depth.width) * depth.height)
        throw ArgumentError("depth image must be at least 2x2 with width*height samples");
    for (double d : depth.depth)
        if (!std::isfinite(d) || d < 0) throw ArgumentError("depth values must be finite and >= 0");
    if (options.median_radius < 0 || options.smooth_iters < 0)
        throw ArgumentError("median radius and smoothing iterations must be >= 0");

    const std::vector<double> filtered =
        options.median_radius > 0 ? median_filter(depth, options.median_radius) : depth.depth;

    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    const std::size_t npix = filtered.size();
    std::vector<Vec3> points(npix);
    for (int y = 0; y < depth.height; ++y)
        for (int x = 0; x < depth.width; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * depth.width + x;
            if (filtered[i] > 0) points[i] = depth.camera.backproject(x, y, filtered[i]);
        }

    // Faces over pixel indices first, compacted afterwards.
    std::vector<Face> faces;
    const auto short_edges = [&](std::size_t a, std::size_t b, std::size_t c) {
        const double lim = options.edge_threshold;
        return length(points[a] - points[b]) <= lim && length(points[b] - points[c]) <= lim &&
               length(points[c] - points[a]) <= lim;
    };
    for (int y = 0; y + 1 < depth.height; ++y)
        for (int x = 0; x + 1 < depth.width; ++x) {
            const std::size_t a = static_cast<std::size_t>(y) * depth.width + x;
            const std::size_t b = a + 1, c = a + depth.width, d = c + 1;
            if (filtered[a] <= 0 || filtered[b] <= 0 || filtered[c] <= 0 || filtered[d] <= 0) continue;
            // Winding gives normals that face the camera.
            if (short_edges(a, c, b)) faces.push_back({a, c, b});
            if (short_edges(b, c, d)) faces.push_back({b, c, d});
        }
    if (faces.empty()) throw GeometryError("depth image produced no triangles");

    TriangleMesh mesh;
    std::vector<std::size_t> remap(npix, kNone);
    for (Face& f : faces)
        for (std::size_t& v : f) {
            if (remap[v] == kNone) {
                remap[v] = mesh.vertices.size();
                mesh.vertices.push_back(points[v]);
            }
            v = remap[v];
        }
    mesh.faces = std::move(faces);
    laplacian_smooth(mesh, options.smooth_iters);
    return mesh;
}

}  // namespace luxsim
