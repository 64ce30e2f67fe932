// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

// luxsim: batch light-intensity simulation from the command line.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "luxsim/albedo.hpp"
#include "luxsim/error.hpp"
#include "luxsim/heatmap.hpp"
#include "luxsim/image_io.hpp"
#include "luxsim/mesh.hpp"
#include "luxsim/scene.hpp"
#include "luxsim/simulate.hpp"

namespace fs = std::filesystem;
using namespace luxsim;

namespace {

struct Globals {
    int threads = 1;
    std::optional<std::uint64_t> seed;
    bool verbose = false;
};

void log(const Globals& g, const std::string& msg) {
    if (g.verbose) std::cerr << "luxsim: " << msg << "\n";
}

NormalOrientation parse_orientation(const std::string& s) {
    if (s == "inward") return NormalOrientation::inward;
    if (s == "as-authored") return NormalOrientation::as_authored;
    throw ArgumentError("orientation must be 'inward' or 'as-authored'");
}

struct SimulateArgs {
    fs::path config, out = "out";
    std::optional<std::size_t> rays;
    std::string sampler;
    fs::path ff_cache, ff_load;
    bool warn_invariants = false;
};

int cmd_simulate(const Globals& g, const SimulateArgs& a) {
    const Scene scene = load_scene(a.config);
    log(g, "loaded " + std::to_string(scene.patches.size()) + " patches, " + std::to_string(scene.scenarios.size()) +
               " scenarios");
    SimulateOptions opt;
    opt.threads = g.threads;
    opt.rays = a.rays;
    if (!a.sampler.empty()) opt.sampler = parse_sampler_method(a.sampler);
    opt.seed = g.seed;
    opt.ff_cache = a.ff_cache;
    opt.ff_load = a.ff_load;
    const SimulationResult res = run_simulation(scene, opt);
    write_outputs(scene, res, a.out);
    log(g, "rays per patch " + std::to_string(res.realized_rays) + ", rectify sweeps " +
               std::to_string(res.rectified.iterations));
    if (!res.rectified.converged)
        std::cerr << "luxsim: warning: rectification stopped after " << res.rectified.iterations
                  << " sweeps (reciprocity " << format_float(res.rectified.reciprocity_residual) << ", closure "
                  << format_float(res.rectified.closure_residual) << ")\n";
    const auto failures = res.invariant_failures();
    for (const std::string& f : failures)
        std::cerr << "luxsim: " << (a.warn_invariants ? "warning" : "error") << ": invariant: " << f << "\n";
    if (!failures.empty() && !a.warn_invariants) return 2;
    std::cout << "wrote " << (a.out / "report.json").string() << " (" << res.scenarios.size() << " scenarios, "
              << res.realized_rays << " rays per patch)\n";
    return 0;
}

struct DepthArgs {
    fs::path depth, camera, out;
    DepthMeshOptions options;
};

int cmd_mesh_from_depth(const Globals& g, const DepthArgs& a) {
    fs::path sidecar = a.camera;
    if (sidecar.empty()) sidecar = fs::path(a.depth).replace_extension(".json");
    const DepthImage depth = load_depth(a.depth, sidecar);
    log(g, "depth " + std::to_string(depth.width) + "x" + std::to_string(depth.height));
    const TriangleMesh mesh = mesh_from_depth(depth, a.options);
    write_obj(mesh, a.out);
    std::cout << "vertices " << mesh.vertices.size() << "\nfaces " << mesh.faces.size() << "\n";
    return 0;
}

struct AlbedoArgs {
    fs::path config, out_stem, mesh;
    std::string orientation = "inward";
    double default_rho = 0.5;
};

// {"depth": pgm, "camera": json, "ambient": a,
//  "images": [{"path", "light_position": [x, y, z], "flux"}]}
int cmd_albedo(const Globals& g, const AlbedoArgs& a) {
    std::ifstream in(a.config);
    if (!in) throw IoError("cannot open " + a.config.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError({std::string("albedo config is not valid JSON: ") + e.what()});
    }
    const fs::path base = a.config.parent_path();
    std::vector<std::string> errors;
    if (!doc.contains("depth") || !doc["depth"].is_string()) errors.push_back("missing 'depth' path");
    if (!doc.contains("images") || !doc["images"].is_array()) errors.push_back("missing 'images' array");
    if (!errors.empty()) throw ValidationError(errors);
    if (doc["images"].empty()) throw ArgumentError("albedo needs at least one light image");

    const fs::path depth_path = base / doc["depth"].get<std::string>();
    const fs::path camera_path = doc.contains("camera") ? base / doc["camera"].get<std::string>()
                                                        : fs::path(depth_path).replace_extension(".json");
    const DepthImage depth = load_depth(depth_path, camera_path);
    const double ambient = doc.value("ambient", 0.0);

    std::vector<LightImage> images;
    for (const auto& j : doc["images"]) {
        try {
            LightImage li;
            li.intensity = read_gray(base / j.at("path").get<std::string>());
            const auto p = j.at("light_position").get<std::vector<double>>();
            if (p.size() != 3) throw ArgumentError("light_position needs 3 coordinates");
            li.light_position = {p[0], p[1], p[2]};
            li.light_flux = j.at("flux").get<double>();
            images.push_back(std::move(li));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError({std::string("bad image entry: ") + e.what()});
        }
    }
    for (const LightImage& li : images)
        if (li.intensity.width != depth.width || li.intensity.height != depth.height)
            throw ValidationError({"light image is " + std::to_string(li.intensity.width) + "x" +
                                   std::to_string(li.intensity.height) + ", depth is " + std::to_string(depth.width) +
                                   "x" + std::to_string(depth.height)});
    log(g, std::to_string(images.size()) + " light images");
    const AlbedoMap map = estimate_albedo(images, pixel_geometry(depth), ambient);
    save_albedo_map(map, a.out_stem);
    std::size_t valid = 0;
    for (auto v : map.valid) valid += v != 0;
    std::cout << "valid pixels " << valid << " of " << map.rho.size() << "\n";

    if (!a.mesh.empty()) {
        const TriangleMesh mesh = load_mesh(a.mesh);
        const auto patches = derive_patches(mesh, a.default_rho, parse_orientation(a.orientation));
        const PatchAlbedo pa = map_albedo_to_patches(map, patches, depth.camera, a.default_rho);
        std::ofstream csv(fs::path(a.out_stem).concat("_patches.csv"));
        if (!csv) throw IoError("cannot write per-patch albedo CSV");
        csv << "id,rho\n";
        for (std::size_t i = 0; i < pa.rho.size(); ++i) csv << i << "," << format_float(pa.rho[i]) << "\n";
        std::cout << "patches without coverage " << pa.uncovered.size() << "\n";
    }
    return 0;
}

struct HeatmapArgs {
    fs::path mesh, csv, out = "heatmap.ppm";
    std::string orientation = "inward";
    std::string scale;
    int width = 800;
};

int cmd_heatmap(const Globals&, const HeatmapArgs& a) {
    HeatmapOptions opt;
    opt.width = a.width;
    if (!a.scale.empty()) {
        const auto colon = a.scale.find(':');
        try {
            if (colon == std::string::npos) throw std::invalid_argument("scale");
            std::size_t u1 = 0, u2 = 0;
            const std::string s1 = a.scale.substr(0, colon), s2 = a.scale.substr(colon + 1);
            const double lo = std::stod(s1, &u1), hi = std::stod(s2, &u2);
            if (u1 != s1.size() || u2 != s2.size()) throw std::invalid_argument("scale");
            if (!(hi > lo)) throw ArgumentError("--scale needs lo < hi");
            opt.scale = {lo, hi};
        } catch (const std::logic_error&) {
            throw ArgumentError("--scale must look like LO:HI");
        }
    }
    const TriangleMesh mesh = load_mesh(a.mesh);
    const auto patches = derive_patches(mesh, 0.5, parse_orientation(a.orientation));
    const std::vector<double> lux = read_illuminance_csv(a.csv);
    write_ppm(render_heatmap(patches, lux, opt), a.out);
    std::cout << "wrote " << a.out.string() << "\n";
    return 0;
}

int cmd_validate(const Globals& g, const fs::path& config) {
    const Scene scene = load_scene(config);
    log(g, "scene ok");
    std::cout << "patches " << scene.patches.size() << "\nluminaires " << scene.luminaires.size() << "\nsensors "
              << scene.sensors.size() << "\nscenarios " << scene.scenarios.size() << "\nrays per patch "
              << realized_ray_count(scene.sampler) << "\n";
    if (!scene.albedo_uncovered.empty())
        std::cout << "albedo default used for " << scene.albedo_uncovered.size() << " patches\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"luxsim: radiosity light-intensity simulation"};
    app.require_subcommand(1);
    Globals g;
    std::uint64_t seed = 0;
    app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
    auto* seed_opt = app.add_option("--seed", seed, "Monte Carlo seed (overrides the config)");
    app.add_flag("--verbose,-v", g.verbose, "Progress on standard error");

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run every scenario of a scene");
    simulate->add_option("config", sim.config, "Scene JSON")->required();
    simulate->add_option("--out", sim.out, "Output directory");
    simulate->add_option("--rays", sim.rays, "Ray budget per patch")->check(CLI::PositiveNumber);
    simulate->add_option("--sampler", sim.sampler, "isocell or mc");
    simulate->add_option("--ff-cache", sim.ff_cache, "Write the raw form-factor matrix");
    simulate->add_option("--ff-load", sim.ff_load, "Reuse a cached form-factor matrix");
    simulate->add_flag("--warn-invariants", sim.warn_invariants, "Report invariant failures without failing");

    DepthArgs dep;
    auto* depth = app.add_subcommand("mesh-from-depth", "Triangulate a depth image");
    depth->add_option("depth", dep.depth, "16-bit depth PGM")->required();
    depth->add_option("--camera", dep.camera, "Camera sidecar (default: <depth>.json)");
    depth->add_option("--out", dep.out, "Output OBJ")->required();
    depth->add_option("--median-radius", dep.options.median_radius)->check(CLI::NonNegativeNumber);
    depth->add_option("--edge-threshold", dep.options.edge_threshold, "Meters")->check(CLI::PositiveNumber);
    depth->add_option("--smooth-iters", dep.options.smooth_iters)->check(CLI::NonNegativeNumber);

    AlbedoArgs alb;
    auto* albedo = app.add_subcommand("albedo", "Estimate albedo from single-light images");
    albedo->add_option("config", alb.config, "Albedo JSON")->required();
    albedo->add_option("--out", alb.out_stem, "Output stem")->required();
    albedo->add_option("--mesh", alb.mesh, "Also map albedo onto this mesh's patches");
    albedo->add_option("--orientation", alb.orientation, "inward or as-authored");
    albedo->add_option("--default", alb.default_rho, "Albedo for uncovered patches");

    HeatmapArgs hm;
    auto* heatmap = app.add_subcommand("heatmap", "False-color top-down lux map");
    heatmap->add_option("--mesh", hm.mesh, "Scene mesh")->required();
    heatmap->add_option("--csv", hm.csv, "Scenario CSV from simulate")->required();
    heatmap->add_option("--out", hm.out, "Output PPM");
    heatmap->add_option("--orientation", hm.orientation, "inward or as-authored");
    heatmap->add_option("--scale", hm.scale, "Fixed lux range LO:HI");
    heatmap->add_option("--width", hm.width, "Image width in pixels")->check(CLI::PositiveNumber);

    fs::path validate_config;
    auto* validate = app.add_subcommand("validate", "Check a scene config");
    validate->add_option("config", validate_config, "Scene JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    if (*seed_opt) g.seed = seed;

    try {
        if (*simulate) return cmd_simulate(g, sim);
        if (*depth) return cmd_mesh_from_depth(g, dep);
        if (*albedo) return cmd_albedo(g, alb);
        if (*heatmap) return cmd_heatmap(g, hm);
        if (*validate) return cmd_validate(g, validate_config);
    } catch (const NumericalError& e) {
        std::cerr << "luxsim: numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "luxsim: I/O error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "luxsim: error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "luxsim: unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
