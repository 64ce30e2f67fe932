// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "luxsim/albedo.hpp"
#include "luxsim/error.hpp"
#include "luxsim/image_io.hpp"

namespace luxsim {

using nlohmann::json;

const Luminaire* Scene::find_luminaire(std::string_view id) const {
    for (const Luminaire& l : luminaires)
        if (l.id == id) return &l;
    return nullptr;
}

CurveMap Scene::ldc_map() const {
    CurveMap m;
    for (const Luminaire& l : luminaires)
        if (l.ldc)
            for (PatchId p : l.patch_ids) m.emplace(p, ldc_curves.at(*l.ldc));
    return m;
}

CurveMap Scene::lsc_map() const {
    CurveMap m;
    for (const Sensor& s : sensors)
        if (s.lsc) m.emplace(s.patch, lsc_curves.at(*s.lsc));
    return m;
}

std::vector<double> Scene::albedo() const {
    std::vector<double> rho;
    rho.reserve(patches.size());
    for (const Patch& p : patches) rho.push_back(p.albedo);
    return rho;
}

namespace {

// Typed field access that records problems instead of throwing.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void error(const std::string& msg) { errors_.push_back(msg); }

    template <typename T>
    std::optional<T> get(const json& obj, const std::string& key, const std::string& where, bool required = true) {
        if (!obj.is_object() || !obj.contains(key)) {
            if (required) error(where + ": missing field '" + key + "'");
            return std::nullopt;
        }
        try {
            return obj.at(key).get<T>();
        } catch (const json::exception&) {
            error(where + ": field '" + key + "' has the wrong type");
            return std::nullopt;
        }
    }

private:
    std::vector<std::string>& errors_;
};

std::vector<double> read_per_patch_albedo(const std::filesystem::path& path, std::size_t n, Reader& rd) {
    std::ifstream in(path);
    if (!in) {
        rd.error("albedo.per_patch: cannot open " + path.string());
        return {};
    }
    std::vector<double> rho(n, -1.0);
    std::string line;
    std::size_t line_no = 0, sequential = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t id = sequential;
        double value = 0;
        if (line.find(',') != std::string::npos) {
            char comma = 0;
            if (!(ls >> id >> comma >> value) || comma != ',') {
                if (line_no == 1) continue;  // header
                rd.error(path.string() + ": bad albedo row at line " + std::to_string(line_no));
                continue;
            }
        } else if (!(ls >> value)) {
            rd.error(path.string() + ": bad albedo value at line " + std::to_string(line_no));
            continue;
        }
        ++sequential;
        if (id >= n) {
            rd.error(path.string() + ": albedo for unknown patch " + std::to_string(id));
            continue;
        }
        rho[id] = value;
    }
    return rho;
}

}  // namespace

Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir) {
    std::vector<std::string> errors;
    Reader rd(errors);
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError({std::string("scene is not valid JSON: ") + e.what()});
    }
    if (!doc.is_object()) throw ValidationError({"scene document must be a JSON object"});

    Scene scene;
    const auto resolve = [&](const std::string& p) { return (base_dir / p).lexically_normal(); };

    // Geometry.
    if (auto o = rd.get<std::string>(doc, "orientation", "scene", false)) {
        if (*o == "inward") scene.orientation = NormalOrientation::inward;
        else if (*o == "as-authored") scene.orientation = NormalOrientation::as_authored;
        else rd.error("scene: orientation must be 'inward' or 'as-authored'");
    }
    bool have_mesh = false;
    if (auto mesh_path = rd.get<std::string>(doc, "mesh", "scene")) {
        try {
            scene.mesh = load_mesh(resolve(*mesh_path));
            scene.patches = derive_patches(scene.mesh, 0.5, scene.orientation);
            have_mesh = true;
        } catch (const Error& e) {
            rd.error(std::string("mesh: ") + e.what());
        }
    }
    const std::size_t n = scene.patches.size();
    const auto check_patch = [&](long long id, const std::string& where) {
        if (!have_mesh) return false;
        if (id < 0 || static_cast<std::size_t>(id) >= n) {
            rd.error(where + ": patch " + std::to_string(id) + " does not exist (mesh has " + std::to_string(n) +
                     " patches)");
            return false;
        }
        return true;
    };

    // Albedo.
    double default_rho = 0.5;
    const json albedo = doc.value("albedo", json::object());
    if (!albedo.is_object()) {
        rd.error("albedo: must be an object");
    } else {
        if (auto d = rd.get<double>(albedo, "default", "albedo", false)) default_rho = *d;
        if (!(default_rho >= 0 && default_rho < 1)) rd.error("albedo.default must lie in [0, 1)");
        for (Patch& p : scene.patches) p.albedo = default_rho;
        if (have_mesh && albedo.contains("map")) {
            const json& m = albedo["map"];
            auto image = rd.get<std::string>(m, "image", "albedo.map");
            auto camera = rd.get<std::string>(m, "camera", "albedo.map");
            auto mask = rd.get<std::string>(m, "mask", "albedo.map", false);
            if (image && camera) {
                try {
                    const AlbedoMap map = load_albedo_map(resolve(*image), mask ? resolve(*mask) : std::filesystem::path{});
                    const PinholeCamera cam = read_camera_json(resolve(*camera));
                    const PatchAlbedo pa = map_albedo_to_patches(map, scene.patches, cam, default_rho);
                    for (std::size_t i = 0; i < n; ++i) scene.patches[i].albedo = pa.rho[i];
                    scene.albedo_uncovered = pa.uncovered;
                } catch (const Error& e) {
                    rd.error(std::string("albedo.map: ") + e.what());
                }
            }
        }
        if (have_mesh && albedo.contains("per_patch")) {
            if (auto path = rd.get<std::string>(albedo, "per_patch", "albedo")) {
                const std::vector<double> rho = read_per_patch_albedo(resolve(*path), n, rd);
                for (std::size_t i = 0; i < rho.size(); ++i)
                    if (rho[i] != -1.0) scene.patches[i].albedo = rho[i];
            }
        }
        for (const Patch& p : scene.patches)
            if (!(p.albedo >= 0 && p.albedo < 1))
                rd.error("albedo of patch " + std::to_string(p.id) + " is " + std::to_string(p.albedo) +
                         "; must lie in [0, 1)");
    }

    // Curves, loaded lazily by the kind their users need.
    std::map<std::string, std::filesystem::path> curve_paths;
    if (doc.contains("curves")) {
        if (!doc["curves"].is_object()) {
            rd.error("curves: must map names to CSV paths");
        } else {
            for (const auto& [name, value] : doc["curves"].items()) {
                if (!value.is_string()) rd.error("curves." + name + ": must be a path string");
                else curve_paths[name] = resolve(value.get<std::string>());
            }
        }
    }
    const auto load_named_curve = [&](const std::string& name, CurveKind kind, std::map<std::string, PhotometricCurve>& into,
                                      const std::string& where) {
        if (into.count(name)) return true;
        const auto it = curve_paths.find(name);
        if (it == curve_paths.end()) {
            rd.error(where + ": unknown curve '" + name + "'");
            return false;
        }
        try {
            into.emplace(name, load_curve(it->second, kind));
            return true;
        } catch (const Error& e) {
            rd.error(where + ": " + e.what());
            return false;
        }
    };

    // Luminaires.
    std::map<PatchId, std::string> patch_owner;
    std::set<std::string> luminaire_ids;
    if (doc.contains("luminaires") && !doc["luminaires"].is_array()) rd.error("luminaires: must be an array");
    for (const json& lj : doc.value("luminaires", json::array())) {
        Luminaire l;
        auto id = rd.get<std::string>(lj, "id", "luminaire");
        l.id = id.value_or("?");
        const std::string where = "luminaire '" + l.id + "'";
        if (id && !luminaire_ids.insert(*id).second) rd.error(where + ": duplicate id");
        if (auto f = rd.get<double>(lj, "flux", where)) {
            l.flux = *f;
            if (!(l.flux > 0)) rd.error(where + ": flux must be > 0");
        }
        if (auto a = rd.get<double>(lj, "age_factor", where, false)) l.age_factor = *a;
        if (!(l.age_factor > 0 && l.age_factor <= 1)) rd.error(where + ": age_factor must lie in (0, 1]");
        if (auto ps = rd.get<std::vector<long long>>(lj, "patches", where)) {
            if (ps->empty()) rd.error(where + ": needs at least one emitting patch");
            for (long long p : *ps) {
                if (!check_patch(p, where)) continue;
                const auto pid = static_cast<PatchId>(p);
                if (auto [it, fresh] = patch_owner.emplace(pid, l.id); !fresh) {
                    rd.error(where + ": patch " + std::to_string(pid) + " already belongs to luminaire '" + it->second + "'");
                    continue;
                }
                l.patch_ids.push_back(pid);
                l.emitting_area += scene.patches[pid].area;
            }
        }
        if (auto c = rd.get<std::string>(lj, "ldc", where, false)) {
            if (load_named_curve(*c, CurveKind::ldc, scene.ldc_curves, where)) l.ldc = *c;
        }
        scene.luminaires.push_back(std::move(l));
    }

    // Sensors.
    std::set<std::string> sensor_ids;
    std::set<PatchId> sensor_patches;
    if (doc.contains("sensors") && !doc["sensors"].is_array()) rd.error("sensors: must be an array");
    for (const json& sj : doc.value("sensors", json::array())) {
        Sensor s;
        auto id = rd.get<std::string>(sj, "id", "sensor");
        s.id = id.value_or("?");
        const std::string where = "sensor '" + s.id + "'";
        if (id && !sensor_ids.insert(*id).second) rd.error(where + ": duplicate id");
        if (auto p = rd.get<long long>(sj, "patch", where); p && check_patch(*p, where)) {
            s.patch = static_cast<PatchId>(*p);
            if (!sensor_patches.insert(s.patch).second)
                rd.error(where + ": patch " + std::to_string(s.patch) + " already carries a sensor");
            if (auto it = patch_owner.find(s.patch); it != patch_owner.end())
                rd.error(where + ": patch " + std::to_string(s.patch) + " is emitting patch of luminaire '" + it->second + "'");
        }
        if (auto c = rd.get<std::string>(sj, "lsc", where, false)) {
            if (load_named_curve(*c, CurveKind::lsc, scene.lsc_curves, where)) s.lsc = *c;
        }
        scene.sensors.push_back(std::move(s));
    }

    // Scenarios.
    std::set<std::string> scenario_ids;
    if (doc.contains("scenarios") && !doc["scenarios"].is_array()) rd.error("scenarios: must be an array");
    for (const json& cj : doc.value("scenarios", json::array())) {
        Scenario sc;
        auto id = rd.get<std::string>(cj, "id", "scenario");
        sc.id = id.value_or("?");
        const std::string where = "scenario '" + sc.id + "'";
        if (id && !scenario_ids.insert(*id).second) rd.error(where + ": duplicate id");
        // Scenario ids name output files.
        if (id && (id->empty() || id->find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789_.-") !=
                                      std::string::npos))
            rd.error(where + ": id may only contain letters, digits, '_', '.' and '-'");
        if (auto act = rd.get<std::vector<std::string>>(cj, "active", where)) {
            std::set<std::string> seen;
            for (const std::string& a : *act) {
                if (!luminaire_ids.count(a)) rd.error(where + ": unknown luminaire '" + a + "'");
                else if (!seen.insert(a).second) rd.error(where + ": luminaire '" + a + "' listed twice");
                else sc.active.push_back(a);
            }
        }
        scene.scenarios.push_back(std::move(sc));
    }

    // Numerical settings.
    if (doc.contains("sampler")) {
        const json& s = doc["sampler"];
        if (auto m = rd.get<std::string>(s, "method", "sampler", false)) {
            try {
                scene.sampler.method = parse_sampler_method(*m);
            } catch (const Error& e) {
                rd.error(std::string("sampler: ") + e.what());
            }
        }
        if (auto r = rd.get<long long>(s, "rays", "sampler", false)) {
            if (*r < 1) rd.error("sampler: rays must be >= 1");
            else scene.sampler.rays = static_cast<std::size_t>(*r);
        }
        if (auto seed = rd.get<std::uint64_t>(s, "seed", "sampler", false)) scene.sampler.seed = *seed;
    }
    if (doc.contains("solver")) {
        const json& s = doc["solver"];
        if (auto m = rd.get<std::string>(s, "method", "solver", false)) {
            try {
                scene.solver.method = parse_solver_method(*m);
            } catch (const Error& e) {
                rd.error(std::string("solver: ") + e.what());
            }
        }
        if (auto t = rd.get<double>(s, "tol", "solver", false)) scene.solver.tol = *t;
        if (auto it = rd.get<int>(s, "max_iter", "solver", false)) scene.solver.max_iter = *it;
        if (!(scene.solver.tol > 0) || scene.solver.max_iter < 1) rd.error("solver: needs tol > 0 and max_iter >= 1");
    }
    if (doc.contains("rectify")) {
        const json& s = doc["rectify"];
        if (auto t = rd.get<double>(s, "tol", "rectify", false)) scene.rectify.tol = *t;
        if (auto it = rd.get<int>(s, "max_iter", "rectify", false)) scene.rectify.max_iter = *it;
        if (!(scene.rectify.tol > 0) || scene.rectify.max_iter < 0) rd.error("rectify: needs tol > 0 and max_iter >= 0");
    }
    if (auto leaf = rd.get<int>(doc, "leaf_size", "scene", false)) {
        if (*leaf < 1) rd.error("scene: leaf_size must be >= 1");
        else scene.leaf_size = *leaf;
    }

    if (!errors.empty()) throw ValidationError(std::move(errors));

    for (const Luminaire& l : scene.luminaires)
        for (PatchId p : l.patch_ids) scene.patches[p].role = PatchRole::luminaire;
    for (const Sensor& s : scene.sensors) scene.patches[s.patch].role = PatchRole::sensor;
    return scene;
}

Scene load_scene(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scene config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    Scene scene = parse_scene(ss.str(), path.parent_path());
    scene.config_path = path;
    return scene;
}

std::vector<double> emission_vector(const Scene& scene, const Scenario& scenario) {
    std::vector<double> e(scene.patches.size(), 0.0);
    for (const std::string& id : scenario.active) {
        const Luminaire* l = scene.find_luminaire(id);
        if (!l) throw ArgumentError("scenario '" + scenario.id + "' references unknown luminaire '" + id + "'");
        const double exitance = l->flux * l->age_factor / l->emitting_area;
        for (PatchId p : l->patch_ids) e[p] += exitance;
    }
    return e;
}

}  // namespace luxsim
