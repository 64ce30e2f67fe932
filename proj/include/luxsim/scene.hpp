// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "luxsim/formfactor.hpp"
#include "luxsim/mesh.hpp"
#include "luxsim/photometry.hpp"
#include "luxsim/radiosity.hpp"
#include "luxsim/sampling.hpp"

namespace luxsim {

struct Luminaire {
    std::string id;
    std::vector<PatchId> patch_ids;
    double flux = 0;        // lumens
    double age_factor = 1;  // (0, 1]
    std::optional<std::string> ldc;
    double emitting_area = 0;
};

struct Sensor {
    std::string id;
    PatchId patch = 0;
    std::optional<std::string> lsc;
};

struct Scenario {
    std::string id;
    std::vector<std::string> active;  // luminaire ids; empty = dark
};

struct SolverConfig {
    SolverMethod method = SolverMethod::automatic;
    double tol = 1e-6;
    int max_iter = 10000;
};

struct RectifyConfig {
    int max_iter = 200;
    double tol = 1e-9;
};

/// A validated simulation input. Immutable once loaded.
struct Scene {
    std::filesystem::path config_path;
    TriangleMesh mesh;
    std::vector<Patch> patches;  // albedo and role resolved; emission zero
    NormalOrientation orientation = NormalOrientation::inward;
    std::map<std::string, PhotometricCurve> ldc_curves;
    std::map<std::string, PhotometricCurve> lsc_curves;
    std::vector<Luminaire> luminaires;
    std::vector<Sensor> sensors;
    std::vector<Scenario> scenarios;
    SamplerConfig sampler;
    SolverConfig solver;
    RectifyConfig rectify;
    int leaf_size = 4;
    std::vector<PatchId> albedo_uncovered;  // patches that fell back to the default albedo

    const Luminaire* find_luminaire(std::string_view id) const;
    CurveMap ldc_map() const;
    CurveMap lsc_map() const;
    std::vector<double> albedo() const;
};

/// Parses and validates a scene document. Relative paths resolve against
/// `base_dir`. Every problem found is collected into one ValidationError.
Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir);
Scene load_scene(const std::filesystem::path& path);

/// e_i = flux · age_factor / emitting_area on the patches of active
/// luminaires, zero elsewhere.
std::vector<double> emission_vector(const Scene& scene, const Scenario& scenario);

}  // namespace luxsim
