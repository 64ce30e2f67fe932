// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "luxsim/formfactor.hpp"
#include "luxsim/radiosity.hpp"
#include "luxsim/scene.hpp"

namespace luxsim {

struct SimulateOptions {
    int threads = 1;
    std::optional<std::size_t> rays;
    std::optional<SamplerMethod> sampler;
    std::optional<std::uint64_t> seed;
    std::filesystem::path ff_cache;  // write the raw matrix here when set
    std::filesystem::path ff_load;   // skip form-factor assembly when set
};

struct InvariantCheck {
    double eq_residual = 0;     // max |r - e - rho·H|
    double min_margin = 0;      // min over i of min(r_i - e_i, e_i)
    double energy_out = 0;      // Σ a r
    double energy_bound = 0;    // Σ a e / (1 - rho_max); 0 when not checked
    bool energy_checked = false;
    std::vector<std::string> failures;
};

struct ScenarioResult {
    Scenario scenario;
    RadiositySolution solution;
    std::vector<LuxmeterReading> readings;  // scene sensor order
    InvariantCheck checks;
};

struct StageTimings {
    double form_factors_s = 0;
    double rectify_s = 0;
    double solve_s = 0;
};

struct SimulationResult {
    SamplerConfig sampler;  // effective settings after CLI overrides
    std::size_t realized_rays = 0;
    bool form_factors_loaded = false;
    FormFactorMatrix raw;
    RectifyResult rectified;
    std::vector<ScenarioResult> scenarios;
    StageTimings timings;

    std::vector<std::string> invariant_failures() const;
};

/// mesh → form factors → rectify → per-scenario solve → readout. Scenarios
/// are solved concurrently against one shared factorization.
SimulationResult run_simulation(const Scene& scene, const SimulateOptions& options);

/// Checks a solved scenario. `tol` bounds the equation residual and the
/// sign margins.
InvariantCheck check_invariants(const FormFactorMatrix& ff, std::span<const double> rho,
                                const RadiositySolution& solution, bool rectified, double tol);

/// "%.9g".
std::string format_float(double v);

/// Per-patch CSV `patch_id,area_m2,radiosity,irradiance_lux,illuminance_lux`.
std::string solution_csv(const Scene& scene, const RadiositySolution& solution);

/// Aggregated run report. Contains no timings, so equal inputs give equal
/// bytes.
std::string report_json(const Scene& scene, const SimulationResult& result);
std::string timings_json(const SimulationResult& result);

/// Writes report.json, timings.json and scenario_<id>.csv into `out_dir`.
void write_outputs(const Scene& scene, const SimulationResult& result, const std::filesystem::path& out_dir);

}  // namespace luxsim
