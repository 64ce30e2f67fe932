// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "luxsim/error.hpp"
#include "luxsim/parallel.hpp"
#include "luxsim/raycast.hpp"

namespace luxsim {

using nlohmann::ordered_json;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// JSON number holding the 9-significant-digit rounding of v.
ordered_json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::stod(format_float(v));
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

std::string format_float(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<std::string> SimulationResult::invariant_failures() const {
    std::vector<std::string> all;
    for (const ScenarioResult& s : scenarios)
        for (const std::string& f : s.checks.failures) all.push_back("scenario '" + s.scenario.id + "': " + f);
    return all;
}

InvariantCheck check_invariants(const FormFactorMatrix& ff, std::span<const double> rho,
                                const RadiositySolution& solution, bool rectified, double tol) {
    InvariantCheck c;
    const std::size_t n = ff.n;
    const auto& r = solution.radiosity;
    const auto& e = solution.emission;
    const auto& h = solution.irradiance;
    c.min_margin = n ? std::numeric_limits<double>::infinity() : 0.0;
    double rho_max = 0, emitted = 0;
    for (std::size_t i = 0; i < n; ++i) {
        c.eq_residual = std::max(c.eq_residual, std::abs(r[i] - e[i] - rho[i] * h[i]));
        c.min_margin = std::min({c.min_margin, r[i] - e[i], e[i]});
        c.energy_out += ff.areas[i] * r[i];
        emitted += ff.areas[i] * e[i];
        rho_max = std::max(rho_max, rho[i]);
    }
    if (!(c.eq_residual <= tol))
        c.failures.push_back("radiosity equation residual " + format_float(c.eq_residual) + " exceeds " +
                             format_float(tol));
    if (!(c.min_margin >= -tol)) c.failures.push_back("radiosity below emission or negative emission");
    // The bound needs reciprocity and row sums <= 1, which rectification provides.
    if (rectified) {
        c.energy_checked = true;
        c.energy_bound = emitted / (1 - rho_max);
        if (!(c.energy_out <= c.energy_bound * (1 + 1e-9) + tol))
            c.failures.push_back("energy bound violated: " + format_float(c.energy_out) + " > " +
                                 format_float(c.energy_bound));
    }
    return c;
}

SimulationResult run_simulation(const Scene& scene, const SimulateOptions& options) {
    SimulationResult res;
    res.sampler = scene.sampler;
    if (options.rays) res.sampler.rays = *options.rays;
    if (options.sampler) res.sampler.method = *options.sampler;
    if (options.seed) res.sampler.seed = *options.seed;
    if (res.sampler.rays == 0) throw ArgumentError("ray budget must be >= 1");
    res.realized_rays = realized_ray_count(res.sampler);
    const std::size_t n = scene.patches.size();
    const CurveMap lsc = scene.lsc_map();

    auto t0 = std::chrono::steady_clock::now();
    if (!options.ff_load.empty()) {
        res.raw = load_ffm(options.ff_load);
        res.form_factors_loaded = true;
        if (res.raw.n != n)
            throw ArgumentError("form-factor file has " + std::to_string(res.raw.n) + " patches, scene has " +
                                std::to_string(n));
        for (std::size_t i = 0; i < n; ++i)
            if (std::abs(res.raw.areas[i] - scene.patches[i].area) > 1e-9 * std::max(1.0, scene.patches[i].area))
                throw ArgumentError("form-factor file does not match the scene geometry (patch " + std::to_string(i) +
                                    " area differs)");
        for (const auto& [patch, curve] : lsc)
            if (!res.raw.gain_for(patch))
                throw ArgumentError("form-factor file lacks sensitivity gains for sensor patch " +
                                    std::to_string(patch));
    } else {
        const AccelStructure accel(scene.patches, scene.leaf_size);
        res.raw = compute_form_factors(scene.patches, accel, res.sampler, scene.ldc_map(), lsc, options.threads);
    }
    res.timings.form_factors_s = seconds_since(t0);
    if (!options.ff_cache.empty()) save_ffm(res.raw, options.ff_cache);

    t0 = std::chrono::steady_clock::now();
    res.rectified = rectify(res.raw, closure_targets(res.raw), scene.rectify.max_iter, scene.rectify.tol);
    res.timings.rectify_s = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const FormFactorMatrix& ff = res.rectified.matrix;
    const std::vector<double> rho = scene.albedo();
    const RadiositySolver solver(ff, rho, scene.solver.method, scene.solver.tol, scene.solver.max_iter);
    res.scenarios.resize(scene.scenarios.size());
    parallel_for(scene.scenarios.size(), options.threads, [&](std::size_t k) {
        ScenarioResult& out = res.scenarios[k];
        out.scenario = scene.scenarios[k];
        out.solution = solver.solve(emission_vector(scene, out.scenario));
        for (const Sensor& s : scene.sensors)
            out.readings.push_back({out.scenario.id, s.id, s.patch, luxmeter_lux(ff, out.solution, s.patch)});
        // Both solver paths stop at tol; allow the residual a little headroom
        // for the H = F r recomputation.
        out.checks = check_invariants(ff, rho, out.solution, res.rectified.converged, 10 * scene.solver.tol);
    });
    res.timings.solve_s = seconds_since(t0);
    return res;
}

std::string solution_csv(const Scene& scene, const RadiositySolution& solution) {
    std::string s = "patch_id,area_m2,radiosity,irradiance_lux,illuminance_lux\n";
    for (std::size_t i = 0; i < scene.patches.size(); ++i) {
        s += std::to_string(i);
        for (double v : {scene.patches[i].area, solution.radiosity[i], solution.irradiance[i], solution.illuminance[i]}) {
            s += ',';
            s += format_float(v);
        }
        s += '\n';
    }
    return s;
}

std::string report_json(const Scene& scene, const SimulationResult& result) {
    ordered_json doc;
    doc["patches"] = scene.patches.size();
    doc["sampler"] = {{"method", to_string(result.sampler.method)},
                      {"rays_requested", result.sampler.rays},
                      {"rays_realized", result.realized_rays},
                      {"seed", result.sampler.seed}};

    const FormFactorMatrix& raw = result.raw;
    double row_min = raw.n ? 1e300 : 0, row_max = 0, esc_min = raw.n ? 1e300 : 0, esc_max = 0, esc_sum = 0;
    for (std::size_t i = 0; i < raw.n; ++i) {
        const double s = raw.row_sum(i);
        row_min = std::min(row_min, s);
        row_max = std::max(row_max, s);
        esc_min = std::min(esc_min, raw.escape[i]);
        esc_max = std::max(esc_max, raw.escape[i]);
        esc_sum += raw.escape[i];
    }
    const RectifyResult& rect = result.rectified;
    doc["form_factors"] = {
        {"source", result.form_factors_loaded ? "loaded" : "computed"},
        // A cached matrix does not record whether an LDC shaped it.
        {"ldc_applied", result.form_factors_loaded ? ordered_json(nullptr) : ordered_json(raw.ldc_applied)},
        {"lsc_applied", raw.lsc_applied},
        {"raw_row_sum", {{"min", num(row_min)}, {"max", num(row_max)}}},
        {"raw_reciprocity_residual", num(reciprocity_residual(raw))},
        {"escape", {{"min", num(esc_min)}, {"mean", num(raw.n ? esc_sum / raw.n : 0)}, {"max", num(esc_max)}}},
        {"rectify",
         {{"iterations", rect.iterations},
          {"reciprocity_residual", num(rect.reciprocity_residual)},
          {"closure_residual", num(rect.closure_residual)},
          {"tol", num(scene.rectify.tol)},
          {"converged", rect.converged}}}};
    if (!scene.albedo_uncovered.empty()) doc["albedo_uncovered_patches"] = scene.albedo_uncovered;

    ordered_json scenarios = ordered_json::array();
    ordered_json readings = ordered_json::array();
    for (const ScenarioResult& s : result.scenarios) {
        const auto& ill = s.solution.illuminance;
        double lo = ill.empty() ? 0 : *std::min_element(ill.begin(), ill.end());
        double hi = ill.empty() ? 0 : *std::max_element(ill.begin(), ill.end());
        double mean = 0;
        for (double v : ill) mean += v;
        if (!ill.empty()) mean /= static_cast<double>(ill.size());
        ordered_json sensors = ordered_json::array();
        for (const LuxmeterReading& r : s.readings) {
            sensors.push_back({{"sensor_id", r.sensor_id}, {"patch", r.patch}, {"lux", num(r.lux)}});
            readings.push_back({{"scenario", r.scenario}, {"sensor_id", r.sensor_id}, {"lux", num(r.lux)}});
        }
        ordered_json inv = {{"equation_residual", num(s.checks.eq_residual)},
                            {"min_margin", num(s.checks.min_margin)},
                            {"energy_out", num(s.checks.energy_out)}};
        if (s.checks.energy_checked) inv["energy_bound"] = num(s.checks.energy_bound);
        inv["ok"] = s.checks.failures.empty();
        scenarios.push_back({{"id", s.scenario.id},
                             {"active", s.scenario.active},
                             {"solver",
                              {{"method", to_string(s.solution.solver)},
                               {"iterations", s.solution.iterations},
                               {"residual", num(s.solution.residual)},
                               {"tol", num(scene.solver.tol)}}},
                             {"illuminance_lux", {{"min", num(lo)}, {"mean", num(mean)}, {"max", num(hi)}}},
                             {"sensors", sensors},
                             {"invariants", inv}});
    }
    doc["scenarios"] = scenarios;
    doc["readings"] = readings;
    const std::vector<std::string> failures = result.invariant_failures();
    doc["invariants_ok"] = failures.empty();
    if (!failures.empty()) doc["invariant_failures"] = failures;
    return doc.dump(2) + "\n";
}

std::string timings_json(const SimulationResult& result) {
    ordered_json doc = {{"form_factors_s", result.timings.form_factors_s},
                        {"form_factors_loaded", result.form_factors_loaded},
                        {"rectify_s", result.timings.rectify_s},
                        {"solve_s", result.timings.solve_s}};
    return doc.dump(2) + "\n";
}

void write_outputs(const Scene& scene, const SimulationResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());
    write_text(out_dir / "report.json", report_json(scene, result));
    write_text(out_dir / "timings.json", timings_json(result));
    for (const ScenarioResult& s : result.scenarios)
        write_text(out_dir / ("scenario_" + s.scenario.id + ".csv"), solution_csv(scene, s.solution));
}

}  // namespace luxsim
