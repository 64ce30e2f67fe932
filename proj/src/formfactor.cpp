// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/formfactor.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <optional>
#include <string>

#include "luxsim/error.hpp"
#include "luxsim/parallel.hpp"

namespace luxsim {

double FormFactorMatrix::row_sum(std::size_t i) const {
    double s = 0;
    for (double v : row(i)) s += v;
    return s;
}

const SensorGain* FormFactorMatrix::gain_for(PatchId patch) const {
    const auto it = std::lower_bound(sensor_gains.begin(), sensor_gains.end(), patch,
                                     [](const SensorGain& g, PatchId p) { return g.patch < p; });
    return it != sensor_gains.end() && it->patch == patch ? &*it : nullptr;
}

std::vector<double> FormFactorMatrix::readout_row(PatchId sensor) const {
    if (sensor >= n) throw ArgumentError("unknown sensor patch " + std::to_string(sensor));
    const auto r = row(sensor);
    std::vector<double> out(r.begin(), r.end());
    if (const SensorGain* g = gain_for(sensor))
        for (std::size_t j = 0; j < n; ++j) out[j] *= g->gain[j];
    return out;
}

FormFactorMatrix compute_form_factors(std::span<const Patch> patches, const AccelStructure& accel,
                                      const SamplerConfig& sampler, const CurveMap& ldc,
                                      const CurveMap& lsc, int threads) {
    const std::size_t n = patches.size();
    if (n == 0) throw ArgumentError("no patches");
    if (accel.triangle_count() != n) throw ArgumentError("acceleration structure does not match patches");
    for (std::size_t i = 0; i < n; ++i)
        if (patches[i].id != i) throw ArgumentError("patch ids must equal their index");
    for (const auto& [id, _] : ldc)
        if (id >= n) throw ArgumentError("LDC assigned to unknown patch " + std::to_string(id));
    for (const auto& [id, _] : lsc)
        if (id >= n) throw ArgumentError("LSC assigned to unknown patch " + std::to_string(id));

    FormFactorMatrix ff;
    ff.n = n;
    ff.values.assign(n * n, 0.0);
    ff.areas.resize(n);
    ff.escape.assign(n, 0.0);
    ff.ldc_applied = !ldc.empty();
    ff.lsc_applied = !lsc.empty();
    for (std::size_t i = 0; i < n; ++i) ff.areas[i] = patches[i].area;
    for (const auto& [id, _] : lsc) ff.sensor_gains.push_back({id, std::vector<double>(n, 1.0)});

    // Isocell sets are identical for every patch; build once.
    std::optional<DirectionSet> shared;
    if (sampler.method == SamplerMethod::isocell) shared = isocell_directions(sampler.rays);

    parallel_for(n, threads, [&](std::size_t i) {
        const Patch& src = patches[i];
        const DirectionSet local = shared ? *shared : directions_for_patch(sampler, i);
        const std::vector<Vec3> world = to_world_frame(local, src.normal);

        const auto ldc_it = ldc.find(i);
        const std::vector<double> w =
            ldc_it != ldc.end() ? weight_rays(ldc_it->second, local) : std::vector<double>(local.count(), 1.0);
        const auto lsc_it = lsc.find(i);
        std::vector<double> sensitivity;
        if (lsc_it != lsc.end()) sensitivity = weight_rays(lsc_it->second, local);

        std::vector<double> hit_weight(n, 0.0), sensed_weight;
        if (!sensitivity.empty()) sensed_weight.assign(n, 0.0);
        double total = 0, missed = 0;
        for (std::size_t r = 0; r < world.size(); ++r) {
            total += w[r];
            const RayHit hit = accel.first_hit(src.centroid, world[r], i);
            if (!hit.patch) {
                missed += w[r];
                continue;
            }
            hit_weight[*hit.patch] += w[r];
            if (!sensitivity.empty()) sensed_weight[*hit.patch] += w[r] * sensitivity[r];
        }
        if (!(total > 0))
            throw ArgumentError("degenerate emitter: LDC weights sum to zero for patch " + std::to_string(i));

        double* out = ff.values.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) out[j] = hit_weight[j] / total;
        ff.escape[i] = missed / total;

        if (!sensitivity.empty()) {
            auto& gain = std::lower_bound(ff.sensor_gains.begin(), ff.sensor_gains.end(), i,
                                          [](const SensorGain& g, PatchId p) { return g.patch < p; })
                             ->gain;
            for (std::size_t j = 0; j < n; ++j) {
                if (hit_weight[j] > 0) {
                    gain[j] = sensed_weight[j] / hit_weight[j];
                } else if (j != i) {
                    const Vec3 to = patches[j].centroid - src.centroid;
                    const double c = dot(normalize(to), src.normal);
                    gain[j] = c > 0 ? lsc_it->second.weight_at(polar_angle_deg(c)) : 0.0;
                } else {
                    gain[j] = 0.0;
                }
            }
        }
    });
    return ff;
}

std::vector<double> closure_targets(const FormFactorMatrix& ff) {
    std::vector<double> c(ff.n);
    for (std::size_t i = 0; i < ff.n; ++i) c[i] = 1.0 - ff.escape[i];
    return c;
}

double reciprocity_residual(const FormFactorMatrix& ff) {
    double worst = 0;
    for (std::size_t i = 0; i < ff.n; ++i)
        for (std::size_t j = i + 1; j < ff.n; ++j) {
            const double d = std::abs(ff.areas[i] * ff.at(i, j) - ff.areas[j] * ff.at(j, i));
            worst = std::max(worst, d / std::max(ff.areas[i], ff.areas[j]));
        }
    return worst;
}

double closure_residual(const FormFactorMatrix& ff, std::span<const double> targets) {
    double worst = 0;
    for (std::size_t i = 0; i < ff.n; ++i) worst = std::max(worst, std::abs(ff.row_sum(i) - targets[i]));
    return worst;
}

RectifyResult rectify(const FormFactorMatrix& ff, std::span<const double> targets, int max_iter, double tol) {
    if (targets.size() != ff.n) throw ArgumentError("closure target count does not match matrix size");
    for (double c : targets)
        if (!(c >= 0 && c <= 1 + 1e-12)) throw ArgumentError("closure targets must lie in [0, 1]");
    if (max_iter < 0 || !(tol > 0)) throw ArgumentError("rectify needs max_iter >= 0 and tol > 0");

    RectifyResult res;
    res.matrix = ff;
    FormFactorMatrix& m = res.matrix;
    const std::size_t n = m.n;
    const auto measure = [&] {
        res.reciprocity_residual = reciprocity_residual(m);
        res.closure_residual = closure_residual(m, targets);
        res.converged = res.reciprocity_residual <= tol && res.closure_residual <= tol;
    };
    measure();
    while (!res.converged && res.iterations < max_iter) {
        ++res.iterations;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double g = 0.5 * (m.areas[i] * m.at(i, j) + m.areas[j] * m.at(j, i));
                m.at(i, j) = g / m.areas[i];
                m.at(j, i) = g / m.areas[j];
            }
        for (std::size_t i = 0; i < n; ++i) {
            const double s = m.row_sum(i);
            if (s == 0) {
                if (targets[i] > 0)
                    throw NumericalError("infeasible closure: patch " + std::to_string(i) +
                                         " sees nothing but has closure target " + std::to_string(targets[i]));
                continue;
            }
            const double scale = targets[i] / s;
            for (std::size_t j = 0; j < n; ++j) m.at(i, j) *= scale;
        }
        measure();
    }
    return res;
}

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_u64(std::istream& in, const std::filesystem::path& path) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8)) throw FormatError(path.string() + ": truncated form-factor file");
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(b[k]) << (8 * k);
    return v;
}

double get_f64(std::istream& in, const std::filesystem::path& path) {
    return std::bit_cast<double>(get_u64(in, path));
}

}  // namespace

void save_ffm(const FormFactorMatrix& ff, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write("FFM1", 4);
    put_u64(out, ff.n);
    for (double v : ff.values) put_f64(out, v);
    for (double v : ff.areas) put_f64(out, v);
    for (double v : ff.escape) put_f64(out, v);
    if (!ff.sensor_gains.empty()) {
        out.write("LSC1", 4);
        put_u64(out, ff.sensor_gains.size());
        for (const SensorGain& g : ff.sensor_gains) {
            put_u64(out, g.patch);
            for (double v : g.gain) put_f64(out, v);
        }
    }
    if (!out) throw IoError("failed writing " + path.string());
}

FormFactorMatrix load_ffm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "FFM1", 4) != 0)
        throw FormatError(path.string() + ": not an FFM1 file");
    FormFactorMatrix ff;
    ff.n = get_u64(in, path);
    if (ff.n == 0 || ff.n > (1u << 20)) throw FormatError(path.string() + ": implausible matrix size");
    ff.values.resize(ff.n * ff.n);
    for (double& v : ff.values) v = get_f64(in, path);
    ff.areas.resize(ff.n);
    for (double& v : ff.areas) v = get_f64(in, path);
    ff.escape.resize(ff.n);
    for (double& v : ff.escape) v = get_f64(in, path);
    if (in.read(magic, 4)) {
        if (std::memcmp(magic, "LSC1", 4) != 0) throw FormatError(path.string() + ": unknown trailing block");
        const std::uint64_t k = get_u64(in, path);
        if (k > ff.n) throw FormatError(path.string() + ": too many sensor gain rows");
        for (std::uint64_t s = 0; s < k; ++s) {
            SensorGain g;
            g.patch = get_u64(in, path);
            if (g.patch >= ff.n) throw FormatError(path.string() + ": sensor gain for unknown patch");
            g.gain.resize(ff.n);
            for (double& v : g.gain) v = get_f64(in, path);
            ff.sensor_gains.push_back(std::move(g));
        }
        std::sort(ff.sensor_gains.begin(), ff.sensor_gains.end(),
                  [](const SensorGain& a, const SensorGain& b) { return a.patch < b.patch; });
        ff.lsc_applied = true;
    }
    return ff;
}

}  // namespace luxsim
