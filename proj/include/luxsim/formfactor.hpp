// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "luxsim/mesh.hpp"
#include "luxsim/photometry.hpp"
#include "luxsim/raycast.hpp"
#include "luxsim/sampling.hpp"

namespace luxsim {

using CurveMap = std::map<PatchId, PhotometricCurve>;

/// Per-receiver sensitivity factors of one sensor patch. The sensor's
/// readout row is its form-factor row scaled entrywise by `gain`.
struct SensorGain {
    PatchId patch = 0;
    std::vector<double> gain;
    bool operator==(const SensorGain&) const = default;
};

/// Dense n×n form factors f_ij (row i: fraction of patch i's weighted rays
/// landing on patch j) plus the per-row escaped fraction.
struct FormFactorMatrix {
    std::size_t n = 0;
    std::vector<double> values;  // row-major
    std::vector<double> areas;
    std::vector<double> escape;
    std::vector<SensorGain> sensor_gains;  // sorted by patch id
    bool ldc_applied = false;
    bool lsc_applied = false;

    double at(std::size_t i, std::size_t j) const { return values[i * n + j]; }
    double& at(std::size_t i, std::size_t j) { return values[i * n + j]; }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * n, n}; }
    double row_sum(std::size_t i) const;

    const SensorGain* gain_for(PatchId patch) const;
    /// f_s· ⊙ gain_s for a sensor with an LSC, the plain row otherwise.
    std::vector<double> readout_row(PatchId sensor) const;
};

/// Builds the matrix by casting each patch's direction set from its centroid.
///
/// Every ray r of source i carries w_r = LDC_i(angle of r) when i has an LDC,
/// else 1. Then f_ij = Σ_{r→j} w_r / Σ_r w_r and escape_i is the weight of
/// rays that hit nothing. For a sensor patch s with an LSC, the sensitivity
/// at the ray's incidence angle on s gives gain_sj = Σ_{r→j} w_r·LSC(r) /
/// Σ_{r→j} w_r; receivers no ray reached use the LSC toward j's centroid.
///
/// Rows are independent and written to disjoint slots, so the result does not
/// depend on `threads`. Throws ArgumentError if an LDC zeroes every ray of a
/// patch.
FormFactorMatrix compute_form_factors(std::span<const Patch> patches, const AccelStructure& accel,
                                      const SamplerConfig& sampler, const CurveMap& ldc,
                                      const CurveMap& lsc, int threads = 1);

struct RectifyResult {
    FormFactorMatrix matrix;
    int iterations = 0;
    double reciprocity_residual = 0;
    double closure_residual = 0;
    bool converged = false;
};

/// c_i = 1 - escape_i: energy that escapes an open scene stays lost.
std::vector<double> closure_targets(const FormFactorMatrix& ff);

/// max |a_i f_ij - a_j f_ji| / max(a_i, a_j).
double reciprocity_residual(const FormFactorMatrix& ff);
/// max |Σ_j f_ij - c_i|.
double closure_residual(const FormFactorMatrix& ff, std::span<const double> targets);

/// Alternates a reciprocity step f_ij ← (a_i f_ij + a_j f_ji) / (2 a_i) and a
/// closure step scaling row i to sum c_i until both residuals are <= tol or
/// max_iter sweeps ran. A matrix that already satisfies both is returned
/// untouched with iterations = 0. Non-convergence is reported through
/// `converged`, not thrown. Throws NumericalError when a row is zero but its
/// target is positive.
RectifyResult rectify(const FormFactorMatrix& ff, std::span<const double> targets, int max_iter,
                      double tol);

/// Binary dump: "FFM1", u64 n, n² f64 values, n f64 areas, n f64 escape
/// fractions, all little-endian. Sensor gains follow as an optional trailing
/// block: "LSC1", u64 k, then k × (u64 patch id, n f64 gains).
void save_ffm(const FormFactorMatrix& ff, const std::filesystem::path& path);
FormFactorMatrix load_ffm(const std::filesystem::path& path);

}  // namespace luxsim
