// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "luxsim/sampling.hpp"

namespace luxsim {

/// LDC: luminaire light distribution (emission side). LSC: sensor light
/// sensitivity (receiving side). Same representation either way.
enum class CurveKind { ldc, lsc };

std::string to_string(CurveKind k);

struct CurveSample {
    double angle_deg = 0;
    double value = 0;
    bool operator==(const CurveSample&) const = default;
};

/// Azimuthally symmetric curve over the angle from the patch normal, 0..90
/// degrees, piecewise linear between samples and constant past the last one.
/// Values are peak-normalized on construction (an all-zero curve stays zero).
class PhotometricCurve {
public:
    PhotometricCurve(CurveKind kind, std::vector<CurveSample> samples);

    /// Constant 1 at every angle.
    static PhotometricCurve flat(CurveKind kind);

    CurveKind kind() const { return kind_; }
    const std::vector<CurveSample>& samples() const { return samples_; }

    /// Throws ArgumentError outside [0, 90].
    double weight_at(double angle_deg) const;

private:
    CurveKind kind_;
    std::vector<CurveSample> samples_;
};

/// CSV rows "angle_deg,value"; an optional non-numeric header row is skipped.
PhotometricCurve parse_curve(std::istream& in, CurveKind kind);
PhotometricCurve load_curve(const std::filesystem::path& path, CurveKind kind);

inline double weight_at(const PhotometricCurve& curve, double angle_deg) {
    return curve.weight_at(angle_deg);
}

/// Angle of a local direction from the normal, in degrees.
double polar_angle_deg(double cos_theta);

/// weight_at(curve, acos(d_z)) for every ray, in ray order.
std::vector<double> weight_rays(const PhotometricCurve& curve, const DirectionSet& set);

}  // namespace luxsim
