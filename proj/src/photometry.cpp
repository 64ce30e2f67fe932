// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/photometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "luxsim/error.hpp"

namespace luxsim {

std::string to_string(CurveKind k) { return k == CurveKind::ldc ? "LDC" : "LSC"; }

namespace {

void validate(const std::vector<CurveSample>& s) {
    if (s.size() < 2) throw FormatError("curve needs at least 2 samples");
    if (s.front().angle_deg != 0) throw FormatError("curve must start at angle 0", 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (!std::isfinite(s[i].angle_deg) || !std::isfinite(s[i].value))
            throw FormatError("non-finite curve sample", i + 1);
        if (s[i].value < 0) throw FormatError("negative curve value", i + 1);
        if (s[i].angle_deg > 90) throw FormatError("curve angle above 90 degrees", i + 1);
        if (i > 0 && !(s[i].angle_deg > s[i - 1].angle_deg))
            throw FormatError("curve angles must be strictly increasing", i + 1);
    }
}

}  // namespace

PhotometricCurve::PhotometricCurve(CurveKind kind, std::vector<CurveSample> samples)
    : kind_(kind), samples_(std::move(samples)) {
    validate(samples_);
    double peak = 0;
    for (const auto& s : samples_) peak = std::max(peak, s.value);
    if (peak > 0)
        for (auto& s : samples_) s.value /= peak;
}

PhotometricCurve PhotometricCurve::flat(CurveKind kind) {
    return PhotometricCurve(kind, {{0.0, 1.0}, {90.0, 1.0}});
}

double PhotometricCurve::weight_at(double angle_deg) const {
    if (!(angle_deg >= 0 && angle_deg <= 90)) throw ArgumentError("curve angle outside [0, 90]");
    const auto upper = std::upper_bound(samples_.begin(), samples_.end(), angle_deg,
                                        [](double a, const CurveSample& s) { return a < s.angle_deg; });
    if (upper == samples_.end()) return samples_.back().value;
    const CurveSample& hi = *upper;
    const CurveSample& lo = *(upper - 1);
    return lo.value + (hi.value - lo.value) * (angle_deg - lo.angle_deg) / (hi.angle_deg - lo.angle_deg);
}

PhotometricCurve parse_curve(std::istream& in, CurveKind kind) {
    std::vector<CurveSample> samples;
    std::vector<std::size_t> lines;
    std::string raw;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.find_first_not_of(" \t") == std::string::npos) continue;
        const auto comma = raw.find(',');
        if (comma == std::string::npos) throw FormatError("expected 'angle_deg,value'", line_no);
        CurveSample s;
        try {
            std::size_t u1 = 0, u2 = 0;
            const std::string a = raw.substr(0, comma), v = raw.substr(comma + 1);
            s.angle_deg = std::stod(a, &u1);
            s.value = std::stod(v, &u2);
            if (a.find_first_not_of(" \t", u1) != std::string::npos ||
                v.find_first_not_of(" \t", u2) != std::string::npos)
                throw std::invalid_argument(raw);
        } catch (const std::exception&) {
            if (first_content) {  // header row
                first_content = false;
                continue;
            }
            throw FormatError("unparsable curve row '" + raw + "'", line_no);
        }
        first_content = false;
        samples.push_back(s);
        lines.push_back(line_no);
    }
    try {
        return PhotometricCurve(kind, std::move(samples));
    } catch (const FormatError& e) {
        // Re-label the sample index with the file line number.
        const std::size_t idx = e.line();
        const std::string msg = e.what();
        const std::string base = msg.substr(0, msg.find(" (line"));
        throw FormatError(base, idx > 0 && idx <= lines.size() ? lines[idx - 1] : 0);
    }
}

PhotometricCurve load_curve(const std::filesystem::path& path, CurveKind kind) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open curve file " + path.string());
    try {
        return parse_curve(in, kind);
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

double polar_angle_deg(double cos_theta) {
    return std::clamp(std::acos(std::clamp(cos_theta, -1.0, 1.0)) * 180.0 / std::numbers::pi, 0.0, 90.0);
}

std::vector<double> weight_rays(const PhotometricCurve& curve, const DirectionSet& set) {
    std::vector<double> w;
    w.reserve(set.count());
    for (const Vec3& d : set.directions) w.push_back(curve.weight_at(polar_angle_deg(d.z)));
    return w;
}

}  // namespace luxsim
