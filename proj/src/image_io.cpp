// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include <json.hpp>

#include "luxsim/error.hpp"

namespace luxsim {

namespace {

// Next whitespace-delimited header token, skipping '#' comments.
std::string header_token(std::istream& in, const std::filesystem::path& path) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(static_cast<char>(c));
    }
    if (tok.empty()) throw FormatError(path.string() + ": truncated image header");
    return tok;
}

int header_int(std::istream& in, const std::filesystem::path& path) {
    const std::string tok = header_token(in, path);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad header field '" + tok + "'");
    }
}

}  // namespace

GrayImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    if (header_token(in, path) != "P5") throw FormatError(path.string() + ": not a binary PGM (P5)");
    GrayImage img;
    img.width = header_int(in, path);
    img.height = header_int(in, path);
    const int maxval = header_int(in, path);
    if (img.width <= 0 || img.height <= 0 || maxval <= 0 || maxval > 65535)
        throw FormatError(path.string() + ": bad PGM dimensions or maxval");
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(n * bytes_per);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size())))
        throw FormatError(path.string() + ": truncated PGM data");
    img.pixels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        img.pixels[i] = bytes_per == 1 ? raw[i] : (raw[2 * i] << 8) | raw[2 * i + 1];
    return img;
}

void write_pgm16(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P5\n" << image.width << ' ' << image.height << "\n65535\n";
    std::vector<unsigned char> raw(image.pixels.size() * 2);
    for (std::size_t i = 0; i < image.pixels.size(); ++i) {
        const double v = std::clamp(std::round(image.pixels[i]), 0.0, 65535.0);
        const auto u = static_cast<unsigned>(v);
        raw[2 * i] = static_cast<unsigned char>(u >> 8);
        raw[2 * i + 1] = static_cast<unsigned char>(u & 0xff);
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

GrayImage read_pfm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    if (header_token(in, path) != "Pf") throw FormatError(path.string() + ": not a grayscale PFM (Pf)");
    GrayImage img;
    img.width = header_int(in, path);
    img.height = header_int(in, path);
    const std::string scale_tok = header_token(in, path);
    double scale = 0;
    try {
        scale = std::stod(scale_tok);
    } catch (const std::exception&) {
        throw FormatError(path.string() + ": bad PFM scale");
    }
    if (img.width <= 0 || img.height <= 0 || scale == 0) throw FormatError(path.string() + ": bad PFM header");
    const bool little = scale < 0;
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    std::vector<std::uint32_t> raw(n);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n * 4)))
        throw FormatError(path.string() + ": truncated PFM data");
    img.pixels.resize(n);
    const bool swap = little != (std::endian::native == std::endian::little);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            std::uint32_t bits = raw[static_cast<std::size_t>(img.height - 1 - y) * img.width + x];
            if (swap) bits = __builtin_bswap32(bits);
            img.at(x, y) = std::bit_cast<float>(bits);
        }
    return img;
}

void write_pfm(const GrayImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    const bool little = std::endian::native == std::endian::little;
    out << "Pf\n" << image.width << ' ' << image.height << '\n' << (little ? "-1.0" : "1.0") << '\n';
    for (int y = image.height - 1; y >= 0; --y)
        for (int x = 0; x < image.width; ++x) {
            const float v = static_cast<float>(image.at(x, y));
            out.write(reinterpret_cast<const char*>(&v), 4);
        }
    if (!out) throw IoError("failed writing " + path.string());
}

GrayImage read_gray(const std::filesystem::path& path) {
    return path.extension() == ".pfm" ? read_pfm(path) : read_pgm(path);
}

void write_ppm(const RgbImage& image, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(image.rgb.data()), static_cast<std::streamsize>(image.rgb.size()));
    if (!out) throw IoError("failed writing " + path.string());
}

PinholeCamera read_camera_json(const std::filesystem::path& path, double* depth_scale) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open camera sidecar " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        PinholeCamera cam;
        cam.fx = j.at("fx").get<double>();
        cam.fy = j.at("fy").get<double>();
        cam.cx = j.at("cx").get<double>();
        cam.cy = j.at("cy").get<double>();
        if (!(cam.fx > 0) || !(cam.fy > 0)) throw FormatError("focal lengths must be positive");
        if (j.contains("pose")) {
            const auto& m = j.at("pose");
            if (m.size() != 4) throw FormatError("pose must be a 4x4 matrix");
            for (int r = 0; r < 3; ++r) {
                if (m[r].size() != 4) throw FormatError("pose must be a 4x4 matrix");
                for (int c = 0; c < 3; ++c) cam.pose.r[r * 3 + c] = m[r][c].get<double>();
                cam.pose.t[r] = m[r][3].get<double>();
            }
        }
        if (depth_scale) *depth_scale = j.value("depth_scale", 0.001);
        return cam;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(path.string() + ": " + e.what());
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_camera_json(const PinholeCamera& camera, const std::filesystem::path& path, double depth_scale) {
    nlohmann::json j;
    j["fx"] = camera.fx;
    j["fy"] = camera.fy;
    j["cx"] = camera.cx;
    j["cy"] = camera.cy;
    j["depth_scale"] = depth_scale;
    nlohmann::json pose = nlohmann::json::array();
    for (int r = 0; r < 3; ++r)
        pose.push_back({camera.pose.r[r * 3], camera.pose.r[r * 3 + 1], camera.pose.r[r * 3 + 2], camera.pose.t[r]});
    pose.push_back({0.0, 0.0, 0.0, 1.0});
    j["pose"] = pose;
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

DepthImage load_depth(const std::filesystem::path& pgm, const std::filesystem::path& sidecar) {
    if (!std::filesystem::exists(sidecar)) throw ArgumentError("missing camera sidecar " + sidecar.string());
    double scale = 0.001;
    DepthImage d;
    d.camera = read_camera_json(sidecar, &scale);
    const GrayImage img = read_pgm(pgm);
    d.width = img.width;
    d.height = img.height;
    d.depth.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i) d.depth[i] = img.pixels[i] * scale;
    return d;
}

}  // namespace luxsim
