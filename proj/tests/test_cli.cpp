// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "luxsim/albedo.hpp"
#include "luxsim/image_io.hpp"
#include "luxsim/mesh.hpp"

using namespace luxsim;
namespace fs = std::filesystem;

namespace {

const fs::path kCli = LUXSIM_CLI;
const fs::path kData = LUXSIM_DATA_DIR;

int run(const std::string& args, const fs::path& log = {}) {
    std::string cmd = kCli.string() + " " + args;
    cmd += log.empty() ? " >/dev/null 2>&1" : " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("luxsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string p(const std::string& name) const { return (dir / name).string(); }

    // 16-bit depth in millimeters plus its sidecar.
    void write_depth(const std::string& stem, int w, int h, const std::function<double(int, int)>& mm,
                     bool sidecar = true) {
        GrayImage img{w, h, {}};
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) img.pixels.push_back(mm(x, y));
        write_pgm16(img, dir / (stem + ".pgm"));
        if (sidecar) write_camera_json(camera(w, h), dir / (stem + ".json"));
    }

    static PinholeCamera camera(int w, int h) {
        PinholeCamera c;
        c.fx = c.fy = 30;
        c.cx = (w - 1) / 2.0;
        c.cy = (h - 1) / 2.0;
        return c;
    }

    fs::path dir;
};

}  // namespace

TEST_F(CliTest, ValidateCube) {
    EXPECT_EQ(run("validate " + (kData / "cube/scene.json").string(), dir / "log"), 0);
    EXPECT_NE(slurp(dir / "log").find("patches 12"), std::string::npos);
}

TEST_F(CliTest, SimulateCubeReport) {
    ASSERT_EQ(run("simulate " + (kData / "cube/scene.json").string() + " --rays 1000 --sampler isocell --out " + p("o")), 0);
    const auto report = nlohmann::json::parse(slurp(dir / "o/report.json"));
    EXPECT_EQ(report["sampler"]["rays_realized"], 1083);
    ASSERT_EQ(report["scenarios"].size(), 1u);
    const auto& sc = report["scenarios"][0];
    EXPECT_LE(sc["solver"]["residual"].get<double>(), sc["solver"]["tol"].get<double>());
    EXPECT_LE(report["form_factors"]["rectify"]["reciprocity_residual"].get<double>(), 1e-9);
    EXPECT_TRUE(report["invariants_ok"].get<bool>());
    EXPECT_EQ(sc["sensors"].size(), 1u);
    const std::string csv = slurp(dir / "o/scenario_on.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "patch_id,area_m2,radiosity,irradiance_lux,illuminance_lux");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
    EXPECT_TRUE(fs::exists(dir / "o/timings.json"));
}

TEST_F(CliTest, ThreadsDoNotChangeOutputs) {
    const std::string cfg = (kData / "cube/scene.json").string();
    ASSERT_EQ(run("--threads 1 simulate " + cfg + " --out " + p("a")), 0);
    ASSERT_EQ(run("--threads 8 simulate " + cfg + " --out " + p("b")), 0);
    EXPECT_EQ(slurp(dir / "a/report.json"), slurp(dir / "b/report.json"));
    EXPECT_EQ(slurp(dir / "a/scenario_on.csv"), slurp(dir / "b/scenario_on.csv"));
    ASSERT_EQ(run("--threads 3 --seed 5 simulate " + cfg + " --sampler mc --out " + p("c")), 0);
    ASSERT_EQ(run("--threads 1 --seed 5 simulate " + cfg + " --sampler mc --out " + p("d")), 0);
    EXPECT_EQ(slurp(dir / "c/report.json"), slurp(dir / "d/report.json"));
}

TEST_F(CliTest, FormFactorCacheRoundTrip) {
    const std::string cfg = (kData / "cube/scene.json").string();
    ASSERT_EQ(run("simulate " + cfg + " --out " + p("a") + " --ff-cache " + p("f.ffm")), 0);
    ASSERT_EQ(run("simulate " + cfg + " --out " + p("b") + " --ff-load " + p("f.ffm")), 0);
    EXPECT_EQ(slurp(dir / "a/scenario_on.csv"), slurp(dir / "b/scenario_on.csv"));
    const auto a = nlohmann::json::parse(slurp(dir / "a/report.json"));
    const auto b = nlohmann::json::parse(slurp(dir / "b/report.json"));
    EXPECT_EQ(a["readings"], b["readings"]);
    EXPECT_EQ(b["form_factors"]["source"], "loaded");
    EXPECT_TRUE(nlohmann::json::parse(slurp(dir / "b/timings.json"))["form_factors_loaded"].get<bool>());
}

TEST_F(CliTest, ExitCodes) {
    EXPECT_EQ(run("simulate " + p("missing.json")), 3);
    std::ofstream(dir / "bad.json") << R"({"mesh": "nowhere.obj"})";
    EXPECT_EQ(run("validate " + p("bad.json")), 1);
    EXPECT_EQ(run("simulate " + p("bad.json")), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("--help"), 0);
    // An iterative solver with one sweep cannot converge.
    fs::copy(kData / "cube", dir / "cube");
    auto cfg = nlohmann::json::parse(slurp(dir / "cube/scene.json"));
    cfg["solver"] = {{"method", "jacobi"}, {"tol", 1e-12}, {"max_iter", 1}};
    std::ofstream(dir / "cube/slow.json") << cfg.dump();
    EXPECT_EQ(run("simulate " + p("cube/slow.json") + " --out " + p("o")), 2);
    EXPECT_EQ(run("simulate " + (kData / "cube/scene.json").string() + " --out /proc/luxsim/x"), 3);
}

TEST_F(CliTest, MeshFromFlatDepth) {
    write_depth("flat", 12, 9, [](int, int) { return 1500; });
    ASSERT_EQ(run("mesh-from-depth " + p("flat.pgm") + " --out " + p("flat.obj"), dir / "log"), 0);
    const TriangleMesh m = load_mesh(dir / "flat.obj");
    EXPECT_EQ(m.faces.size(), 2u * 11 * 8);
    for (const Vec3& v : m.vertices) EXPECT_NEAR(v.z, 1.5, 1e-12);
    EXPECT_NE(slurp(dir / "log").find("faces 176"), std::string::npos);
}

TEST_F(CliTest, MeshFromDepthNeedsSidecar) {
    write_depth("lonely", 4, 4, [](int, int) { return 1000; }, false);
    EXPECT_EQ(run("mesh-from-depth " + p("lonely.pgm") + " --out " + p("x.obj")), 1);
}

TEST_F(CliTest, MeshFromStepDepth) {
    write_depth("step", 10, 6, [](int x, int) { return x < 5 ? 1000 : 2000; });
    ASSERT_EQ(run("mesh-from-depth " + p("step.pgm") + " --median-radius 0 --edge-threshold 0.2 --out " +
                      p("step.obj"),
                  dir / "log"),
              0);
    const TriangleMesh m = load_mesh(dir / "step.obj");
    // Columns 0-4 and 5-9 each give 4 × 5 cells; the straddling column is culled.
    EXPECT_EQ(m.faces.size(), 2u * (4 * 5 + 4 * 5));
    EXPECT_NE(slurp(dir / "log").find("faces 80"), std::string::npos);
}

TEST_F(CliTest, AlbedoRoundTrip) {
    const int w = 24, h = 18;
    write_depth("depth", w, h, [](int, int) { return 2000; });
    const PinholeCamera cam = camera(w, h);
    const double levels[] = {0.2, 0.5, 0.8};
    const Vec3 lights[] = {{-1, -0.5, 0}, {1, -0.5, 0.2}, {0, 1, 0.1}};
    nlohmann::json cfg = {{"depth", "depth.pgm"}, {"camera", "depth.json"}, {"ambient", 0.0}};
    for (int k = 0; k < 3; ++k) {
        GrayImage img{w, h, {}};
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const Vec3 q = cam.backproject(x, y, 2.0);
                const Vec3 d = lights[k] - q;
                const double d2 = dot(d, d);
                img.pixels.push_back(levels[x * 3 / w] * (-d.z / std::sqrt(d2)) * 1000 / (4 * M_PI * d2));
            }
        const std::string name = "light" + std::to_string(k) + ".pfm";
        write_pfm(img, dir / name);
        cfg["images"].push_back({{"path", name},
                                 {"light_position", {lights[k].x, lights[k].y, lights[k].z}},
                                 {"flux", 1000}});
    }
    std::ofstream(dir / "albedo.json") << cfg.dump();
    ASSERT_EQ(run("albedo " + p("albedo.json") + " --out " + p("rho")), 0);
    const AlbedoMap m = load_albedo_map(dir / "rho.pfm", dir / "rho_mask.pgm");
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            ASSERT_TRUE(m.is_valid(x, y));
            EXPECT_NEAR(m.at(x, y), levels[x * 3 / w], 1e-6);
        }

    cfg["images"] = nlohmann::json::array();
    std::ofstream(dir / "none.json") << cfg.dump();
    EXPECT_EQ(run("albedo " + p("none.json") + " --out " + p("x")), 1);

    GrayImage small{5, 5, std::vector<double>(25, 1.0)};
    write_pfm(small, dir / "small.pfm");
    cfg["images"] = {{{"path", "small.pfm"}, {"light_position", {0, 0, 0}}, {"flux", 1}}};
    std::ofstream(dir / "mismatch.json") << cfg.dump();
    EXPECT_EQ(run("albedo " + p("mismatch.json") + " --out " + p("x")), 1);
}

TEST_F(CliTest, Heatmap) {
    const std::string cfg = (kData / "cube/scene.json").string();
    ASSERT_EQ(run("simulate " + cfg + " --out " + p("o")), 0);
    const std::string mesh = (kData / "cube/cube.obj").string();
    ASSERT_EQ(run("heatmap --mesh " + mesh + " --csv " + p("o/scenario_on.csv") + " --scale 0:500 --out " + p("a.ppm")), 0);
    ASSERT_EQ(run("heatmap --mesh " + mesh + " --csv " + p("o/scenario_on.csv") + " --scale 0:500 --out " + p("b.ppm")), 0);
    const std::string a = slurp(dir / "a.ppm");
    EXPECT_EQ(a.substr(0, 2), "P6");
    EXPECT_EQ(a, slurp(dir / "b.ppm"));
    std::ofstream(dir / "empty.csv") << "";
    EXPECT_EQ(run("heatmap --mesh " + mesh + " --csv " + p("empty.csv") + " --out " + p("c.ppm")), 1);
    EXPECT_EQ(run("heatmap --mesh " + mesh + " --csv " + p("o/scenario_on.csv") + " --scale 5 --out " + p("c.ppm")), 1);
}
