// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "luxsim/error.hpp"
#include "luxsim/radiosity.hpp"
#include "oracles.hpp"

using namespace luxsim;

namespace {

FormFactorMatrix dense(std::size_t n, std::vector<double> values, std::vector<double> areas = {}) {
    FormFactorMatrix ff;
    ff.n = n;
    ff.values = std::move(values);
    ff.areas = areas.empty() ? std::vector<double>(n, 1.0) : std::move(areas);
    ff.escape.assign(n, 0.0);
    return ff;
}

// The exact matrix of a closed enclosure with uniform radiosity exchange:
// f_ij = a_j / Σa, which is reciprocal and closed.
FormFactorMatrix uniform_enclosure(std::size_t n) {
    return dense(n, std::vector<double>(n * n, 1.0 / n));
}

double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0, m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
        m = std::max(m, std::abs(b[i]));
    }
    return d / m;
}

}  // namespace

TEST(Assemble, ZeroAlbedoIsIdentity) {
    const FormFactorMatrix ff = uniform_enclosure(4);
    const std::vector<double> rho(4, 0.0), e{1, 0, 2, 0};
    const RadiositySystem sys = assemble(rho, ff, e);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(sys.coefficient(i, j), i == j ? 1.0 : 0.0);
    const RadiositySolution sol = solve(sys, SolverMethod::direct, 1e-12, 100);
    EXPECT_EQ(sol.radiosity, e);
}

TEST(Assemble, TwoPatchMatrix) {
    const FormFactorMatrix ff = dense(2, {0, 1, 1, 0});
    const std::vector<double> rho{0.5, 0.5}, e{1, 0};
    EXPECT_EQ(assemble(rho, ff, e).matrix(), (std::vector<double>{1, -0.5, -0.5, 1}));
}

TEST(Assemble, AlbedoMustBeBelowOne) {
    const FormFactorMatrix ff = uniform_enclosure(2);
    const std::vector<double> e{1, 1};
    EXPECT_THROW(assemble(std::vector<double>{0.5, 1.0}, ff, e), ArgumentError);
    EXPECT_THROW(assemble(std::vector<double>{-0.1, 0.5}, ff, e), ArgumentError);
    EXPECT_THROW(assemble(std::vector<double>{0.5, 0.5}, ff, std::vector<double>{1, -1}), ArgumentError);
}

TEST(Assemble, FromPatches) {
    auto patches = derive_patches(oracle::unit_cube(), 0.25, NormalOrientation::inward);
    patches[3].emission = 5;
    const FormFactorMatrix ff = uniform_enclosure(12);
    const RadiositySystem sys = assemble(patches, ff);
    EXPECT_EQ(sys.rhs[3], 5.0);
    EXPECT_EQ(sys.rho[0], 0.25);
    EXPECT_DOUBLE_EQ(sys.coefficient(0, 0), 1 - 0.25 / 12);
    EXPECT_DOUBLE_EQ(sys.coefficient(0, 1), -0.25 / 12);
}

TEST(Solve, UniformEnclosureIsGeometricSeries) {
    const FormFactorMatrix ff = uniform_enclosure(12);
    const std::vector<double> rho(12, 0.5), e(12, 1.0);
    for (SolverMethod m : {SolverMethod::direct, SolverMethod::jacobi, SolverMethod::gauss_seidel}) {
        const RadiositySolution s = solve(assemble(rho, ff, e), m, 1e-13, 1000);
        for (double r : s.radiosity) EXPECT_NEAR(r, 2.0, 1e-9);
        for (double h : s.irradiance) EXPECT_NEAR(h, 2.0, 1e-9);
    }
}

TEST(Solve, SolversAgreeWithNeumannOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const std::size_t n = 5 + seed * 2;
        const auto sys = oracle::random_system(n, 0.9, seed);
        const FormFactorMatrix ff = dense(n, sys.F, sys.areas);
        const RadiositySystem a = assemble(sys.rho, ff, sys.e);
        const auto direct = solve(a, SolverMethod::direct, 1e-12, 1);
        const auto jacobi = solve(a, SolverMethod::jacobi, 1e-12, 100000);
        const auto gs = solve(a, SolverMethod::gauss_seidel, 1e-12, 100000);
        EXPECT_LE(max_rel_diff(jacobi.radiosity, direct.radiosity), 1e-8);
        EXPECT_LE(max_rel_diff(gs.radiosity, direct.radiosity), 1e-8);
        const auto oracle_r = oracle::neumann_series(sys.F, sys.rho, sys.e);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(direct.radiosity[i], oracle_r[i], 1e-6);
        EXPECT_LE(jacobi.residual, 1e-12);
        EXPECT_LE(gs.residual, 1e-12);
        EXPECT_GT(jacobi.iterations, 0);
        EXPECT_LE(gs.iterations, jacobi.iterations);
    }
}

TEST(Solve, EquationResidualAndSigns) {
    const auto sys = oracle::random_system(40, 0.85, 77);
    const FormFactorMatrix ff = dense(40, sys.F, sys.areas);
    const auto s = solve(assemble(sys.rho, ff, sys.e), SolverMethod::gauss_seidel, 1e-10, 10000);
    for (std::size_t i = 0; i < 40; ++i) {
        EXPECT_NEAR(s.radiosity[i] - s.emission[i] - sys.rho[i] * s.irradiance[i], 0.0, 1e-9);
        EXPECT_GE(s.radiosity[i], s.emission[i] - 1e-10);
    }
}

TEST(Solve, Monotone) {
    const auto sys = oracle::random_system(30, 0.8, 5);
    const FormFactorMatrix ff = dense(30, sys.F, sys.areas);
    const RadiositySolver solver(ff, sys.rho, SolverMethod::direct, 1e-12, 1);
    const auto base = solver.solve(sys.e);
    auto e2 = sys.e;
    e2[7] += 10;
    const auto more = solver.solve(e2);
    for (std::size_t i = 0; i < 30; ++i) EXPECT_GE(more.radiosity[i], base.radiosity[i] - 1e-12);
}

TEST(Solve, Superposition) {
    const auto sys = oracle::random_system(25, 0.85, 9);
    const FormFactorMatrix ff = dense(25, sys.F, sys.areas);
    std::vector<double> a(25, 0.0), b(25, 0.0), ab(25, 0.0);
    a[1] = ab[1] = 30;
    b[4] = ab[4] = 12;
    for (SolverMethod m : {SolverMethod::direct, SolverMethod::gauss_seidel, SolverMethod::jacobi}) {
        const double tol = 1e-9;
        const RadiositySolver s(ff, sys.rho, m, tol, 100000);
        const auto ra = s.solve(a), rb = s.solve(b), rab = s.solve(ab);
        for (std::size_t i = 0; i < 25; ++i)
            EXPECT_NEAR(rab.radiosity[i], ra.radiosity[i] + rb.radiosity[i], 2 * tol * 10);
    }
}

TEST(Solve, IterativeNonConvergenceCarriesResidual) {
    const auto sys = oracle::random_system(20, 0.89, 3);
    const FormFactorMatrix ff = dense(20, sys.F, sys.areas);
    try {
        solve(assemble(sys.rho, ff, sys.e), SolverMethod::jacobi, 1e-14, 2);
        FAIL() << "expected NumericalError";
    } catch (const NumericalError& e) {
        EXPECT_GT(e.residual(), 1e-14);
    }
}

TEST(Solve, SingularDirect) {
    // rho = 1 is rejected up front, so build the singularity from a row sum > 1.
    const FormFactorMatrix ff = dense(2, {0, 2, 2, 0});
    EXPECT_THROW(RadiositySolver(ff, {0.5, 0.5}, SolverMethod::direct, 1e-9, 1), NumericalError);
    EXPECT_THROW(RadiositySolver(ff, {0.5, 0.5}, SolverMethod::jacobi, 1e-9, 1), NumericalError);
}

TEST(Solve, AutomaticPicksDirectForSmallSystems) {
    const FormFactorMatrix ff = uniform_enclosure(3);
    EXPECT_EQ(RadiositySolver(ff, {0.1, 0.2, 0.3}, SolverMethod::automatic, 1e-9, 10).method(), SolverMethod::direct);
    EXPECT_EQ(parse_solver_method("gauss-seidel"), SolverMethod::gauss_seidel);
    EXPECT_EQ(parse_solver_method("auto"), SolverMethod::automatic);
    EXPECT_THROW(parse_solver_method("cg"), ArgumentError);
}

TEST(Illuminance, Conversions) {
    EXPECT_DOUBLE_EQ(illuminance_from_radiosity(2, 1, 0.5), 2.0);
    EXPECT_NEAR(radiance_to_illuminance(100, 0.5), 628.3185307179587, 1e-9);
    EXPECT_THROW(radiance_to_illuminance(1, 0), ArgumentError);
}

TEST(Illuminance, MatchesRadiosityFormAndExcludesEmission) {
    const auto sys = oracle::random_system(15, 0.8, 12);
    const FormFactorMatrix ff = dense(15, sys.F, sys.areas);
    const auto s = solve(assemble(sys.rho, ff, sys.e), SolverMethod::direct, 1e-12, 1);
    auto patches = derive_patches(oracle::unit_cube(), 0.5, NormalOrientation::inward);
    patches.resize(12);
    EXPECT_THROW(illuminance(s, patches), ArgumentError);
    for (std::size_t i = 0; i < 15; ++i) {
        if (sys.rho[i] > 0.05) {
            EXPECT_NEAR(illuminance_from_radiosity(s.radiosity[i], s.emission[i], sys.rho[i]), s.illuminance[i], 1e-8);
        }
        EXPECT_EQ(s.illuminance[i], s.irradiance[i]);
    }
}

TEST(Luxmeter, FlatEnclosureReadsTwo) {
    const FormFactorMatrix ff = uniform_enclosure(6);
    const auto s = solve(assemble(std::vector<double>(6, 0.5), ff, std::vector<double>(6, 1.0)),
                         SolverMethod::direct, 1e-12, 1);
    EXPECT_NEAR(luxmeter_lux(ff, s, 2), 2.0, 1e-12);
    EXPECT_THROW(luxmeter_lux(ff, s, 6), ArgumentError);
}

TEST(Luxmeter, GainsScaleTheRow) {
    FormFactorMatrix ff = uniform_enclosure(4);
    ff.sensor_gains.push_back({1, {0.5, 0.0, 1.0, 0.25}});
    ff.lsc_applied = true;
    const auto s = solve(assemble(std::vector<double>(4, 0.0), ff, std::vector<double>{4, 8, 12, 16}),
                         SolverMethod::direct, 1e-12, 1);
    EXPECT_DOUBLE_EQ(luxmeter_lux(ff, s, 1), 0.25 * (0.5 * 4 + 1.0 * 12 + 0.25 * 16));
    EXPECT_DOUBLE_EQ(luxmeter_lux(ff, s, 0), 10.0);
}

TEST(Luxmeter, ShadowedSensorDirectOnly) {
    // Sensor 0 sees only patch 2; the luminaire is patch 1.
    const FormFactorMatrix ff = dense(3, {0, 0, 1, 0, 0, 1, 0.5, 0.5, 0});
    const auto s = solve(assemble(std::vector<double>(3, 0.0), ff, std::vector<double>{0, 100, 0}),
                         SolverMethod::direct, 1e-12, 1);
    EXPECT_EQ(luxmeter_lux(ff, s, 0), 0.0);
}
