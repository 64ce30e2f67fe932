// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "luxsim/formfactor.hpp"
#include "luxsim/mesh.hpp"

namespace luxsim {

enum class SolverMethod { automatic, direct, jacobi, gauss_seidel };

std::string to_string(SolverMethod m);
/// "auto", "direct", "jacobi", "gauss-seidel".
SolverMethod parse_solver_method(const std::string& s);

/// Above this size `automatic` switches from LU to Gauss-Seidel.
inline constexpr std::size_t kDirectSolverLimit = 2000;

/// The linear system (I - diag(rho) F) r = e. Refers to the form-factor
/// matrix it was assembled from, which must outlive it.
struct RadiositySystem {
    const FormFactorMatrix* ff = nullptr;
    std::vector<double> rho;
    std::vector<double> rhs;  // emission e, lm/m²

    std::size_t size() const { return rho.size(); }
    /// Entry (i, j) of the system matrix: δ_ij - ρ_i f_ij.
    double coefficient(std::size_t i, std::size_t j) const;
    /// Dense row-major system matrix.
    std::vector<double> matrix() const;
};

/// Emission from each patch's `emission` field and reflectance from its
/// albedo. Throws ArgumentError if any albedo is outside [0, 1).
RadiositySystem assemble(std::span<const Patch> patches, const FormFactorMatrix& ff);
RadiositySystem assemble(std::span<const double> rho, const FormFactorMatrix& ff,
                         std::span<const double> emission);

struct RadiositySolution {
    std::vector<double> radiosity;    // r, lm/m²
    std::vector<double> emission;     // e, lm/m²
    std::vector<double> irradiance;   // H = F r, lux
    std::vector<double> illuminance;  // E, lux
    SolverMethod solver = SolverMethod::direct;
    int iterations = 0;
    double residual = 0;              // ‖(I - diag(rho) F) r - e‖∞
};

/// Solver bound to one system matrix; the direct path factorizes once and
/// then serves any number of emission vectors. solve() is const and safe to
/// call concurrently.
class RadiositySolver {
public:
    RadiositySolver(const FormFactorMatrix& ff, std::vector<double> rho, SolverMethod method, double tol,
                    int max_iter);
    ~RadiositySolver();
    RadiositySolver(RadiositySolver&&) noexcept;

    SolverMethod method() const { return method_; }
    RadiositySolution solve(std::span<const double> emission) const;

private:
    struct Lu;
    const FormFactorMatrix* ff_;
    std::vector<double> rho_;
    SolverMethod method_;
    double tol_;
    int max_iter_;
    std::unique_ptr<Lu> lu_;
};

/// Iterative methods stop once ‖Fr - e‖∞ <= tol and throw NumericalError
/// (carrying the last residual) after max_iter sweeps. The direct path throws
/// NumericalError on a singular matrix.
RadiositySolution solve(const RadiositySystem& system, SolverMethod method, double tol, int max_iter);

/// E_i = H_i for every patch.
std::vector<double> illuminance(const RadiositySolution& solution, std::span<const Patch> patches);

/// (r - e) / rho: incident illuminance recovered from radiosity on a
/// reflective patch. Equals H whenever r = e + rho·H holds.
double illuminance_from_radiosity(double radiosity, double emission, double rho);

/// E = L · pi / rho, the Lambertian radiance-to-illuminance conversion.
double radiance_to_illuminance(double radiance, double rho);

struct LuxmeterReading {
    std::string scenario;
    std::string sensor_id;
    PatchId patch = 0;
    double lux = 0;
};

/// Sensor reading Σ_j readout_sj r_j, using the LSC-weighted row where one
/// exists. Throws ArgumentError for a patch outside the matrix.
double luxmeter_lux(const FormFactorMatrix& ff, const RadiositySolution& solution, PatchId sensor);

}  // namespace luxsim
