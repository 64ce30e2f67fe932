// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#include "luxsim/radiosity.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "luxsim/error.hpp"

namespace luxsim {

std::string to_string(SolverMethod m) {
    switch (m) {
        case SolverMethod::automatic: return "auto";
        case SolverMethod::direct: return "direct";
        case SolverMethod::jacobi: return "jacobi";
        case SolverMethod::gauss_seidel: return "gauss-seidel";
    }
    return "?";
}

SolverMethod parse_solver_method(const std::string& s) {
    if (s == "auto") return SolverMethod::automatic;
    if (s == "direct") return SolverMethod::direct;
    if (s == "jacobi") return SolverMethod::jacobi;
    if (s == "gauss-seidel" || s == "gs") return SolverMethod::gauss_seidel;
    throw ArgumentError("unknown solver '" + s + "' (expected auto, direct, jacobi or gauss-seidel)");
}

double RadiositySystem::coefficient(std::size_t i, std::size_t j) const {
    return (i == j ? 1.0 : 0.0) - rho[i] * ff->at(i, j);
}

std::vector<double> RadiositySystem::matrix() const {
    const std::size_t n = size();
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = coefficient(i, j);
    return m;
}

namespace {

void check_albedo(std::span<const double> rho) {
    for (std::size_t i = 0; i < rho.size(); ++i)
        if (!(rho[i] >= 0 && rho[i] < 1))
            throw ArgumentError("albedo of patch " + std::to_string(i) + " is " + std::to_string(rho[i]) +
                                "; must lie in [0, 1)");
}

// Σ_{j≠i} f_ij x_j
double off_diagonal_dot(const FormFactorMatrix& ff, std::size_t i, std::span<const double> x) {
    const auto row = ff.row(i);
    double s = 0;
    for (std::size_t j = 0; j < ff.n; ++j)
        if (j != i) s += row[j] * x[j];
    return s;
}

double residual_norm(const FormFactorMatrix& ff, std::span<const double> rho, std::span<const double> r,
                     std::span<const double> e) {
    double worst = 0;
    for (std::size_t i = 0; i < ff.n; ++i) {
        const double lhs = (1.0 - rho[i] * ff.at(i, i)) * r[i] - rho[i] * off_diagonal_dot(ff, i, r);
        worst = std::max(worst, std::abs(lhs - e[i]));
    }
    return worst;
}

}  // namespace

RadiositySystem assemble(std::span<const double> rho, const FormFactorMatrix& ff, std::span<const double> emission) {
    if (rho.size() != ff.n || emission.size() != ff.n)
        throw ArgumentError("albedo/emission size does not match the form-factor matrix");
    check_albedo(rho);
    for (double e : emission)
        if (!(e >= 0) || !std::isfinite(e)) throw ArgumentError("emission must be finite and >= 0");
    RadiositySystem sys;
    sys.ff = &ff;
    sys.rho.assign(rho.begin(), rho.end());
    sys.rhs.assign(emission.begin(), emission.end());
    return sys;
}

RadiositySystem assemble(std::span<const Patch> patches, const FormFactorMatrix& ff) {
    std::vector<double> rho, e;
    for (const Patch& p : patches) {
        rho.push_back(p.albedo);
        e.push_back(p.emission);
    }
    return assemble(rho, ff, e);
}

struct RadiositySolver::Lu {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

RadiositySolver::RadiositySolver(const FormFactorMatrix& ff, std::vector<double> rho, SolverMethod method,
                                 double tol, int max_iter)
    : ff_(&ff), rho_(std::move(rho)), method_(method), tol_(tol), max_iter_(max_iter) {
    if (rho_.size() != ff.n) throw ArgumentError("albedo size does not match the form-factor matrix");
    check_albedo(rho_);
    if (!(tol_ > 0) || max_iter_ < 1) throw ArgumentError("solver needs tol > 0 and max_iter >= 1");
    if (method_ == SolverMethod::automatic)
        method_ = ff.n <= kDirectSolverLimit ? SolverMethod::direct : SolverMethod::gauss_seidel;

    const std::size_t n = ff.n;
    if (method_ == SolverMethod::direct) {
        Eigen::MatrixXd a(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    (i == j ? 1.0 : 0.0) - rho_[i] * ff.at(i, j);
        lu_ = std::make_unique<Lu>();
        lu_->lu.compute(a);
        const double rcond = lu_->lu.rcond();
        if (!(rcond > 1e-14)) throw NumericalError("radiosity matrix is singular (rcond " + std::to_string(rcond) + ")");
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double off = 0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) off += std::abs(rho_[i] * ff.at(i, j));
            if (!(off < 1.0 - rho_[i] * ff.at(i, i)))
                throw NumericalError("radiosity matrix is not diagonally dominant in row " + std::to_string(i) +
                                     "; iterative solvers need it (use the direct solver)");
        }
    }
}

RadiositySolver::~RadiositySolver() = default;
RadiositySolver::RadiositySolver(RadiositySolver&&) noexcept = default;

RadiositySolution RadiositySolver::solve(std::span<const double> emission) const {
    const FormFactorMatrix& ff = *ff_;
    const std::size_t n = ff.n;
    if (emission.size() != n) throw ArgumentError("emission size does not match the form-factor matrix");

    RadiositySolution sol;
    sol.solver = method_;
    sol.emission.assign(emission.begin(), emission.end());
    std::vector<double>& r = sol.radiosity;

    if (method_ == SolverMethod::direct) {
        Eigen::VectorXd b(n);
        for (std::size_t i = 0; i < n; ++i) b(static_cast<Eigen::Index>(i)) = emission[i];
        const Eigen::VectorXd x = lu_->lu.solve(b);
        r.assign(x.data(), x.data() + n);
        for (double v : r)
            if (!std::isfinite(v)) throw NumericalError("direct solve produced non-finite radiosity");
        sol.residual = residual_norm(ff, rho_, r, emission);
    } else if (method_ == SolverMethod::jacobi) {
        r.assign(emission.begin(), emission.end());
        std::vector<double> next(n);
        double res = 0;
        for (int it = 0;; ++it) {
            res = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const double diag = 1.0 - rho_[i] * ff.at(i, i);
                const double gathered = emission[i] + rho_[i] * off_diagonal_dot(ff, i, r);
                res = std::max(res, std::abs(diag * r[i] - gathered));
                next[i] = gathered / diag;
            }
            if (res <= tol_) {
                sol.iterations = it;
                break;
            }
            if (it == max_iter_) throw NumericalError("Jacobi did not converge", res);
            r.swap(next);
        }
        sol.residual = res;
    } else {
        r.assign(emission.begin(), emission.end());
        double res = residual_norm(ff, rho_, r, emission);
        int it = 0;
        while (res > tol_) {
            if (it == max_iter_) throw NumericalError("Gauss-Seidel did not converge", res);
            ++it;
            for (std::size_t i = 0; i < n; ++i)
                r[i] = (emission[i] + rho_[i] * off_diagonal_dot(ff, i, r)) / (1.0 - rho_[i] * ff.at(i, i));
            res = residual_norm(ff, rho_, r, emission);
        }
        sol.iterations = it;
        sol.residual = res;
    }

    sol.irradiance.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = ff.row(i);
        double h = 0;
        for (std::size_t j = 0; j < n; ++j) h += row[j] * r[j];
        sol.irradiance[i] = h;
    }
    sol.illuminance = sol.irradiance;
    return sol;
}

RadiositySolution solve(const RadiositySystem& system, SolverMethod method, double tol, int max_iter) {
    if (!system.ff) throw ArgumentError("radiosity system has no form-factor matrix");
    return RadiositySolver(*system.ff, system.rho, method, tol, max_iter).solve(system.rhs);
}

std::vector<double> illuminance(const RadiositySolution& solution, std::span<const Patch> patches) {
    if (patches.size() != solution.irradiance.size())
        throw ArgumentError("patch count does not match the solution");
    return solution.irradiance;
}

double illuminance_from_radiosity(double radiosity, double emission, double rho) {
    if (!(rho > 0)) throw ArgumentError("illuminance from radiosity needs rho > 0");
    return (radiosity - emission) / rho;
}

double radiance_to_illuminance(double radiance, double rho) {
    if (!(rho > 0)) throw ArgumentError("radiance conversion needs rho > 0");
    return radiance * std::numbers::pi / rho;
}

double luxmeter_lux(const FormFactorMatrix& ff, const RadiositySolution& solution, PatchId sensor) {
    if (sensor >= ff.n || solution.radiosity.size() != ff.n)
        throw ArgumentError("unknown sensor patch " + std::to_string(sensor));
    const std::vector<double> row = ff.readout_row(sensor);
    double lux = 0;
    for (std::size_t j = 0; j < ff.n; ++j) lux += row[j] * solution.radiosity[j];
    return lux;
}

}  // namespace luxsim
