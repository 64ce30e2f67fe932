// Copyright 2026 The luxsim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace luxsim {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid caller-supplied argument (bad ray budget, non-unit normal, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when not applicable.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t line = 0)
        : Error(line ? what + " (line " + std::to_string(line) + ")" : what),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Geometry that cannot be used: no faces, degenerate triangles, ...
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Linear-algebra failure: singular system, non-convergence, infeasible closure.
class NumericalError : public Error {
public:
    NumericalError(const std::string& what, double residual = 0.0)
        : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// File system failure.
class IoError : public Error {
public:
    using Error::Error;
};

/// Scene validation failure carrying every violation found.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : Error(join(violations)), violations_(std::move(violations)) {}
    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "scene validation failed:";
        for (const auto& m : v) s += "\n  - " + m;
        return s;
    }
    std::vector<std::string> violations_;
};

}  // namespace luxsim
