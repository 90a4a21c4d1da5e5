#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace l1ssl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value (bad lambda, k >= n, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Malformed input file. `line` is 1-based, 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), detail_(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }
    /// Message without the line prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::string detail_;
    std::size_t line_;
};

/// Graph violates a structural requirement, e.g. a vertex with zero degree.
class GraphError : public Error {
public:
    GraphError(const std::string& what, std::ptrdiff_t vertex)
        : Error(what), vertex_(vertex) {}
    std::ptrdiff_t vertex() const noexcept { return vertex_; }

private:
    std::ptrdiff_t vertex_;
};

/// Iterative method ran out of budget. Carries the best residual reached.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

}  // namespace l1ssl
