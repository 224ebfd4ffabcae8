#pragma once

#include <stdexcept>
#include <string>

namespace slowlight {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input violates a documented precondition. Maps to CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Im(lambda) >= 0: no decaying soliton exists.
class InvalidSolitonError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// lambda sits on the branch segment [-i|Omega0|, +i|Omega0|] of k(lambda).
class DegenerateSpectrumError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class GridError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class OutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Operation needs a stopping field (Omega -> 0 as tau -> +inf) or a fully decayed background.
class ScenarioError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Malformed or inconsistent scenario configuration; path names the offending entry.
class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& path, const std::string& what)
        : ValidationError(path + ": " + what), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// Iterative solver failed to reach tolerance. Maps to CLI exit code 2.
class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, double last_residual, int iterations)
        : Error(what), last_residual_(last_residual), iterations_(iterations) {}

    double last_residual() const noexcept { return last_residual_; }
    int iterations() const noexcept { return iterations_; }

private:
    double last_residual_;
    int iterations_;
};

}  // namespace slowlight
