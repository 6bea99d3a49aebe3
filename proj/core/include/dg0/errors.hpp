#pragma once

#include <stdexcept>
#include <string>

namespace dg0 {

/// Precondition or argument violations (bad sizes, indices, parameters).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Mesh fails admissibility (degenerate cells, hanging nodes, ...).
class InvalidMesh : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Coefficient field violates a structural hypothesis at a sample.
class InvalidField : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough samples/levels to perform the requested estimate.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A linear solve or iteration failed to reach its tolerance.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    explicit NumericFailure(const std::string& what)
        : std::runtime_error(what), residual_(-1.0) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// A configured size/work budget would be exceeded.
class ResourceLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or unresolvable experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invariant broken inside the library itself.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace dg0
