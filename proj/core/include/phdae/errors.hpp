#pragma once

#include <stdexcept>
#include <string>

namespace phdae {

/// Base class for all library-raised runtime failures.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A linear solve produced an unusable result (non-finite entries or an
/// unacceptably large residual), typically because the system matrix is
/// numerically singular.
class SingularSystemError : public Error {
public:
    explicit SingularSystemError(const std::string& what) : Error(what) {}
};

/// The stage iteration of an implicit step failed to converge.
class NewtonDivergenceError : public Error {
public:
    explicit NewtonDivergenceError(const std::string& what) : Error(what) {}
};

/// Malformed configuration, parameter or state input.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

} // namespace phdae
