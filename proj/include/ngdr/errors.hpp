#ifndef NGDR_ERRORS_HPP
#define NGDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ngdr {

// Invalid parameter values or violated domain invariants.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched container sizes (schedule/grid/fleet shapes).
class ShapeError : public ValidationError {
public:
    explicit ShapeError(const std::string& msg) : ValidationError(msg) {}
};

// Invalid run configuration (grids, stability limits, window alignment).
class ConfigError : public ValidationError {
public:
    explicit ConfigError(const std::string& msg) : ValidationError(msg) {}
};

// File system or parse failures.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure inside the LP/MILP machinery.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cross-checks between solver output and re-simulation disagree.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ngdr

#endif
