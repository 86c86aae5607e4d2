#pragma once

#include <stdexcept>
#include <string>

namespace drokit {

/// Out-of-range or otherwise invalid parameter value (bad bin width, n = 0, ...).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Violated precondition on data crossing a module boundary: length mismatch,
/// off-simplex probability vector, empty loss vector.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed textual input, e.g. a CSV cell that does not parse as a real.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally unusable input: missing column, empty body, degenerate support.
class SchemaError : public std::runtime_error {
public:
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// A point violates strict feasibility where an interior point is required.
/// Carries the index of the first violated constraint when known.
class FeasibilityError : public std::runtime_error {
public:
    explicit FeasibilityError(const std::string& what, int constraint_index = -1)
        : std::runtime_error(what), index_(constraint_index) {}

    int constraint_index() const noexcept { return index_; }

private:
    int index_;
};

/// Internal solver inconsistency (dual recovery off the simplex, oracle asked
/// to run beyond its scale limit, step length collapsed).
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace drokit
