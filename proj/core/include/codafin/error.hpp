#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace codafin {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value outside the domain of an operation (non-positive part, zero variance, ...).
class DomainError : public Error {
public:
    DomainError(const std::string& what, std::size_t index)
        : Error(what), index_(index) {}
    explicit DomainError(const std::string& what) : Error(what) {}

    [[nodiscard]] std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_ = static_cast<std::size_t>(-1);
};

/// Malformed numerator/denominator groups or ratio declarations.
class SpecificationError : public Error {
public:
    using Error::Error;
};

/// Unknown part label or ratio name.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Invalid sequential binary partition.
class StructuralError : public Error {
public:
    using Error::Error;
};

/// Missing required CSV column; raised before any row is processed.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A composition scheme requested on a row lacking the needed components.
class SchemeError : public Error {
public:
    using Error::Error;
};

/// Invalid configuration value. field() names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& what)
        : Error(what), field_(std::move(field)) {}

    [[nodiscard]] const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Fixed-effect design problems. column() names the offending column when known.
class DesignError : public Error {
public:
    DesignError(std::string column, const std::string& what)
        : Error(what), column_(std::move(column)) {}

    [[nodiscard]] const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// Variance-component optimization failure, carrying the criterion trace
/// as (log lambda, criterion) pairs in evaluation order.
class FitError : public Error {
public:
    FitError(const std::string& what, std::vector<std::pair<double, double>> trace)
        : Error(what), trace_(std::move(trace)) {}

    [[nodiscard]] const std::vector<std::pair<double, double>>& trace() const noexcept {
        return trace_;
    }

private:
    std::vector<std::pair<double, double>> trace_;
};

}  // namespace codafin
