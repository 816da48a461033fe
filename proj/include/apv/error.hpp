#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace apv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Not enough observations for the requested statistic.
class InsufficientData : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Missing or malformed column/key in an input file header or config.
class SchemaError : public Error {
public:
    using Error::Error;
};

/// A sale month (or the base month) is not covered by the CPI table.
class CoverageError : public Error {
public:
    CoverageError(int year, int month, const std::string& what)
        : Error(what), year_(year), month_(month) {}

    int year() const noexcept { return year_; }
    int month() const noexcept { return month_; }

private:
    int year_;
    int month_;
};

/// Two medians differ but the pooled standard error is zero.
class DegenerateInference : public Error {
public:
    using Error::Error;
};

/// Design matrix without full column rank. `columns()` is a minimal
/// linearly dependent subset, by label.
class RankDeficient : public Error {
public:
    RankDeficient(std::vector<std::string> columns, const std::string& what)
        : Error(what), columns_(std::move(columns)) {}

    const std::vector<std::string>& columns() const noexcept { return columns_; }

private:
    std::vector<std::string> columns_;
};

/// Fewer rows than columns in a least-squares problem.
class Underdetermined : public Error {
public:
    using Error::Error;
};

}  // namespace apv
