#pragma once

#include <stdexcept>
#include <string>

namespace srnlsd {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

/// A symmetric factorization met a pivot at or below its tolerance.
class NotPositiveDefinite : public Error {
public:
    NotPositiveDefinite(const std::string& what, std::size_t pivot_index, double pivot)
        : Error(what), pivot_index_(pivot_index), pivot_(pivot) {}

    [[nodiscard]] std::size_t pivot_index() const noexcept { return pivot_index_; }
    [[nodiscard]] double pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_index_;
    double pivot_;
};

/// A transform was applied outside its domain (e.g. log of a nonpositive value).
class DomainError : public Error {
public:
    using Error::Error;
};

class LagTooLarge : public Error {
public:
    using Error::Error;
};

class NonpositiveMean : public Error {
public:
    using Error::Error;
};

class InvalidDf : public Error {
public:
    using Error::Error;
};

/// Malformed text input; carries a 1-based location when one is known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row = 0, std::size_t column = 0)
        : Error(what), row_(row), column_(column) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

}  // namespace srnlsd
