#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mocheck {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text; carries a 1-based source position when known.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line = 0, std::size_t column = 0)
        : Error(line == 0 ? message
                          : "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed input that violates a semantic invariant (probabilities, totality, ...).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Caller passed arguments outside an operation's precondition.
class ArgumentError : public Error {
public:
    using Error::Error;
};

}  // namespace mocheck
