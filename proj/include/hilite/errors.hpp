#pragma once

#include <stdexcept>
#include <string>

namespace hilite {

// Error categories map onto CLI exit codes: missing input (2), validation (3),
// internal invariant violation (4).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ParseError : public ValidationError {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : ValidationError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class InvariantError : public Error {
public:
    using Error::Error;
};

} // namespace hilite
