#pragma once

#include <stdexcept>
#include <string>

namespace lara {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyTextError : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError : public Error {
public:
    using Error::Error;
};

class UnknownIntentError : public Error {
public:
    using Error::Error;
};

class NoDemonstrationsError : public Error {
public:
    using Error::Error;
};

class TooManyIntentsError : public Error {
public:
    using Error::Error;
};

class MissingSymbolMapError : public Error {
public:
    using Error::Error;
};

class EmptyDemonstrationsError : public Error {
public:
    using Error::Error;
};

class BackendUnavailableError : public Error {
public:
    using Error::Error;
};

class BackendRejectedError : public Error {
public:
    using Error::Error;
};

// File ingestion failure; carries the 1-based line number when one applies.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, long line = -1)
        : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    long line() const noexcept { return line_; }

private:
    long line_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lara
