#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace jobshop {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class DeadlockError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& reason)
        : Error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& reason() const noexcept { return reason_; }

private:
    std::size_t line_;
    std::string reason_;
};

class SerializationError : public Error {
public:
    using Error::Error;
};

class UnknownInstanceError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class NotReadyError : public Error {
public:
    using Error::Error;
};

class CompleteError : public Error {
public:
    using Error::Error;
};

class EmptyActionSetError : public Error {
public:
    using Error::Error;
};

class WidthMismatchError : public Error {
public:
    using Error::Error;
};

class InvalidActionError : public Error {
public:
    using Error::Error;
};

class UnknownNodeTypeError : public Error {
public:
    using Error::Error;
};

class DesyncError : public Error {
public:
    using Error::Error;
};

}  // namespace jobshop
