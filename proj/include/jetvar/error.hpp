#pragma once

#include <stdexcept>
#include <string>

namespace jetvar {

/// Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class IncompatibleBundle : public Error
{
public:
    using Error::Error;
};

class UnsupportedOrder : public Error
{
public:
    using Error::Error;
};

class UnsupportedStructure : public Error
{
public:
    using Error::Error;
};

class DegenerateDimension : public Error
{
public:
    using Error::Error;
};

class PreconditionError : public Error
{
public:
    using Error::Error;
};

/// Thrown by the Bergmann-Bianchi gate; the message carries the nonzero components.
class BianchiObstruction : public Error
{
public:
    using Error::Error;
};

class NotASymmetry : public Error
{
public:
    NotASymmetry(std::string const& message, std::string residual)
        : Error(message), residual_(std::move(residual))
    {}

    std::string const& residual() const noexcept { return residual_; }

private:
    std::string residual_;
};

class ParseError : public Error
{
public:
    ParseError(std::string const& message, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column)
    {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace jetvar
