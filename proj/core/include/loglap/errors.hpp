#pragma once

#include <stdexcept>
#include <string>

namespace loglap {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
    virtual const char* kind() const noexcept { return "error"; }
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain_error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}
    std::size_t position() const noexcept { return position_; }
    const char* kind() const noexcept override { return "parse_error"; }

private:
    std::size_t position_;
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "validation_error"; }
};

class QuadratureError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "quadrature_error"; }
};

// The discrete form is not positive definite, so the Poisson problem has no solution.
class NotCoerciveError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "not_coercive"; }
};

}  // namespace loglap
