#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace setr {

enum class ErrorKind {
    Domain,
    NonConvergence,
    NonFiniteIntegrand,
    TailUndefined,
    DivergentExpectation,
    Validation,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. `kind()` lets front ends map
/// failures onto exit codes without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    /// Numerical failures as opposed to bad input.
    bool is_numerical() const noexcept {
        return kind_ == ErrorKind::NonConvergence ||
               kind_ == ErrorKind::NonFiniteIntegrand ||
               kind_ == ErrorKind::DivergentExpectation;
    }

private:
    ErrorKind kind_;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorKind::Domain, what) {}
};

class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& what)
        : Error(ErrorKind::NonConvergence, what) {}
};

class NonFiniteIntegrand : public Error {
public:
    explicit NonFiniteIntegrand(const std::string& what)
        : Error(ErrorKind::NonFiniteIntegrand, what) {}
};

class TailUndefined : public Error {
public:
    explicit TailUndefined(const std::string& what)
        : Error(ErrorKind::TailUndefined, what) {}
};

class DivergentExpectation : public Error {
public:
    explicit DivergentExpectation(const std::string& what)
        : Error(ErrorKind::DivergentExpectation, what) {}
};

/// Raised by config parsing; `field()` is a dotted path such as "premium.p_per_day".
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& what)
        : Error(ErrorKind::Validation, field.empty() ? what : field + ": " + what),
          field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorKind::Io, what) {}
};

#define SETR_REQUIRE(cond, ErrorType, msg) \
    do {                                   \
        if (!(cond)) throw ErrorType(msg); \
    } while (false)

}  // namespace setr
