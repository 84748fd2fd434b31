#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace flowshoot {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ZeroVectorError : public Error {
public:
    using Error::Error;
};

/// Torus quantities are singular on the symmetry axis x1 = x2 = 0.
class TorusAxisError : public Error {
public:
    using Error::Error;
};

/// |ψ − μ∇g(x)| vanished, so the maximizing control is undefined.
class NontrivialityViolation : public Error {
public:
    using Error::Error;
};

/// |⟨∇g, v⟩| reached the boundary gradient norm; the multiplier formula degenerates.
class RegularityViolation : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t position, const std::string& message)
        : Error("syntax error at position " + std::to_string(position) + ": " + message), position_(position) {}

    /// Zero-based character offset into the source string.
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

class UnknownIdentifier : public Error {
public:
    UnknownIdentifier(std::size_t position, const std::string& name)
        : Error("unknown identifier '" + name + "' at position " + std::to_string(position)), name_(name) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// Division by zero or a domain violation while evaluating an expression.
class EvalError : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class EmptyField : public Error {
public:
    using Error::Error;
};

class MalformedExtremal : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& key, const std::string& reason)
        : Error(key.empty() ? reason : key + ": " + reason), key_(key) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace flowshoot
