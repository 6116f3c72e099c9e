#pragma once

#include <stdexcept>
#include <string>

namespace pmdq {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class InputDomainError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature ran out of its node budget. Carries the best
/// estimate reached and its error bound.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double estimate, double bound)
        : Error(what), estimate_(estimate), bound_(bound) {}
    double estimate() const { return estimate_; }
    double bound() const { return bound_; }

private:
    double estimate_;
    double bound_;
};

/// A closed form was requested for a configuration it does not cover
/// (nonzero beta or gamma).
class ClosedFormInapplicable : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A recovery protocol could not find the features it needs.
class ProtocolError : public Error {
public:
    using Error::Error;
};

class PairingError : public ProtocolError {
public:
    using ProtocolError::ProtocolError;
};

class FitError : public Error {
public:
    FitError(const std::string& what, double residual) : Error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

}  // namespace pmdq
