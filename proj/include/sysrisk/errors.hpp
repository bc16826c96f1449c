#pragma once

#include <stdexcept>
#include <string>

namespace sysrisk {

// Stable numeric codes, mirrored one-to-one by the C API.
enum class ErrorCode : int {
    Ok = 0,
    Config = 1,
    UnknownKey = 2,
    Io = 3,
    EquilibriumViolation = 4,
    DivergentCoupling = 5,
    GridTooCoarse = 6,
    InsufficientTail = 7,
    EmptyRegime = 8,
    WindowTooLong = 9,
    NumericalBlowup = 10,
    Domain = 11,
    Internal = 12,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorCode::Config, what) {}
protected:
    ConfigError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

// Unknown config key (typo guard); a ConfigError so callers can catch either.
class UnknownKeyError : public ConfigError {
public:
    explicit UnknownKeyError(const std::string& what)
        : ConfigError(ErrorCode::UnknownKey, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

// No valid linear equilibrium price impact at these parameters.
class EquilibriumViolation : public Error {
public:
    explicit EquilibriumViolation(const std::string& what)
        : Error(ErrorCode::EquilibriumViolation, what) {}
};

// Coupling r >= 1: performatively unstable region, geometric series diverges.
class DivergentCoupling : public Error {
public:
    explicit DivergentCoupling(const std::string& what)
        : Error(ErrorCode::DivergentCoupling, what) {}
};

// Adjacent sweep steps skipped a fold (fixed-point count jumped by more than 2).
class GridTooCoarse : public Error {
public:
    explicit GridTooCoarse(const std::string& what)
        : Error(ErrorCode::GridTooCoarse, what) {}
};

class InsufficientTail : public Error {
public:
    explicit InsufficientTail(const std::string& what)
        : Error(ErrorCode::InsufficientTail, what) {}
};

class EmptyRegime : public Error {
public:
    explicit EmptyRegime(const std::string& what) : Error(ErrorCode::EmptyRegime, what) {}
};

class WindowTooLong : public Error {
public:
    explicit WindowTooLong(const std::string& what)
        : Error(ErrorCode::WindowTooLong, what) {}
};

// Raised by simulate() when the price/fundamental leave the overflow guard;
// sweep runners catch it and record the run as unstable instead of crashing.
class NumericalBlowup : public Error {
public:
    explicit NumericalBlowup(const std::string& what)
        : Error(ErrorCode::NumericalBlowup, what) {}
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

}  // namespace sysrisk
