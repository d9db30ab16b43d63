#pragma once

#include <stdexcept>
#include <string>

namespace vacrad {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (k <= 0, eps < 1, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition does not hold (e.g. endpoint not asymptotic).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Mismatched operands: different registries, times, wavenumbers, unknown labels.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Tabulated profile evaluated outside its sample range.
class ExtrapolationError : public Error {
public:
    using Error::Error;
};

/// Integration or extraction failed to meet its tolerance.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// Fock-space truncation leaked more probability than the budget allows.
class CutoffError : public NumericalFailure {
public:
    CutoffError(const std::string& what, int suggested_cutoff)
        : NumericalFailure(what), suggested_cutoff_(suggested_cutoff) {}

    int suggested_cutoff() const noexcept { return suggested_cutoff_; }

private:
    int suggested_cutoff_;
};

/// Malformed or invalid run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vacrad
