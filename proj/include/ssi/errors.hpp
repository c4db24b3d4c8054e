#pragma once

#include <stdexcept>
#include <string>

namespace ssi {

// Domain-level failures. CLI maps these to exit code 2 (domain error)
// or 3 (infeasible configuration); anything else is an I/O error (1).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidDimension : DomainError {
    using DomainError::DomainError;
};

struct PerturbationInfeasible : DomainError {
    using DomainError::DomainError;
};

struct EmptySample : DomainError {
    using DomainError::DomainError;
};

struct InvalidValue : DomainError {
    using DomainError::DomainError;
};

struct SchemeSizeMismatch : DomainError {
    using DomainError::DomainError;
};

struct ZeroVariance : DomainError {
    using DomainError::DomainError;
};

struct InvalidIndex : DomainError {
    using DomainError::DomainError;
};

struct DegenerateScheme : DomainError {
    using DomainError::DomainError;
};

struct CorrectionInfeasible : DomainError {
    using DomainError::DomainError;
};

struct TooManyArrangements : DomainError {
    using DomainError::DomainError;
};

struct DegenerateDistribution : DomainError {
    using DomainError::DomainError;
};

struct RawSamplesRequired : DomainError {
    using DomainError::DomainError;
};

struct InvalidTiling : DomainError {
    using DomainError::DomainError;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ssi
