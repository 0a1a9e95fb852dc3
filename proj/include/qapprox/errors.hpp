#pragma once

#include <stdexcept>
#include <string>

namespace qapprox {

/// Base class for all domain errors thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Density-matrix input is not Hermitian beyond the validation tolerance.
class NotHermitian : public Error {
public:
    using Error::Error;
};

/// Density-matrix trace differs from 1 beyond the validation tolerance.
class NotUnitTrace : public Error {
public:
    using Error::Error;
};

/// Density matrix has an eigenvalue below the negativity tolerance.
class NotPositive : public Error {
public:
    using Error::Error;
};

/// Target parameter (a, k or phi) outside its admissible range.
class ParamOutOfRange : public Error {
public:
    using Error::Error;
};

/// Amplitude vector too close to zero to normalize.
class ZeroVector : public Error {
public:
    using Error::Error;
};

/// Bloch vector supplied for a pure state is not unit length.
class NotPureState : public Error {
public:
    using Error::Error;
};

/// Mixture weights are negative or do not sum to 1 within tolerance.
class BadWeights : public Error {
public:
    using Error::Error;
};

/// Pair solver requires orthonormal states but the overlap is too large.
class NotOrthonormal : public Error {
public:
    using Error::Error;
};

/// Moment matrix of a quadruple is numerically rank deficient.
class RankDeficient : public Error {
public:
    using Error::Error;
};

/// Free mixing parameter t outside its admissible interval.
class TOutOfRange : public Error {
public:
    using Error::Error;
};

/// KKT residual requested for a mixture on the Bloch-ball surface.
class BoundaryMixture : public Error {
public:
    using Error::Error;
};

/// Planner invoked with an empty candidate set.
class EmptySet : public Error {
public:
    using Error::Error;
};

/// Grid search would exceed the evaluation budget.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, unsigned long long required_evaluations)
        : Error(what), required(required_evaluations) {}

    /// Number of objective evaluations the rejected search would need.
    unsigned long long required;
};

/// Instance document violates the JSON schema (structure, not state values).
class SchemaError : public Error {
public:
    SchemaError(const std::string& what, std::string field_path = {})
        : Error(what), path(std::move(field_path)) {}

    /// JSON-pointer-like location of the offending field, when known.
    std::string path;
};

}  // namespace qapprox
