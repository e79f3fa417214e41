#pragma once

#include <stdexcept>
#include <string>

namespace weylgrid {

// Two values built for different dimensions N were combined.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// An argument violates a documented precondition (even N where odd is
// required, invalid Gauss-sum spec, out-of-range label, ...).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A conjugated operator matched no Weyl monomial up to a unimodular scalar.
struct NotAnAutomorphismError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A certified numerical invariant (unitarity, hermiticity, orthonormality,
// eigenpair residual) exceeded its tolerance at construction.
struct CertificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Independent evaluation routes of the same quantity disagreed.
struct ConsistencyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace weylgrid
