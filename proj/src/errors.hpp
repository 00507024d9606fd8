#pragma once

#include <stdexcept>
#include <string>

namespace freeconv {

/// Input violates a measure or configuration invariant.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A transform was requested at a point where it is not defined
/// (on the support, on an atom, at a zero of m for F).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Iterative solver, ladder continuation or detection failed to converge.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace freeconv
