#pragma once

#include <stdexcept>
#include <string>

namespace tcgm {

/// A parameter or argument lies outside the domain of the operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Arguments were supplied in the wrong order (e.g. u > v for a pair sampler).
class ArgumentOrderError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A numerical procedure (factorization, quadrature) failed to converge.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
    if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace tcgm
