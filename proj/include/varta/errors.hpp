#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace varta {

/// Input data violates a model or format requirement (bad CSV, support violation, ...).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configuration file is malformed; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a valid result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Cholesky factorization hit a non-positive pivot.
class CholeskyError : public NumericalError {
public:
    explicit CholeskyError(std::size_t pivot)
        : NumericalError("matrix is not positive definite (pivot " + std::to_string(pivot) + ")"),
          pivot_(pivot) {}
    [[nodiscard]] std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

/// The companion matrix has spectral radius >= 1.
class NonStationaryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The innovation covariance implied by (A, Sigma) is not positive definite.
class OmegaNotPdError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace varta
