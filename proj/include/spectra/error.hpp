#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectra {

// Base of every error raised by the library. `kind()` is a stable
// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Structural violation of a measure or equation system (always fatal).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error("validation_error", what) {}
};

// Requested operation is not defined for this measure / system variant.
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& what) : Error("unsupported", what) {}
};

// Evaluation point too close to a pole, the branch cut, or outside a map's domain.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain_error", what) {}
};

// A post-condition that the mathematics guarantees was violated numerically.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& what) : Error("internal_error", what) {}
};

// Certification could not decide (winding residual too large, box boundary
// too close to a zero, ambiguous root classification).
class InconclusiveError : public Error {
public:
    explicit InconclusiveError(const std::string& what) : Error("inconclusive", what) {}
};

class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string& what,
                       std::vector<std::complex<double>> best = {},
                       std::vector<double> residuals = {})
        : Error("no_convergence", what), best_(std::move(best)), residuals_(std::move(residuals)) {}

    const std::vector<std::complex<double>>& best_iterates() const noexcept { return best_; }
    const std::vector<double>& residuals() const noexcept { return residuals_; }

private:
    std::vector<std::complex<double>> best_;
    std::vector<double> residuals_;
};

}  // namespace spectra
