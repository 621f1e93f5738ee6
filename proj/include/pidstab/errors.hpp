#pragma once

#include <stdexcept>
#include <string>

namespace pidstab {

struct DimensionError : std::invalid_argument {
    explicit DimensionError(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A plant evaluator returned a non-finite value.
struct EvaluationError : std::runtime_error {
    explicit EvaluationError(const std::string& what) : std::runtime_error(what) {}
};

/// Jacobian symmetry failed on the integration segment; no potential exists.
struct NotConservativeError : std::runtime_error {
    explicit NotConservativeError(const std::string& what) : std::runtime_error(what) {}
};

/// Matrix field fails the integrability condition; it is not a Hessian field.
struct NotHessianFieldError : std::runtime_error {
    explicit NotHessianFieldError(const std::string& what) : std::runtime_error(what) {}
};

/// Gains outside the region a construction requires.
struct RegionError : std::runtime_error {
    explicit RegionError(const std::string& what) : std::runtime_error(what) {}
};

/// A certificate inequality failed or the certificate does not apply.
struct CertificateError : std::runtime_error {
    explicit CertificateError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive step size underflowed.
struct StiffnessError : std::runtime_error {
    explicit StiffnessError(const std::string& what) : std::runtime_error(what) {}
};

/// Quadrature or iteration failed to converge.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed run configuration; message carries the field path.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pidstab
