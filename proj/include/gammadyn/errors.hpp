#pragma once

#include <stdexcept>
#include <string>

namespace gammadyn {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Mismatched or non-square matrix dimensions.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& msg) : Error(msg) {}
};

/// Non-finite entry (NaN/Inf) fed into an operation.
class NonFiniteError : public Error {
public:
    explicit NonFiniteError(const std::string& msg) : Error(msg) {}
};

/// Iterative eigensolver failed to converge within its cap.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

/// Matrix numerically singular beyond the configured condition bound.
class SingularMatrixError : public Error {
public:
    explicit SingularMatrixError(const std::string& msg) : Error(msg) {}
};

/// Series truncation index exceeded the configured cap.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& msg) : Error(msg) {}
};

/// Base for domain errors: the input Hamiltonian violates a standing
/// assumption (real spectrum, distinct eigenvalues).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

/// An eigenvalue has imaginary part beyond reality_tol * ||H||.
class SpectrumRealityError : public DomainError {
public:
    explicit SpectrumRealityError(const std::string& msg) : DomainError(msg) {}
};

/// Two eigenvalues closer than gap_tol * ||H||.
class DegeneracyError : public DomainError {
public:
    explicit DegeneracyError(const std::string& msg) : DomainError(msg) {}
};

/// A caller-supplied operand violates a documented precondition.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& msg) : Error(msg) {}
};

/// An internally computed quantity violates an invariant that accepted
/// inputs guarantee.
class InternalConsistencyError : public Error {
public:
    explicit InternalConsistencyError(const std::string& msg) : Error(msg) {}
};

/// Malformed matrix file or report document.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::string code)
        : Error(msg), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace gammadyn
