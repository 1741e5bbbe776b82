#pragma once

#include <stdexcept>
#include <string>

namespace dg {

struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive step size fell below the hard floor (1e-14).
struct StepUnderflow : NumericalError {
    using NumericalError::NumericalError;
};

/// Newton (or fixed-point) iteration failed to reach tolerance.
struct NoConvergence : NumericalError {
    using NumericalError::NumericalError;
};

/// Adaptive quadrature exceeded its refinement depth limit.
struct QuadratureNonConvergence : NumericalError {
    using NumericalError::NumericalError;
};

/// Curve refinement would exceed the configured vertex budget.
struct VertexBudgetExceeded : NumericalError {
    using NumericalError::NumericalError;
};

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Tangent vector too small to define curvature.
struct DegenerateTangent : DomainError {
    using DomainError::DomainError;
};

/// Fewer fold points found than requested.
struct InsufficientFolds : DomainError {
    using DomainError::DomainError;
};

/// Consecutive fold spacings must be positive for the log-linear fit.
struct DegenerateFit : DomainError {
    using DomainError::DomainError;
};

/// Curve cannot be represented as a graph x1(x2) on the requested window.
struct NotGraphLike : DomainError {
    using DomainError::DomainError;
};

/// Region construction failed (e.g. boundary not simple).
struct GeometryFailure : DomainError {
    using DomainError::DomainError;
};

}  // namespace dg
