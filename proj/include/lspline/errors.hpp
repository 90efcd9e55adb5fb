#pragma once

#include <stdexcept>
#include <string>

namespace lspline {

/// Base class for all numerical failures raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Characteristic-polynomial root refinement did not converge.
class RootFindingFailure : public Error { public: using Error::Error; };

/// Wronskian matrix numerically singular (reciprocal condition below threshold).
class SingularWronskian : public Error { public: using Error::Error; };

/// Adaptive quadrature exhausted its subdivision budget.
class QuadratureFailure : public Error { public: using Error::Error; };

/// Test function violates the boundary conditions at the left endpoint.
class BoundaryViolation : public Error { public: using Error::Error; };

/// Design matrix T does not have full column rank.
class RankDeficientT : public Error { public: using Error::Error; };

/// M = K + lambda D^{-1} is numerically singular (lambda = 0 with singular K).
class SingularM : public Error { public: using Error::Error; };

/// An (m+1) x m block of T is rank deficient; no usable banded null vector.
class DegenerateBlock : public Error { public: using Error::Error; };

/// Banded solve requested for functionals that are not all point evaluations.
class NotPointEval : public Error { public: using Error::Error; };

/// Iterative fit did not converge within its iteration budget.
class NonConvergence : public Error { public: using Error::Error; };

/// Banded Cholesky hit a nonpositive pivot.
class CholeskyFailure : public Error { public: using Error::Error; };

/// Covariance Gram matrix singular with zero noise variance.
class SingularGram : public Error { public: using Error::Error; };

}  // namespace lspline
