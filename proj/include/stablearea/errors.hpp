#ifndef STABLEAREA_ERRORS_HPP
#define STABLEAREA_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace stablearea {

/// Base class for all numerical errors thrown by this library.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Argument outside the documented domain (non-finite input, alpha out of
/// (1,2], k > n, evaluation at a pole, ...).
struct InvalidInput : Error {
  explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

/// A series or iteration exceeded its term budget without meeting the
/// requested tolerance, and no fallback route succeeded.
struct NonConvergence : Error {
  explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

/// Denominator of a ratio vanished where it should be strictly positive.
struct PoleError : Error {
  explicit PoleError(const std::string& msg) : Error(msg) {}
};

/// An adaptive quadrature failed its own error test.
struct QuadratureFailure : Error {
  explicit QuadratureFailure(const std::string& msg) : Error(msg) {}
};

/// Two inversion node counts disagree beyond tolerance.
struct InversionUnstable : Error {
  explicit InversionUnstable(const std::string& msg) : Error(msg) {}
};

/// Rejection sampling exhausted its attempt budget.
struct RejectionBudgetExceeded : Error {
  explicit RejectionBudgetExceeded(const std::string& msg) : Error(msg) {}
};

/// Importance weights collapsed (effective sample size too small).
struct DegenerateWeights : Error {
  explicit DegenerateWeights(const std::string& msg) : Error(msg) {}
};

/// Not enough extreme samples to fit a tail slope.
struct InsufficientTail : Error {
  explicit InsufficientTail(const std::string& msg) : Error(msg) {}
};

}  // namespace stablearea

#endif
