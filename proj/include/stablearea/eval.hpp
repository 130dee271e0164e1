#ifndef STABLEAREA_EVAL_HPP
#define STABLEAREA_EVAL_HPP

#include <complex>
#include <string>

namespace stablearea {

/// Which evaluation route produced a value.
enum class Route { series, quadrature, asymptotic };

inline const char* route_name(Route r) {
  switch (r) {
    case Route::series: return "series";
    case Route::quadrature: return "quadrature";
    case Route::asymptotic: return "asymptotic";
  }
  return "?";
}

/// A function value together with an absolute error estimate and the route
/// that produced it. The estimate is an honest bound on truncation plus
/// rounding under the route's validity assumptions, not a rigorous interval.
struct EvalResult {
  double value = 0.0;
  double abs_error = 0.0;
  Route route = Route::series;
};

/// Complex-valued variant (used by the auxiliary transform).
struct EvalResultC {
  std::complex<double> value{0.0, 0.0};
  double abs_error = 0.0;
  Route route = Route::series;
};

/// Tunables for the special-function evaluators.
struct EvalConfig {
  /// Target absolute tolerance for series/quadrature termination.
  double target_abs_tol = 1e-13;
  /// Hard cap on series terms before NonConvergence.
  int max_series_terms = 40000;
  /// Gauss-Legendre points per quadrature panel.
  int quadrature_nodes = 20;
  /// The asymptotic route is used when x^{1+1/alpha} exceeds this.
  double asymptotic_switchover = 25.0;
  /// Cap on asymptotic terms (optimal truncation may stop earlier).
  int asymptotic_max_terms = 24;
  /// Mantissa bits for the extended-precision series mode used when the
  /// double-precision series cancels too heavily. 0 = pick automatically.
  unsigned series_precision_bits = 0;
};

}  // namespace stablearea

#endif
