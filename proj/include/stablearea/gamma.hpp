#ifndef STABLEAREA_GAMMA_HPP
#define STABLEAREA_GAMMA_HPP

#include "stablearea/bigfloat.hpp"

namespace stablearea::coeffs {

/// Gamma function (Lanczos approximation with reflection for x < 1/2).
/// Every Gamma evaluation in the library routes through here so that
/// cross-module identities see identical rounding.
double gamma_fn(double x);

/// log |Gamma(x)| with the sign of Gamma(x) optionally reported.
double lgamma_fn(double x, int* sign = nullptr);

/// Pochhammer symbol (x)_n = x (x+1) ... (x+n-1), with (x)_0 = 1.
double pochhammer(double x, int n);

/// Gamma in extended precision (MPFR), at the thread-default precision.
BigFloat gamma_big(const BigFloat& x);

}  // namespace stablearea::coeffs

#endif
