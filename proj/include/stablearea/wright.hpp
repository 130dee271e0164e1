#ifndef STABLEAREA_WRIGHT_HPP
#define STABLEAREA_WRIGHT_HPP

#include <complex>

#include "stablearea/bigfloat.hpp"
#include "stablearea/eval.hpp"
#include "stablearea/stable_index.hpp"

namespace stablearea::wright {

// ---------------------------------------------------------------------------
// Route-selected evaluators. The series route is used below the switchover
// x^{1+1/alpha} >= cfg.asymptotic_switchover and escalates to an
// extended-precision series when the double-precision sum cancels too
// heavily; above the switchover the asymptotic expansion is truncated at its
// smallest term. The quadrature route backs the series up on failure and is
// exposed separately for cross-route checks.
// ---------------------------------------------------------------------------

EvalResult phi(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult psi(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult phi_prime(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult psi_prime(const StableIndex& a, double x, const EvalConfig& cfg = {});

/// Quadrature of the oscillatory integral representation. For alpha < 2 this
/// integrates over the imaginary-axis form (envelope decays like
/// exp(-sin(pi alpha/2) z^{1+alpha}/(1+alpha))); at alpha = 2 that envelope
/// degenerates, so the contour is rotated onto the rays where the integrand
/// decays for every alpha in (1,2].
EvalResult phi_quadrature(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult psi_quadrature(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult phi_prime_quadrature(const StableIndex& a, double x, const EvalConfig& cfg = {});
EvalResult psi_prime_quadrature(const StableIndex& a, double x, const EvalConfig& cfg = {});

// ---------------------------------------------------------------------------
// N-term truncations of the large-x expansions, exactly as written:
//   Phi  ~ (2 pi alpha)^{-1/2} x^{(1-alpha)/(2 alpha)} e^{-a x^{1+1/a}/(1+...)}
//          sum_p (-1)^p c_p x^{-p(1+1/alpha)}
//   Phi' ~ same with x^{(3-alpha)/(2 alpha)} and (-1)^{p+1} d_p
//   Psi  ~ (1/pi) sum_n Gamma(1+(1+alpha)n)/(n! (1+alpha)^n) x^{-n(1+alpha)-1}
// ---------------------------------------------------------------------------

double phi_asymptotic(const StableIndex& a, double x, int terms);
double phi_prime_asymptotic(const StableIndex& a, double x, int terms);
double psi_asymptotic(const StableIndex& a, double x, int terms);

/// log Phi_alpha(x) for x >= 0, usable far beyond double range.
double log_phi(const StableIndex& a, double x, const EvalConfig& cfg = {});

/// Phi'_alpha(x) / Phi_alpha(x), robust for all x >= 0.
double phi_log_derivative(const StableIndex& a, double x, const EvalConfig& cfg = {});

// ---------------------------------------------------------------------------
// Auxiliary complex transform F_alpha(lambda), the Laplace transform in t of
// exp(e^{i pi alpha/2} t^{1+alpha}/(1+alpha)). Satisfies
//   F(lambda) = pi i^{-alpha/(1+alpha)} (Psi + i Phi)(i^{-alpha/(1+alpha)} lambda)
// with principal branches i^theta = exp(i pi theta / 2).
// ---------------------------------------------------------------------------

EvalResultC f_alpha(const StableIndex& a, std::complex<double> lambda,
                    const EvalConfig& cfg = {});

/// Quadrature of the defining integral (cross-check route). Requires
/// Re(lambda) >= 0.
EvalResultC f_alpha_quadrature(const StableIndex& a, std::complex<double> lambda,
                               const EvalConfig& cfg = {});

// ---------------------------------------------------------------------------
// Independent Airy oracle: quadrature of the rotated contour integral at
// alpha = 2. Never touches the series or asymptotic code paths.
// ---------------------------------------------------------------------------

double airy_reference(double x);
double airy_prime_reference(double x);

// ---------------------------------------------------------------------------
// Extended-precision evaluators (series below xi = x^{1+1/alpha} ~ 160, the
// asymptotic expansion above; both carried at the thread-default precision
// plus whatever cancellation headroom the series needs). These back the
// Laplace inversion and the oracle-grade tests.
// ---------------------------------------------------------------------------

BigFloat phi_big(const StableIndex& a, const BigFloat& x);
BigFloat psi_big(const StableIndex& a, const BigFloat& x);
BigFloat phi_prime_big(const StableIndex& a, const BigFloat& x);
BigFloat psi_prime_big(const StableIndex& a, const BigFloat& x);

/// Series-only variants (no asymptotic switch); x may be negative.
BigFloat phi_series_big(const StableIndex& a, const BigFloat& x);
BigFloat psi_series_big(const StableIndex& a, const BigFloat& x);
BigFloat phi_prime_series_big(const StableIndex& a, const BigFloat& x);
BigFloat psi_prime_series_big(const StableIndex& a, const BigFloat& x);

// Complex series values (entire functions, principal data shared with the
// real caches). Used by the F-identity and the contour inversion method.
std::complex<double> phi_series_complex(const StableIndex& a, std::complex<double> z);
std::complex<double> psi_series_complex(const StableIndex& a, std::complex<double> z);

BigComplex phi_series_bigc(const StableIndex& a, const BigComplex& z);
BigComplex psi_series_bigc(const StableIndex& a, const BigComplex& z);
BigComplex phi_prime_series_bigc(const StableIndex& a, const BigComplex& z);
BigComplex psi_prime_series_bigc(const StableIndex& a, const BigComplex& z);

}  // namespace stablearea::wright

#endif
