#ifndef STABLEAREA_TRANSFORMS_HPP
#define STABLEAREA_TRANSFORMS_HPP

#include "stablearea/bigfloat.hpp"
#include "stablearea/eval.hpp"
#include "stablearea/stable_index.hpp"

namespace stablearea::transforms {

/// Leading power-law tail P(A > x) ~ prefactor * x^{exponent}.
struct TailAsymptotic {
  double exponent;
  double prefactor;
};

/// Joint Laplace transform E_z[exp(-lambda T_0 - mu int_0^{T_0} L_s ds)]
///   = Phi(mu^{1/(1+a)} (z + lambda/mu)) / Phi(lambda mu^{-a/(1+a)}).
/// Evaluated through log Phi so it stays finite for arguments far beyond
/// double range.
double joint_laplace_T0_area(const StableIndex& a, double z, double lambda,
                             double mu);

/// Mellin transform E_1[(int_0^{T_0} L)^nu] for nu < 1/(1+alpha).
double mellin_area_T0(const StableIndex& a, double nu);

/// Density of the hitting time T_0 started from z > 0 (positive stable of
/// index 1/alpha), by the convergent series in t^{-1/alpha} after reducing to
/// z = 1 by scaling.
double hitting_density(const StableIndex& a, double z, double t);

// Right-hand sides of the three double Laplace transforms.
double theorem1_rhs(const StableIndex& a, double lambda);
double theorem1_alt_rhs(const StableIndex& a, double lambda);
double theorem2_rhs(const StableIndex& a, double lambda);
double theorem3_rhs(const StableIndex& a, double lambda);

/// H(lambda) = pi (Psi' Phi - Phi' Psi) / Phi.
double h_alpha(const StableIndex& a, double lambda);

/// Large-lambda expansion of H: lambda^{1/a-1} - (a+1)/(2a) lambda^{-2}
/// + Gamma(1+a) lambda^{-2-a+1/a}; terms in 1..3.
double h_alpha_asymptotic(const StableIndex& a, double lambda, int terms = 3);

// Closed-form moments.
double mean_ex(const StableIndex& a);
double second_moment_ex(const StableIndex& a);
double mean_meander(const StableIndex& a);

// Tail asymptotics (require alpha strictly inside (1,2)).
TailAsymptotic tail_meander(const StableIndex& a);
TailAsymptotic tail_conditioned(const StableIndex& a);

/// Fractional meander moment E[A_me^{(1-a+a nu)/(1+a)}] recovered by
/// numerically integrating lambda^{nu-1} H(lambda); nu in (0, 1-1/alpha).
double mellin_meander(const StableIndex& a, double nu);

// Extended-precision building blocks used by the Laplace inversion.
BigFloat h_alpha_big(const StableIndex& a, const BigFloat& lambda);
BigFloat phi_ratio_big(const StableIndex& a, const BigFloat& lambda);  // Phi'/Phi

}  // namespace stablearea::transforms

#endif
