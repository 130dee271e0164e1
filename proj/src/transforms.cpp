#include "stablearea/transforms.hpp"

#include <cmath>
#include <vector>

#include "stablearea/coeffs.hpp"
#include "stablearea/errors.hpp"
#include "stablearea/gamma.hpp"
#include "stablearea/wright.hpp"

namespace stablearea::transforms {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

using coeffs::gamma_fn;

}  // namespace

double joint_laplace_T0_area(const StableIndex& a, double z, double lambda,
                             double mu) {
  if (!(mu > 0.0)) throw InvalidInput("joint_laplace_T0_area: requires mu > 0");
  if (z < 0.0 || lambda < 0.0)
    throw InvalidInput("joint_laplace_T0_area: requires z >= 0 and lambda >= 0");
  double num_arg = std::pow(mu, a.inv_one_plus()) * (z + lambda / mu);
  double den_arg = lambda * std::pow(mu, -a.alpha_frac());
  double lr = wright::log_phi(a, num_arg) - wright::log_phi(a, den_arg);
  double v = std::exp(lr);
  if (v > 1.0 && v < 1.0 + 1e-12) v = 1.0;
  return v;
}

double mellin_area_T0(const StableIndex& a, double nu) {
  const double al = a.alpha();
  if (!(nu < 1.0 / (1.0 + al)))
    throw InvalidInput("mellin_area_T0: requires nu < 1/(1+alpha)");
  return std::pow(1.0 + al, nu) * gamma_fn(al / (al + 1.0)) *
         gamma_fn(1.0 - (al + 1.0) * nu) /
         (gamma_fn(al / (al + 1.0) - nu) * gamma_fn(1.0 - nu));
}

double hitting_density(const StableIndex& a, double z, double t) {
  if (!(z > 0.0) || !(t > 0.0))
    throw InvalidInput("hitting_density: requires z > 0 and t > 0");
  const double al = a.alpha();
  // scaling reduction to z = 1: p_z(t) = z^{-alpha} p_1(t z^{-alpha})
  const double w = t * std::pow(z, -al);
  const double u = std::pow(w, -1.0 / al);
  const double lu = std::log(u);

  // p_1(w) = (1/(pi w)) sum_{n>=1} (-1)^{n-1} sin(n pi/alpha) G(1+n/alpha) u^n / n!
  auto term_log = [&](int n) {
    return std::lgamma(1.0 + n / al) - std::lgamma(n + 1.0) + n * lu;
  };
  double sum = 0.0, sum_abs = 0.0, prev = 1e308;
  int shrinking = 0, n = 1;
  const int max_terms = 100000;
  for (; n <= max_terms; ++n) {
    double mag = std::exp(term_log(n));
    double s = std::sin(kPi * std::fmod(n / al, 2.0));
    double tterm = ((n - 1) & 1 ? -1.0 : 1.0) * s * mag;
    sum += tterm;
    sum_abs += std::fabs(mag);
    if (mag < prev)
      ++shrinking;
    else
      shrinking = 0;
    prev = mag;
    if (shrinking >= 3 && mag < 1e-20 * (sum_abs + 1e-300)) break;
  }
  if (n > max_terms)
    throw NonConvergence("hitting_density: series budget exhausted");
  // escalate if the alternating sum cancelled away the double mantissa
  if (sum_abs * 4.4e-16 > 1e-13 * std::fabs(sum) || sum <= 0.0) {
    double gap = std::log2(sum_abs / std::max(std::fabs(sum), 1e-300));
    if (gap < 0) gap = 0;
    if (gap > 8000) throw NonConvergence("hitting_density: extreme z/t^{1/alpha}");
    PrecisionGuard guard(static_cast<unsigned>(gap) + 128);
    const BigFloat albig(al);
    const BigFloat ubig = pow(BigFloat(w), -1 / albig);
    const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
    BigFloat bsum = 0, upow = 1, fact = 1;
    BigFloat bprev = 0;
    bool bfirst = true;
    int bshrink = 0;
    for (int m = 1; m <= max_terms; ++m) {
      upow *= ubig;
      fact *= m;
      BigFloat mag = tgamma(1 + BigFloat(m) / albig) * upow / fact;
      BigFloat s = sin(pi_big * fmod(BigFloat(m) / albig, BigFloat(2)));
      bsum += ((m - 1) & 1 ? -1 : 1) * s * mag;
      if (!bfirst && mag < bprev)
        ++bshrink;
      else
        bshrink = 0;
      bfirst = false;
      bprev = mag;
      if (bshrink >= 3 && mag < ldexp(fabs(bsum) + BigFloat(1e-300), -200)) break;
    }
    sum = bsum.convert_to<double>();
  }
  double p1 = sum / (kPi * w);
  return std::pow(z, -al) * p1;
}

double theorem1_rhs(const StableIndex& a, double lambda) {
  if (lambda < 0.0) throw InvalidInput("theorem1_rhs: requires lambda >= 0");
  const double al = a.alpha();
  return al * gamma_fn(1.0 - 1.0 / al) *
         (wright::phi_log_derivative(a, 0.0) - wright::phi_log_derivative(a, lambda));
}

double theorem1_alt_rhs(const StableIndex& a, double lambda) {
  if (lambda < 0.0) throw InvalidInput("theorem1_alt_rhs: requires lambda >= 0");
  const double al = a.alpha();
  return gamma_fn(-1.0 / al) *
         (wright::phi_log_derivative(a, lambda) + std::pow(lambda, 1.0 / al));
}

double h_alpha(const StableIndex& a, double lambda) {
  if (lambda < 0.0) throw InvalidInput("h_alpha: requires lambda >= 0");
  EvalConfig cfg;
  double xi = lambda > 0.0 ? std::pow(lambda, a.one_plus_inv()) : 0.0;
  if (xi >= cfg.asymptotic_switchover) {
    // H = pi Psi' - pi Psi (Phi'/Phi); the ratio form survives the
    // exponential decay of Phi.
    double psi_v = wright::psi(a, lambda, cfg).value;
    double psip_v = wright::psi_prime(a, lambda, cfg).value;
    return kPi * psip_v - kPi * psi_v * wright::phi_log_derivative(a, lambda, cfg);
  }
  double ph = wright::phi(a, lambda, cfg).value;
  if (!(ph > 0.0)) throw PoleError("h_alpha: Phi must be positive");
  double php = wright::phi_prime(a, lambda, cfg).value;
  double ps = wright::psi(a, lambda, cfg).value;
  double psp = wright::psi_prime(a, lambda, cfg).value;
  return kPi * (psp * ph - php * ps) / ph;
}

double h_alpha_asymptotic(const StableIndex& a, double lambda, int terms) {
  if (!(lambda > 0.0)) throw InvalidInput("h_alpha_asymptotic: requires lambda > 0");
  if (terms < 1 || terms > 3)
    throw InvalidInput("h_alpha_asymptotic: terms must be 1..3");
  const double al = a.alpha();
  double v = std::pow(lambda, 1.0 / al - 1.0);
  if (terms >= 2) v -= (al + 1.0) / (2.0 * al) * std::pow(lambda, -2.0);
  if (terms >= 3)
    v += gamma_fn(1.0 + al) * std::pow(lambda, -2.0 - al + 1.0 / al);
  return v;
}

double theorem2_rhs(const StableIndex& a, double lambda) {
  return gamma_fn(1.0 - 1.0 / a.alpha()) * h_alpha(a, lambda);
}

double theorem3_rhs(const StableIndex& a, double lambda) {
  if (lambda < 0.0) throw InvalidInput("theorem3_rhs: requires lambda >= 0");
  return -lambda * h_alpha(a, lambda) - wright::phi_log_derivative(a, lambda);
}

double mean_ex(const StableIndex& a) {
  const double al = a.alpha();
  return 0.5 * (al - 1.0) * gamma_fn(1.0 - 1.0 / al);
}

double second_moment_ex(const StableIndex& a) {
  const double al = a.alpha();
  return gamma_fn(1.0 - 1.0 / al) * (al - 1.0) * (2.0 * al + 1.0) /
         (12.0 * gamma_fn(1.0 + 1.0 / al));
}

double mean_meander(const StableIndex& a) {
  const double al = a.alpha();
  return gamma_fn(1.0 - 1.0 / al) * (al + 1.0) / (2.0 * al);
}

TailAsymptotic tail_meander(const StableIndex& a) {
  a.require_below_two("tail_meander");
  const double al = a.alpha();
  double pre = (al - 1.0) * gamma_fn(1.0 + al) * gamma_fn(1.0 - 1.0 / al) /
               (gamma_fn(2.0 - al) * gamma_fn(2.0 + al - 1.0 / al));
  return {-al, pre};
}

TailAsymptotic tail_conditioned(const StableIndex& a) {
  a.require_below_two("tail_conditioned");
  const double al = a.alpha();
  double pre =
      gamma_fn(1.0 + al) / (gamma_fn(1.0 + al - 1.0 / al) * gamma_fn(2.0 - al));
  return {1.0 - al, pre};
}

namespace {

// Gauss-Legendre panels on [0,1] with refinement; the mellin integrands are
// continuous but have mildly singular derivatives at the endpoints.
template <typename F>
double unit_integral(const F& f, double tol) {
  auto sweep = [&](int np) {
    static const double gx[10] = {-0.9739065285171717, -0.8650633666889845,
                                  -0.6794095682990244, -0.4333953941292472,
                                  -0.1488743389816312, 0.1488743389816312,
                                  0.4333953941292472,  0.6794095682990244,
                                  0.8650633666889845,  0.9739065285171717};
    static const double gw[10] = {0.0666713443086881, 0.1494513491505806,
                                  0.2190863625159820, 0.2692667193099963,
                                  0.2955242247147529, 0.2955242247147529,
                                  0.2692667193099963, 0.2190863625159820,
                                  0.1494513491505806, 0.0666713443086881};
    double total = 0.0;
    double h = 1.0 / np;
    for (int p = 0; p < np; ++p) {
      double mid = (p + 0.5) * h, half = 0.5 * h;
      double acc = 0.0;
      for (int i = 0; i < 10; ++i) acc += gw[i] * f(mid + half * gx[i]);
      total += acc * half;
    }
    return total;
  };
  double prev = sweep(8);
  for (int np = 16; np <= 2048; np *= 2) {
    double cur = sweep(np);
    if (std::fabs(cur - prev) <= tol * (1.0 + std::fabs(cur))) return cur;
    prev = cur;
  }
  throw QuadratureFailure("mellin_meander: lambda-integral did not converge");
}

}  // namespace

double mellin_meander(const StableIndex& a, double nu) {
  const double al = a.alpha();
  const double upper = 1.0 - 1.0 / al;
  if (!(nu > 0.0) || !(nu < upper))
    throw InvalidInput("mellin_meander: requires nu in (0, 1-1/alpha)");
  const double tol = 1e-9;
  // Split at lambda = 1 with a power substitution on each side.
  // Left: lambda = u^{1/nu} turns lambda^{nu-1} H dlambda into (1/nu) H du.
  double left = (1.0 / nu) *
                unit_integral(
                    [&](double u) { return h_alpha(a, std::pow(u, 1.0 / nu)); }, tol);
  // Right: lambda = v^{-1/q}, q = 1 - 1/alpha - nu, giving a bounded
  // integrand (1/q) v^{-nu/q-1} H(v^{-1/q}); evaluated in logs because
  // lambda blows up like v^{-1/q} with q possibly tiny.
  const double q = upper - nu;
  double right = unit_integral(
      [&](double v) {
        double lam_log = -std::log(v) / q;
        double lh;
        if (lam_log > 18.0 * 2.302585) {
          // H ~ lambda^{1/alpha - 1} to better than 1e-12 out here
          lh = (1.0 / al - 1.0) * lam_log;
        } else {
          lh = std::log(h_alpha(a, std::exp(lam_log)));
        }
        return std::exp(std::log(1.0 / q) + (-nu / q - 1.0) * std::log(v) + lh);
      },
      tol);
  double integral = left + right;
  double g1 = gamma_fn(1.0 - 1.0 / al);
  return g1 * integral * (1.0 + al) /
         (al * gamma_fn(nu) * gamma_fn((al - 1.0 - al * nu) / (al + 1.0)));
}

BigFloat phi_ratio_big(const StableIndex& a, const BigFloat& lambda) {
  BigFloat ph = wright::phi_big(a, lambda);
  if (ph <= 0) throw PoleError("phi_ratio_big: Phi must be positive");
  return wright::phi_prime_big(a, lambda) / ph;
}

BigFloat h_alpha_big(const StableIndex& a, const BigFloat& lambda) {
  const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
  BigFloat ps = wright::psi_big(a, lambda);
  BigFloat psp = wright::psi_prime_big(a, lambda);
  return pi_big * psp - pi_big * ps * phi_ratio_big(a, lambda);
}

}  // namespace stablearea::transforms
