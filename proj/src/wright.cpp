#include "stablearea/wright.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>

#include "stablearea/coeffs.hpp"
#include "stablearea/errors.hpp"
#include "wright_internal.hpp"

namespace stablearea::wright {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Threshold on xi = x^{1+1/alpha} above which the extended-precision
// evaluators switch from the series to the asymptotic expansion. Below it the
// series cancellation headroom (~2 xi / ln 2 bits) stays cheap; above it the
// optimally truncated expansion is already accurate to ~1e-28 relative.
constexpr double kBigSwitch = 160.0;
constexpr int kBigAsymMaxTerms = 64;

double xi_of(const StableIndex& a, double x) { return std::pow(x, a.one_plus_inv()); }

// Optimally truncated asymptotic sums C(xi) = sum (-1)^p c_p xi^{-p} and
// D(xi) = sum (-1)^p d_p xi^{-p}; stops at the smallest term and reports it.
double asym_sum(const StableIndex& a, double xi, bool use_d, double* smallest) {
  auto tab = coeffs::table_for(a);
  double sum = 0.0, prev = 1e308, tpow = 1.0;
  int p = 0;
  for (;; ++p) {
    double coef = use_d ? tab->d(p) : tab->c(p);
    double t = coef * tpow;
    if (std::fabs(t) >= prev) break;
    sum += (p & 1) ? -t : t;
    prev = std::fabs(t);
    tpow /= xi;
    if (prev < 1e-18 * std::fabs(sum) || p >= 63) {
      ++p;
      break;
    }
  }
  if (smallest) *smallest = (use_d ? std::fabs(tab->d(p)) : std::fabs(tab->c(p))) *
                            std::pow(xi, -static_cast<double>(p));
  return sum;
}

double phi_prefactor_log(const StableIndex& a, double x, bool derivative) {
  double power = derivative ? (3.0 - a.alpha()) / (2.0 * a.alpha())
                            : (1.0 - a.alpha()) / (2.0 * a.alpha());
  return -0.5 * std::log(2.0 * kPi * a.alpha()) + power * std::log(x) -
         a.alpha_frac() * xi_of(a, x);
}

EvalResult phi_family_asym_auto(const StableIndex& a, double x, bool derivative) {
  double xi = xi_of(a, x);
  double smallest = 0.0;
  double sum = asym_sum(a, xi, derivative, &smallest);
  double pre = std::exp(phi_prefactor_log(a, x, derivative));
  double v = pre * sum;
  if (derivative) v = -v;  // leading sign (-1)^{p+1}
  return {v, pre * (smallest + 1e-16 * std::fabs(sum)), Route::asymptotic};
}

// log of the n-th Watson term of Psi at x (all terms positive).
double psi_watson_log_term(const StableIndex& a, double lx, int n) {
  double ap1 = a.one_plus_alpha();
  return std::lgamma(1.0 + ap1 * n) - std::lgamma(n + 1.0) - n * std::log(ap1) -
         (n * ap1 + 1.0) * lx - std::log(kPi);
}

EvalResult psi_asym_auto(const StableIndex& a, double x, bool derivative) {
  double lx = std::log(x);
  double ap1 = a.one_plus_alpha();
  double sum = 0.0, prev = 1e308;
  int n = 0;
  for (;; ++n) {
    double lt = psi_watson_log_term(a, lx, n);
    double t = std::exp(lt);
    if (t >= prev) break;
    if (derivative) t *= -(n * ap1 + 1.0) / x;
    sum += t;
    prev = std::exp(lt);
    if (prev < 1e-18 * std::fabs(sum) || n >= 63) {
      ++n;
      break;
    }
  }
  double omitted = std::exp(psi_watson_log_term(a, lx, n));
  if (derivative) omitted *= (n * ap1 + 1.0) / x;
  return {sum, omitted + 1e-16 * std::fabs(sum), Route::asymptotic};
}

EvalResult route_eval(const StableIndex& a, double x, const EvalConfig& cfg, int trig,
                      bool derivative) {
  if (!std::isfinite(x)) throw InvalidInput("wright: non-finite argument");
  if (x > 0.0 && xi_of(a, x) >= cfg.asymptotic_switchover) {
    if (trig == 0) return phi_family_asym_auto(a, x, derivative);
    return psi_asym_auto(a, x, derivative);
  }
  auto sd = detail::series_double(a, x, trig, derivative, cfg.max_series_terms,
                                  cfg.target_abs_tol);
  if (sd.converged && sd.abs_err <= cfg.target_abs_tol)
    return {sd.value, sd.abs_err, Route::series};
  try {
    unsigned bits = cfg.series_precision_bits ? cfg.series_precision_bits : 192;
    PrecisionGuard guard(bits);
    BigFloat v = detail::series_big(a, BigFloat(x), trig, derivative,
                                    cfg.max_series_terms);
    double dv = v.convert_to<double>();
    return {dv, std::fabs(dv) * 4.4e-16 + 1e-300, Route::series};
  } catch (const NonConvergence&) {
    // quadrature backstop
    EvalConfig qcfg = cfg;
    qcfg.target_abs_tol = std::max(cfg.target_abs_tol, 1e-14);
    EvalResult q;
    switch (trig * 2 + (derivative ? 1 : 0)) {
      case 0: q = phi_quadrature(a, x, qcfg); break;
      case 1: q = phi_prime_quadrature(a, x, qcfg); break;
      case 2: q = psi_quadrature(a, x, qcfg); break;
      default: q = psi_prime_quadrature(a, x, qcfg); break;
    }
    if (q.abs_error > 1e3 * qcfg.target_abs_tol)
      throw NonConvergence("wright: series and quadrature both failed tolerance");
    return q;
  }
}

}  // namespace

EvalResult phi(const StableIndex& a, double x, const EvalConfig& cfg) {
  return route_eval(a, x, cfg, 0, false);
}
EvalResult psi(const StableIndex& a, double x, const EvalConfig& cfg) {
  return route_eval(a, x, cfg, 1, false);
}
EvalResult phi_prime(const StableIndex& a, double x, const EvalConfig& cfg) {
  return route_eval(a, x, cfg, 0, true);
}
EvalResult psi_prime(const StableIndex& a, double x, const EvalConfig& cfg) {
  return route_eval(a, x, cfg, 1, true);
}

double phi_asymptotic(const StableIndex& a, double x, int terms) {
  if (!(x > 0.0)) throw InvalidInput("phi_asymptotic: requires x > 0");
  if (terms < 1) throw InvalidInput("phi_asymptotic: requires terms >= 1");
  auto tab = coeffs::table_for(a);
  double xi = xi_of(a, x);
  double sum = 0.0, tpow = 1.0;
  for (int p = 0; p < terms; ++p) {
    double t = tab->c(p) * tpow;
    sum += (p & 1) ? -t : t;
    tpow /= xi;
  }
  return std::exp(phi_prefactor_log(a, x, false)) * sum;
}

double phi_prime_asymptotic(const StableIndex& a, double x, int terms) {
  if (!(x > 0.0)) throw InvalidInput("phi_prime_asymptotic: requires x > 0");
  if (terms < 1) throw InvalidInput("phi_prime_asymptotic: requires terms >= 1");
  auto tab = coeffs::table_for(a);
  double xi = xi_of(a, x);
  double sum = 0.0, tpow = 1.0;
  for (int p = 0; p < terms; ++p) {
    double t = tab->d(p) * tpow;
    sum += (p & 1) ? t : -t;  // (-1)^{p+1}
    tpow /= xi;
  }
  return std::exp(phi_prefactor_log(a, x, true)) * sum;
}

double psi_asymptotic(const StableIndex& a, double x, int terms) {
  if (!(x > 0.0)) throw InvalidInput("psi_asymptotic: requires x > 0");
  if (terms < 1) throw InvalidInput("psi_asymptotic: requires terms >= 1");
  double lx = std::log(x);
  double sum = 0.0;
  for (int n = 0; n < terms; ++n) sum += std::exp(psi_watson_log_term(a, lx, n));
  return sum;
}

double log_phi(const StableIndex& a, double x, const EvalConfig& cfg) {
  if (!(x >= 0.0)) throw InvalidInput("log_phi: requires x >= 0");
  if (x > 0.0 && xi_of(a, x) >= cfg.asymptotic_switchover) {
    double sum = asym_sum(a, xi_of(a, x), false, nullptr);
    return phi_prefactor_log(a, x, false) + std::log(sum);
  }
  double v = phi(a, x, cfg).value;
  if (!(v > 0.0)) throw PoleError("log_phi: nonpositive Phi value");
  return std::log(v);
}

double phi_log_derivative(const StableIndex& a, double x, const EvalConfig& cfg) {
  if (!(x >= 0.0)) throw InvalidInput("phi_log_derivative: requires x >= 0");
  if (x > 0.0 && xi_of(a, x) >= cfg.asymptotic_switchover) {
    double c = asym_sum(a, xi_of(a, x), false, nullptr);
    double d = asym_sum(a, xi_of(a, x), true, nullptr);
    return -std::pow(x, 1.0 / a.alpha()) * d / c;
  }
  double ph = phi(a, x, cfg).value;
  if (ph == 0.0) throw PoleError("phi_log_derivative: Phi vanished");
  return phi_prime(a, x, cfg).value / ph;
}

EvalResultC f_alpha(const StableIndex& a, std::complex<double> lambda,
                    const EvalConfig& cfg) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
    throw InvalidInput("f_alpha: non-finite argument");
  // F(lambda) = pi sum_n (-1)^n A_n e^{i phase_n} lambda^n with
  // phase_n = pi (2-alpha)(n+1) / (2(1+alpha)).
  const double ap1 = a.one_plus_alpha();
  const double phase0 = kPi * (2.0 - a.alpha()) / (2.0 * ap1);
  const double az = std::abs(lambda);
  const double th = std::arg(lambda);
  auto s = detail::strand_double(a, 256);
  std::complex<double> sum = 0.0;
  double sum_abs = 0.0, prev = 1e308;
  int shrinking = 0;
  bool converged = (az == 0.0);
  if (converged) {
    double mag = std::exp(s->logmag[0]);
    sum = kPi * mag * std::complex<double>(std::cos(phase0), std::sin(phase0));
    return {sum, std::abs(sum) * 1e-15, Route::series};
  }
  const double laz = std::log(az);
  int n = 0;
  for (; n < cfg.max_series_terms && !converged; ++n) {
    if (n >= static_cast<int>(s->logmag.size())) s = detail::strand_double(a, n + 1);
    double mag = std::exp(s->logmag[n] + n * laz);
    double ang = phase0 * (n + 1.0) + n * th;
    double sg = (n & 1) ? -1.0 : 1.0;
    sum += sg * mag * std::complex<double>(std::cos(ang), std::sin(ang));
    sum_abs += mag;
    if (mag < prev)
      ++shrinking;
    else
      shrinking = 0;
    prev = mag;
    if (shrinking >= 3 && mag < 1e-18 * (sum_abs + 1e-300)) converged = true;
  }
  double err = kPi * (sum_abs * 4.4e-16 + prev);
  if (converged && err <= std::max(cfg.target_abs_tol, 1e-11) * 10.0)
    return {kPi * sum, err, Route::series};
  if (lambda.real() >= 0.0) return f_alpha_quadrature(a, lambda, cfg);
  if (!converged) throw NonConvergence("f_alpha: series exhausted its term budget");
  return {kPi * sum, err, Route::series};
}

std::complex<double> phi_series_complex(const StableIndex& a, std::complex<double> z) {
  return detail::series_complex(a, z, 0, false, 40000);
}

std::complex<double> psi_series_complex(const StableIndex& a, std::complex<double> z) {
  return detail::series_complex(a, z, 1, false, 40000);
}

BigFloat phi_series_big(const StableIndex& a, const BigFloat& x) {
  return detail::series_big(a, x, 0, false, 2000000);
}
BigFloat psi_series_big(const StableIndex& a, const BigFloat& x) {
  return detail::series_big(a, x, 1, false, 2000000);
}
BigFloat phi_prime_series_big(const StableIndex& a, const BigFloat& x) {
  return detail::series_big(a, x, 0, true, 2000000);
}
BigFloat psi_prime_series_big(const StableIndex& a, const BigFloat& x) {
  return detail::series_big(a, x, 1, true, 2000000);
}

BigComplex phi_series_bigc(const StableIndex& a, const BigComplex& z) {
  return detail::series_bigc(a, z, 0, false, 2000000);
}
BigComplex psi_series_bigc(const StableIndex& a, const BigComplex& z) {
  return detail::series_bigc(a, z, 1, false, 2000000);
}
BigComplex phi_prime_series_bigc(const StableIndex& a, const BigComplex& z) {
  return detail::series_bigc(a, z, 0, true, 2000000);
}
BigComplex psi_prime_series_bigc(const StableIndex& a, const BigComplex& z) {
  return detail::series_bigc(a, z, 1, true, 2000000);
}

namespace {

// Extended-precision asymptotic sums; returns false if the smallest-term
// floor is above the requested precision (caller then falls back to the
// series when that is affordable).
bool big_asym(const StableIndex& a, const BigFloat& x, bool psi_family,
              bool derivative, unsigned target_bits, BigFloat* out) {
  PrecisionGuard guard(target_bits + 64);
  const BigFloat al(a.alpha());
  const BigFloat ap1 = al + 1;
  BigFloat lx = log(x);
  BigFloat sum = 0, prev;
  bool first = true;
  BigFloat achieved;
  if (!psi_family) {
    BigFloat xi = pow(x, 1 + 1 / al);
    auto tab = coeffs::table_for(a, target_bits + 96);
    BigFloat tpow = 1;
    int p = 0;
    for (; p < kBigAsymMaxTerms; ++p) {
      BigFloat coef = derivative ? tab->d_big(p) : tab->c_big(p);
      BigFloat t = coef * tpow;
      BigFloat ta = fabs(t);
      if (!first && ta >= prev) break;
      sum += (p & 1) ? -t : t;
      prev = ta;
      first = false;
      tpow /= xi;
      if (ta < ldexp(fabs(sum), -static_cast<int>(target_bits) - 16)) break;
    }
    achieved = prev / fabs(sum);
    BigFloat power = derivative ? (3 - al) / (2 * al) : (1 - al) / (2 * al);
    BigFloat pre = exp(-al / ap1 * pow(x, 1 + 1 / al) + power * lx) /
                   sqrt(2 * boost::math::constants::pi<BigFloat>() * al);
    *out = pre * sum * (derivative ? -1 : 1);
  } else {
    const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
    BigFloat lap1 = log(ap1);
    int n = 0;
    for (; n < kBigAsymMaxTerms; ++n) {
      BigFloat lt = lgamma(1 + ap1 * n) - lgamma(BigFloat(n + 1)) - n * lap1 -
                    (n * ap1 + 1) * lx - log(pi_big);
      BigFloat t = exp(lt);
      if (!first && t >= prev) break;
      BigFloat term = t;
      if (derivative) term *= -(n * ap1 + 1) / x;
      sum += term;
      prev = t;
      first = false;
      if (t < ldexp(fabs(sum), -static_cast<int>(target_bits) - 16)) break;
    }
    achieved = prev / fabs(sum);
    *out = sum;
  }
  return achieved < ldexp(BigFloat(1), -static_cast<int>(target_bits) / 2 - 8);
}

BigFloat big_hybrid(const StableIndex& a, const BigFloat& x, int trig,
                    bool derivative) {
  const unsigned digits = BigFloat::default_precision();
  const unsigned bits = digits_to_bits(digits);
  double xd = x.convert_to<double>();
  double xi = xd > 0.0 ? std::pow(xd, a.one_plus_inv()) : 0.0;
  if (xd > 0.0 && xi >= kBigSwitch) {
    BigFloat v;
    if (big_asym(a, x, trig == 1, derivative, bits, &v)) return v;
    if (xi > 1400.0) return v;  // series headroom unaffordable; best effort
  }
  return detail::series_big(a, x, trig, derivative, 2000000);
}

}  // namespace

BigFloat phi_big(const StableIndex& a, const BigFloat& x) {
  return big_hybrid(a, x, 0, false);
}
BigFloat psi_big(const StableIndex& a, const BigFloat& x) {
  return big_hybrid(a, x, 1, false);
}
BigFloat phi_prime_big(const StableIndex& a, const BigFloat& x) {
  return big_hybrid(a, x, 0, true);
}
BigFloat psi_prime_big(const StableIndex& a, const BigFloat& x) {
  return big_hybrid(a, x, 1, true);
}

}  // namespace stablearea::wright
