#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "stablearea/errors.hpp"
#include "wright_internal.hpp"

namespace stablearea::wright::detail {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kGrowChunk = 256;

std::mutex g_mu;
std::map<std::uint64_t, std::shared_ptr<const StrandD>> g_strands_d;
std::map<std::pair<std::uint64_t, unsigned>, std::shared_ptr<const StrandBig>> g_strands_big;

std::shared_ptr<StrandD> extend_double(const StrandD* base, const StableIndex& a,
                                       int n_target) {
  auto s = std::make_shared<StrandD>();
  if (base) *s = *base;
  const double ap1 = a.one_plus_alpha();
  const double lp = std::log(ap1) / ap1;
  int n0 = static_cast<int>(s->logmag.size());
  s->logmag.reserve(n_target);
  s->sinv.reserve(n_target);
  s->cosv.reserve(n_target);
  for (int n = n0; n < n_target; ++n) {
    double arg = (1.0 + n) / ap1;
    s->logmag.push_back(std::lgamma(arg) - std::lgamma(n + 1.0) +
                        (n - a.alpha()) * lp - std::log(kPi));
    // reduce (1+n)/(1+a) mod 2 before multiplying by pi
    double red = std::fmod(arg, 2.0);
    s->sinv.push_back(std::sin(kPi * red));
    s->cosv.push_back(std::cos(kPi * red));
  }
  return s;
}

std::shared_ptr<StrandBig> extend_big(const StrandBig* base, const StableIndex& a,
                                      unsigned digits, int n_target) {
  // precondition: caller holds a PrecisionGuard at >= digits
  auto s = std::make_shared<StrandBig>();
  if (base)
    *s = *base;
  else
    s->digits = digits;
  const BigFloat ap1 = BigFloat(1) + BigFloat(a.alpha());
  const BigFloat logp = log(ap1) / ap1;
  const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
  int n0 = static_cast<int>(s->mag.size());
  BigFloat fact = 1;  // (n0-1)!, promoted to n! at the top of each iteration
  for (int i = 2; i <= n0 - 1; ++i) fact *= i;
  for (int n = n0; n < n_target; ++n) {
    if (n >= 1) fact *= n;
    BigFloat arg = (BigFloat(1) + n) / ap1;
    BigFloat mag = tgamma(arg) * exp((BigFloat(n) - a.alpha()) * logp) / (pi_big * fact);
    s->mag.push_back(mag);
    BigFloat red = fmod(arg, BigFloat(2));
    s->sinv.push_back(sin(pi_big * red));
    s->cosv.push_back(cos(pi_big * red));
  }
  return s;
}

}  // namespace

std::shared_ptr<const StrandD> strand_double(const StableIndex& a, int n_min) {
  std::lock_guard<std::mutex> lock(g_mu);
  auto& slot = g_strands_d[a.key()];
  if (!slot || static_cast<int>(slot->logmag.size()) < n_min)
    slot = extend_double(slot.get(), a, n_min + kGrowChunk);
  return slot;
}

std::shared_ptr<const StrandBig> strand_big(const StableIndex& a, unsigned digits,
                                            int n_min) {
  // lock order: precision guard first, then the cache mutex
  PrecisionGuard guard(digits_to_bits(digits));
  std::lock_guard<std::mutex> lock(g_mu);
  auto& slot = g_strands_big[{a.key(), digits}];
  if (!slot || static_cast<int>(slot->mag.size()) < n_min)
    slot = extend_big(slot.get(), a, digits, n_min + kGrowChunk);
  return slot;
}

double peak_log_term(const StableIndex& a, double log_abs_x, bool derivative) {
  // ln|t_n| = ln A_{n+shift} [+ ln(n+1)] + n ln|x| rises to a single hump and
  // then falls; scan with on-demand strand growth.
  int shift = derivative ? 1 : 0;
  auto s = strand_double(a, 64);
  double peak = -1e308;
  int falling = 0;
  for (int n = 0;; ++n) {
    if (n + shift >= static_cast<int>(s->logmag.size()))
      s = strand_double(a, n + shift + 1);
    double lt = s->logmag[n + shift] + n * log_abs_x +
                (derivative ? std::log1p(n) : 0.0);
    if (lt > peak) {
      peak = lt;
      falling = 0;
    } else if (++falling > 8 && lt < peak - 40.0) {
      break;
    }
    if (n > 2000000) break;
  }
  return peak;
}

SeriesOutD series_double(const StableIndex& a, double x, int trig, bool derivative,
                         int max_terms, double tol) {
  SeriesOutD out;
  const int shift = derivative ? 1 : 0;
  const double lax = std::log(std::fabs(x));
  auto s = strand_double(a, 256);
  double sum = 0.0, sum_abs = 0.0;
  double prev_abs = 1e308;
  int shrinking = 0;
  int n = 0;
  for (; n < max_terms; ++n) {
    if (n + shift >= static_cast<int>(s->logmag.size()))
      s = strand_double(a, n + shift + 1);
    double lmag = s->logmag[n + shift] + (derivative ? std::log1p(n) : 0.0);
    double mag = (x == 0.0 && n > 0) ? 0.0 : std::exp(lmag + n * lax);
    const auto& tv = trig ? s->cosv : s->sinv;
    double t = tv[n + shift] * mag;
    // sign of (-1)^{n+shift} x^n
    bool neg = ((n + shift) & 1) != 0;
    if (x < 0.0 && (n & 1)) neg = !neg;
    sum += neg ? -t : t;
    sum_abs += std::fabs(t);
    if (x == 0.0) {
      ++n;
      break;
    }
    double ta = std::fabs(mag);  // envelope of the term, trig-independent
    if (ta < prev_abs)
      ++shrinking;
    else
      shrinking = 0;
    prev_abs = ta;
    if (shrinking >= 3 && ta < 0.05 * tol && ta < 1e-3 * (sum_abs + 1e-300)) {
      ++n;
      out.converged = true;
      break;
    }
  }
  if (x == 0.0) out.converged = true;
  out.value = sum;
  out.sum_abs = sum_abs;
  out.abs_err = 2.0 * prev_abs + sum_abs * 4.4e-16;
  if (n >= max_terms) out.converged = false;
  return out;
}

namespace {

// Required working precision so that the alternating sum keeps target_bits
// significant bits: the hump of |terms| exceeds the result magnitude by the
// cancellation gap, measured with the cheap double-precision strand.
unsigned cancellation_bits(const StableIndex& a, double log_abs_x, bool derivative,
                           double log_result_floor) {
  double peak = peak_log_term(a, log_abs_x, derivative);
  double gap = peak - log_result_floor;
  if (gap < 0) gap = 0;
  return static_cast<unsigned>(gap * 1.4426950408889634) + 8;
}

double log_phi_estimate(const StableIndex& a, double x) {
  // leading asymptotic magnitude of Phi (derivative differs only by a power)
  double xi = std::pow(x, a.one_plus_inv());
  return -a.alpha_frac() * xi + (1.0 - a.alpha()) / (2.0 * a.alpha()) * std::log(x) -
         0.5 * std::log(2.0 * kPi * a.alpha());
}

}  // namespace

BigFloat series_big(const StableIndex& a, const BigFloat& x, int trig,
                    bool derivative, int max_terms) {
  const unsigned target_digits = BigFloat::default_precision();
  const unsigned target_bits = static_cast<unsigned>(target_digits * 3.33) + 4;
  const double xd = x.convert_to<double>();
  const int shift = derivative ? 1 : 0;

  if (xd == 0.0) {
    auto s = strand_big(a, target_digits, shift + 1);
    BigFloat t = (trig ? s->cosv[shift] : s->sinv[shift]) * s->mag[shift];
    if (shift & 1) t = -t;
    return t;
  }

  // Estimate how hard the sum cancels. For x > 0 the result is exponentially
  // small and the asymptotic magnitude is a reliable floor; otherwise start
  // from "O(1)" and let the verification loop below escalate.
  double floor_log = (xd > 0.0) ? log_phi_estimate(a, xd) - 5.0 : 0.0;
  unsigned extra = cancellation_bits(a, std::log(std::fabs(xd)), derivative, floor_log);

  for (int attempt = 0; attempt < 6; ++attempt) {
    unsigned work_bits = target_bits + extra + 64;
    unsigned work_digits = bits_to_digits(work_bits);
    PrecisionGuard guard(work_bits);
    auto s = strand_big(a, work_digits, 256);

    BigFloat sum = 0, sum_abs = 0;
    BigFloat xpow = 1;  // x^n
    BigFloat prev_abs = 0;
    bool first = true;
    int shrinking = 0;
    bool converged = false;
    for (int n = 0; n < max_terms; ++n) {
      if (n + shift >= static_cast<int>(s->mag.size()))
        s = strand_big(a, work_digits, n + shift + 1);
      BigFloat mag = s->mag[n + shift] * xpow;
      if (derivative) mag *= (n + 1);
      BigFloat t = (trig ? s->cosv[n + shift] : s->sinv[n + shift]) * mag;
      if ((n + shift) & 1) t = -t;
      sum += t;
      BigFloat ta = fabs(mag);
      sum_abs += ta;
      if (!first && ta < prev_abs)
        ++shrinking;
      else
        shrinking = 0;
      first = false;
      prev_abs = ta;
      xpow *= x;
      if (shrinking >= 3 && ta < ldexp(sum_abs, -static_cast<int>(work_bits) - 8)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NonConvergence("wright series: term budget exhausted in extended mode");
    // verify the cancellation headroom was sufficient
    if (sum == 0 || sum_abs == 0) return sum;
    long gap = static_cast<long>(
        (log(sum_abs / fabs(sum)) / boost::math::constants::ln_two<BigFloat>())
            .convert_to<double>());
    if (gap < 0) gap = 0;
    if (static_cast<unsigned>(gap) + target_bits + 16 <= work_bits) return sum;
    extra = static_cast<unsigned>(gap) + 64;
  }
  throw NonConvergence("wright series: cancellation escalation failed");
}

BigComplex series_bigc(const StableIndex& a, const BigComplex& z, int trig,
                       bool derivative, int max_terms) {
  const unsigned target_digits = BigFloat::default_precision();
  const unsigned target_bits = static_cast<unsigned>(target_digits * 3.33) + 4;
  const int shift = derivative ? 1 : 0;
  const double az = abs(z).convert_to<double>();
  if (az == 0.0) {
    auto s = strand_big(a, target_digits, shift + 1);
    BigFloat coef = s->mag[shift] * (trig ? s->cosv[shift] : s->sinv[shift]);
    if (shift & 1) coef = -coef;
    return BigComplex{coef, BigFloat(0)};
  }

  unsigned extra = cancellation_bits(a, std::log(az), derivative, 0.0) + 32;
  for (int attempt = 0; attempt < 6; ++attempt) {
    unsigned work_bits = target_bits + extra + 64;
    unsigned work_digits = bits_to_digits(work_bits);
    PrecisionGuard guard(work_bits);
    auto s = strand_big(a, work_digits, 256);

    BigComplex sum;
    BigFloat sum_abs = 0;
    BigComplex zpow{BigFloat(1), BigFloat(0)};
    BigFloat prev_abs = 0;
    bool first = true;
    int shrinking = 0;
    bool converged = false;
    for (int n = 0; n < max_terms; ++n) {
      if (n + shift >= static_cast<int>(s->mag.size()))
        s = strand_big(a, work_digits, n + shift + 1);
      BigFloat coef = s->mag[n + shift] * (trig ? s->cosv[n + shift] : s->sinv[n + shift]);
      if (derivative) coef *= (n + 1);
      if ((n + shift) & 1) coef = -coef;
      BigComplex t = zpow * coef;
      sum += t;
      BigFloat ta = abs(zpow) * fabs(coef);
      sum_abs += ta;
      if (!first && ta < prev_abs)
        ++shrinking;
      else
        shrinking = 0;
      first = false;
      prev_abs = ta;
      zpow = zpow * z;
      if (shrinking >= 3 && ta < ldexp(sum_abs, -static_cast<int>(work_bits) - 8)) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NonConvergence("wright complex series: term budget exhausted");
    BigFloat asum = abs(sum);
    if (asum == 0 || sum_abs == 0) return sum;
    long gap = static_cast<long>(
        (log(sum_abs / asum) / boost::math::constants::ln_two<BigFloat>())
            .convert_to<double>());
    if (gap < 0) gap = 0;
    if (static_cast<unsigned>(gap) + target_bits + 16 <= work_bits) return sum;
    extra = static_cast<unsigned>(gap) + 64;
  }
  throw NonConvergence("wright complex series: cancellation escalation failed");
}

std::complex<double> series_complex(const StableIndex& a, std::complex<double> z,
                                    int trig, bool derivative, int max_terms,
                                    double* cancellation) {
  const int shift = derivative ? 1 : 0;
  const double az = std::abs(z);
  const double th = std::arg(z);
  auto s = strand_double(a, 256);
  const double laz = std::log(az);
  std::complex<double> sum = 0.0;
  double sum_abs = 0.0, prev_abs = 1e308;
  int shrinking = 0;
  bool converged = (az == 0.0);
  for (int n = 0; n < max_terms && !converged; ++n) {
    if (n + shift >= static_cast<int>(s->logmag.size()))
      s = strand_double(a, n + shift + 1);
    double lmag = s->logmag[n + shift] + n * laz + (derivative ? std::log1p(n) : 0.0);
    double mag = std::exp(lmag);
    double tr = trig ? s->cosv[n + shift] : s->sinv[n + shift];
    double sgn = ((n + shift) & 1) ? -1.0 : 1.0;
    sum += sgn * tr * mag * std::complex<double>(std::cos(n * th), std::sin(n * th));
    sum_abs += mag;
    if (mag < prev_abs)
      ++shrinking;
    else
      shrinking = 0;
    prev_abs = mag;
    if (shrinking >= 3 && mag < 1e-18 * (sum_abs + 1e-300)) converged = true;
  }
  if (az == 0.0) {
    double tr = trig ? s->cosv[shift] : s->sinv[shift];
    sum = (shift & 1 ? -1.0 : 1.0) * tr * std::exp(s->logmag[shift]);
    sum_abs = std::abs(sum);
  }
  if (!converged)
    throw NonConvergence("wright complex series (double): term budget exhausted");
  if (cancellation) *cancellation = sum_abs;
  return sum;
}

}  // namespace stablearea::wright::detail
