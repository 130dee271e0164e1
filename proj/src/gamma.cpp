#include "stablearea/gamma.hpp"

#include <cmath>

#include "stablearea/errors.hpp"

namespace stablearea::coeffs {

namespace {

// Lanczos coefficients, g = 7, n = 9 (Godfrey's set).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,      676.5203681218851,     -1259.1392167224028,
    771.32342877765313,       -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,     9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kPi = 3.141592653589793238462643383279502884;

double lanczos_sum(double x) {
  // x >= 0.5 assumed; returns Gamma(x) directly.
  double a = kLanczos[0];
  double t = x + kLanczosG - 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i - 1.0);
  return std::sqrt(2.0 * kPi) * std::pow(t, x - 0.5) * std::exp(-t) * a;
}

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw InvalidInput("gamma_fn: non-finite argument");
  if (x >= 0.5) return lanczos_sum(x);
  // Reflection. Gamma has poles at non-positive integers.
  double s = std::sin(kPi * x);
  if (s == 0.0) throw InvalidInput("gamma_fn: pole at non-positive integer");
  return kPi / (s * lanczos_sum(1.0 - x));
}

double lgamma_fn(double x, int* sign) {
  if (!std::isfinite(x)) throw InvalidInput("lgamma_fn: non-finite argument");
  if (x >= 0.5) {
    if (sign) *sign = 1;
    double a = kLanczos[0];
    double t = x + kLanczosG - 0.5;
    for (int i = 1; i < 9; ++i) a += kLanczos[i] / (x + i - 1.0);
    return 0.5 * std::log(2.0 * kPi) + (x - 0.5) * std::log(t) - t + std::log(a);
  }
  double s = std::sin(kPi * x);
  if (s == 0.0) throw InvalidInput("lgamma_fn: pole at non-positive integer");
  if (sign) *sign = s > 0.0 ? 1 : -1;
  return std::log(kPi / std::fabs(s)) - lgamma_fn(1.0 - x);
}

double pochhammer(double x, int n) {
  if (n < 0) throw InvalidInput("pochhammer: n must be >= 0");
  double p = 1.0;
  for (int i = 0; i < n; ++i) p *= x + i;
  return p;
}

BigFloat gamma_big(const BigFloat& x) { return tgamma(x); }

}  // namespace stablearea::coeffs
