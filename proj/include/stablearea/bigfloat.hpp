#ifndef STABLEAREA_BIGFLOAT_HPP
#define STABLEAREA_BIGFLOAT_HPP

#include <boost/multiprecision/mpfr.hpp>

#include <mutex>

namespace stablearea {

namespace mp = boost::multiprecision;

/// Arbitrary-precision real backed by MPFR. New values pick up the process
/// default precision at construction time; use PrecisionGuard to scope it.
using BigFloat = mp::number<mp::mpfr_float_backend<0>, mp::et_off>;

inline unsigned bits_to_digits(unsigned bits) {
  return static_cast<unsigned>(bits * 0.3010299956639812) + 4;
}

inline unsigned digits_to_bits(unsigned digits) {
  return static_cast<unsigned>(digits * 3.3219280948873623) + 4;
}

namespace detail {
inline std::recursive_mutex& bigfloat_mutex() {
  static std::recursive_mutex mu;
  return mu;
}
}  // namespace detail

/// Scoped override of the working precision (in mantissa bits). The default
/// precision in this Boost version is a single process-wide value, so the
/// guard also holds a recursive lock: extended-precision sections are
/// mutually exclusive across threads. The Monte Carlo engine works purely in
/// doubles and is unaffected.
class PrecisionGuard {
 public:
  explicit PrecisionGuard(unsigned bits) : lock_(detail::bigfloat_mutex()) {
    saved_ = BigFloat::default_precision();
    BigFloat::default_precision(bits_to_digits(bits));
  }
  ~PrecisionGuard() { BigFloat::default_precision(saved_); }
  PrecisionGuard(const PrecisionGuard&) = delete;
  PrecisionGuard& operator=(const PrecisionGuard&) = delete;

 private:
  std::lock_guard<std::recursive_mutex> lock_;
  unsigned saved_;
};

/// Minimal complex arithmetic over BigFloat; only what the contour inversion
/// and the F-identity need.
struct BigComplex {
  BigFloat re, im;

  BigComplex() : re(0), im(0) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}
  explicit BigComplex(double r) : re(r), im(0) {}

  BigComplex operator+(const BigComplex& o) const { return {re + o.re, im + o.im}; }
  BigComplex operator-(const BigComplex& o) const { return {re - o.re, im - o.im}; }
  BigComplex operator*(const BigComplex& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  BigComplex operator*(const BigFloat& s) const { return {re * s, im * s}; }
  BigComplex operator/(const BigComplex& o) const {
    BigFloat d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
  }
  BigComplex& operator+=(const BigComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

inline BigFloat abs(const BigComplex& z) { return sqrt(z.re * z.re + z.im * z.im); }

inline BigComplex exp(const BigComplex& z) {
  BigFloat m = exp(z.re);
  return {m * cos(z.im), m * sin(z.im)};
}

inline BigComplex log(const BigComplex& z) {
  return {log(abs(z)), atan2(z.im, z.re)};
}

/// Principal branch of z^p for real p.
inline BigComplex pow(const BigComplex& z, const BigFloat& p) {
  BigComplex lz = log(z);
  return exp(BigComplex{lz.re * p, lz.im * p});
}

}  // namespace stablearea

#endif
