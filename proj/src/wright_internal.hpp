#ifndef STABLEAREA_WRIGHT_INTERNAL_HPP
#define STABLEAREA_WRIGHT_INTERNAL_HPP

#include <memory>
#include <vector>

#include "stablearea/bigfloat.hpp"
#include "stablearea/stable_index.hpp"

namespace stablearea::wright::detail {

// One coefficient strand serves Phi, Psi and their derivatives:
//   A_n  = Gamma((1+n)/(1+a)) (1+a)^{(n-a)/(1+a)} / (pi n!)
//   s_n  = sin(pi (1+n)/(1+a)),  c_n = cos(pi (1+n)/(1+a))
// so that Phi(x)  = sum (-1)^n     s_n     A_n     x^n
//         Psi(x)  = sum (-1)^n     c_n     A_n     x^n
//         Phi'(x) = sum (-1)^{m+1} s_{m+1} A_{m+1} (m+1) x^m
//         Psi'(x) = sum (-1)^{m+1} c_{m+1} A_{m+1} (m+1) x^m.

struct StrandD {
  std::vector<double> logmag;  // ln A_n
  std::vector<double> sinv, cosv;
};

struct StrandBig {
  unsigned digits = 0;
  std::vector<BigFloat> mag;  // A_n
  std::vector<BigFloat> sinv, cosv;
};

std::shared_ptr<const StrandD> strand_double(const StableIndex& a, int n_min);
std::shared_ptr<const StrandBig> strand_big(const StableIndex& a, unsigned digits,
                                            int n_min);

struct SeriesOutD {
  double value = 0.0;
  double abs_err = 0.0;   // truncation + rounding estimate
  double sum_abs = 0.0;   // sum of |terms|, for cancellation diagnostics
  bool converged = false;
};

// trig: 0 = sin strand (Phi family), 1 = cos strand (Psi family)
// derivative: shift the strand by one and weight by (m+1)
SeriesOutD series_double(const StableIndex& a, double x, int trig, bool derivative,
                         int max_terms, double tol);

// Extended-precision series at the thread-default precision; internally adds
// cancellation headroom and verifies the result did not drown in rounding.
BigFloat series_big(const StableIndex& a, const BigFloat& x, int trig,
                    bool derivative, int max_terms);

BigComplex series_bigc(const StableIndex& a, const BigComplex& z, int trig,
                       bool derivative, int max_terms);

std::complex<double> series_complex(const StableIndex& a, std::complex<double> z,
                                    int trig, bool derivative, int max_terms,
                                    double* cancellation = nullptr);

// Largest ln|term| of the series at |x|; used to size precision.
double peak_log_term(const StableIndex& a, double log_abs_x, bool derivative);

}  // namespace stablearea::wright::detail

#endif
