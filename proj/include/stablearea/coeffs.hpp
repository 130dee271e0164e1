#ifndef STABLEAREA_COEFFS_HPP
#define STABLEAREA_COEFFS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <memory>
#include <mutex>
#include <vector>

#include "stablearea/bigfloat.hpp"
#include "stablearea/gamma.hpp"
#include "stablearea/stable_index.hpp"

namespace stablearea::coeffs {

using Rational = boost::multiprecision::cpp_rational;

/// Lazily extended coefficient families for one stability index:
///
///   bell(n,k)   partial Bell polynomial values on the base row
///               B_{n,1} = (2-alpha)_{n-1} / ((n+1)(n+2))
///   c(p), d(p)  coefficients of the large-x expansions of Phi and Phi'
///   omega(n)    scaled positive integer moments of the excursion area
///   delta(n)    scaled negative fractional moments of the excursion area
///
/// Everything is computed in extended precision (precision_bits mantissa
/// bits, >= 256 by default) because the omega/delta recurrences subtract
/// like-signed terms; double getters round at the end. Tables grow on demand
/// and grown snapshots are immutable, so concurrent readers are safe.
class CoefficientTable {
 public:
  explicit CoefficientTable(StableIndex a, unsigned precision_bits = 256);

  const StableIndex& index() const { return alpha_; }
  unsigned precision_bits() const { return bits_; }

  double bell(int n, int k);
  double c(int p);
  double d(int p);
  double omega(int n);
  double delta(int n);

  BigFloat bell_big(int n, int k);
  BigFloat c_big(int p);
  BigFloat d_big(int p);
  BigFloat omega_big(int n);
  BigFloat delta_big(int n);

  /// n-th positive integer moment of the excursion area.
  double moment_ex(int n);
  /// E[A_ex^{(1-alpha n)/(alpha+1)}], the n-th negative fractional moment.
  double neg_moment_ex(int n);

  /// (c_n)^{1/n} / n for n = 1..n_max; the growth-band property checks.
  std::vector<double> growth_check_c(int n_max);

  /// True if a recurrence lost more than half the working precision at some
  /// point and the table silently re-ran itself at doubled precision.
  bool precision_escalated() const { return escalated_; }

 private:
  void grow_bell(int n_target);
  void grow_c(int p_target);
  void grow_omega(int n_target);
  void grow_delta(int n_target);
  BigFloat bell_base(int n) const;  // B_{n,1}

  StableIndex alpha_;
  unsigned bits_;
  bool escalated_ = false;
  std::mutex mu_;
  std::vector<std::vector<BigFloat>> bell_;  // bell_[n-1][k-1], 1<=k<=n
  std::vector<BigFloat> c_, d_, omega_, delta_;
};

/// Shared per-(alpha, precision) table, memoized by the alpha bit pattern.
std::shared_ptr<CoefficientTable> table_for(const StableIndex& a,
                                            unsigned precision_bits = 256);

// Convenience wrappers over the shared table.
double bell_B(const StableIndex& a, int n, int k);
double c_p(const StableIndex& a, int p);
double d_p(const StableIndex& a, int p);
double omega_n(const StableIndex& a, int n);
double delta_n(const StableIndex& a, int n);
double moment_ex(const StableIndex& a, int n);
double neg_moment_ex(const StableIndex& a, int n);
std::vector<double> growth_check_c(const StableIndex& a, int n_max);

/// Exact rational c_p at alpha = 2, where the half-integer Gamma factors
/// reduce symbolically: c_p = (6p)! / ((2p)! (3p)! 4^{3p} 9^p).
Rational c_rational_alpha2(int p);

}  // namespace stablearea::coeffs

#endif
