#include "stablearea/coeffs.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <map>

#include "stablearea/errors.hpp"

namespace stablearea::coeffs {

namespace {

using boost::multiprecision::cpp_int;

// 1/Gamma(z), entire; safe at the poles of Gamma.
BigFloat rgamma(const BigFloat& z) {
  if (z > 0.5) return 1 / tgamma(z);
  const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
  return tgamma(1 - z) * sin(pi_big * fmod(z, BigFloat(2))) / pi_big;
}

cpp_int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

}  // namespace

CoefficientTable::CoefficientTable(StableIndex a, unsigned precision_bits)
    : alpha_(a), bits_(precision_bits < 256 ? 256 : precision_bits) {}

BigFloat CoefficientTable::bell_base(int n) const {
  // B_{n,1} = (2-alpha)_{n-1} / ((n+1)(n+2))
  BigFloat p = 1;
  for (int i = 0; i < n - 1; ++i) p *= (2 - BigFloat(alpha_.alpha()) + i);
  return p / ((n + 1) * (n + 2));
}

void CoefficientTable::grow_bell(int n_target) {
  for (int n = static_cast<int>(bell_.size()) + 1; n <= n_target; ++n) {
    std::vector<BigFloat> row(n);
    row[0] = bell_base(n);
    for (int k = 2; k <= n; ++k) {
      BigFloat acc = 0;
      for (int l = k - 1; l <= n - 1; ++l)
        acc += BigFloat(binomial(n, l)) * bell_base(n - l) * bell_[l - 1][k - 2];
      row[k - 1] = acc / k;
    }
    bell_.push_back(std::move(row));
  }
}

void CoefficientTable::grow_c(int p_target) {
  const BigFloat al(alpha_.alpha());
  const BigFloat spi = sqrt(boost::math::constants::pi<BigFloat>());
  if (c_.empty()) c_.push_back(BigFloat(1));
  for (int p = static_cast<int>(c_.size()); p <= p_target; ++p) {
    grow_bell(2 * p);
    BigFloat fact2p = 1;
    for (int i = 2; i <= 2 * p; ++i) fact2p *= i;
    BigFloat acc = 0;
    BigFloat two_am1_k = 1;  // (2(alpha-1))^k
    for (int k = 1; k <= 2 * p; ++k) {
      two_am1_k *= 2 * (al - 1);
      acc += bell_[2 * p - 1][k - 1] * tgamma(BigFloat(p) + k + BigFloat(0.5)) *
             two_am1_k;
    }
    c_.push_back(pow(2 / al, p) * acc / (fact2p * spi));
  }
}

void CoefficientTable::grow_omega(int n_target) {
  const BigFloat al(alpha_.alpha());
  grow_c(n_target);
  if (omega_.empty()) omega_.push_back(BigFloat(0));  // unused slot for n = 0
  for (int n = static_cast<int>(omega_.size()); n <= n_target; ++n) {
    BigFloat lead = c_[n - 1] * ((2 * n - 1) * (al + 1) - 2) / (2 * al);
    BigFloat acc = 0, acc_abs = 0;
    for (int k = 1; k <= n - 1; ++k) {
      BigFloat t = omega_[k] * c_[n - k];
      acc += t;
      acc_abs += fabs(t);
    }
    BigFloat om = lead - acc;
    // like-signed subtraction: escalate if more than half the mantissa is gone
    BigFloat big = fabs(lead) > acc_abs ? fabs(lead) : acc_abs;
    if (om != 0 && big > ldexp(fabs(om), static_cast<int>(bits_) / 2)) {
      escalated_ = true;
      bits_ *= 2;
      bell_.clear();
      c_.clear();
      d_.clear();
      omega_.clear();
      delta_.clear();
      PrecisionGuard regrow(bits_);
      grow_omega(n_target);
      return;
    }
    omega_.push_back(om);
  }
}

void CoefficientTable::grow_delta(int n_target) {
  const BigFloat al(alpha_.alpha());
  const BigFloat ap1 = al + 1;
  const BigFloat g_frac = tgamma(al / ap1);  // Gamma(alpha/(alpha+1))
  const BigFloat rhs_pre = (1 + 1 / al) * tgamma(-1 / al);
  if (delta_.empty()) delta_.push_back(BigFloat(0));  // unused slot for n = 0
  for (int n = static_cast<int>(delta_.size()); n <= n_target; ++n) {
    BigFloat rhs = rhs_pre * (g_frac * rgamma((al - 1 - n) / ap1) -
                              g_frac * g_frac * rgamma((al - 1) / ap1) *
                                  rgamma((al - n) / ap1));
    BigFloat acc = 0, acc_abs = 0;
    for (int k = 1; k <= n - 1; ++k) {
      BigFloat t = BigFloat(binomial(n, k)) * delta_[n - k] * g_frac *
                   rgamma((al - k) / ap1);
      acc += t;
      acc_abs += fabs(t);
    }
    BigFloat dn = rhs - acc;
    BigFloat big = fabs(rhs) > acc_abs ? fabs(rhs) : acc_abs;
    if (dn != 0 && big > ldexp(fabs(dn), static_cast<int>(bits_) / 2)) {
      escalated_ = true;
      bits_ *= 2;
      bell_.clear();
      c_.clear();
      d_.clear();
      omega_.clear();
      delta_.clear();
      PrecisionGuard regrow(bits_);
      grow_delta(n_target);
      return;
    }
    delta_.push_back(dn);
  }
}

BigFloat CoefficientTable::bell_big(int n, int k) {
  if (n < 1 || k < 1 || k > n)
    throw InvalidInput("bell: requires 1 <= k <= n");
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  grow_bell(n);
  return bell_[n - 1][k - 1];
}

BigFloat CoefficientTable::c_big(int p) {
  if (p < 0) throw InvalidInput("c: requires p >= 0");
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  grow_c(p);
  return c_[p];
}

BigFloat CoefficientTable::d_big(int p) {
  if (p < 0) throw InvalidInput("d: requires p >= 0");
  if (p == 0) return BigFloat(1);
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  grow_c(p);
  const BigFloat al(alpha_.alpha());
  return c_[p] - c_[p - 1] * ((2 * p - 1) * (al + 1) - 2) / (2 * al);
}

BigFloat CoefficientTable::omega_big(int n) {
  if (n < 1) throw InvalidInput("omega: requires n >= 1");
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  grow_omega(n);
  return omega_[n];
}

BigFloat CoefficientTable::delta_big(int n) {
  if (n < 1) throw InvalidInput("delta: requires n >= 1");
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  grow_delta(n);
  return delta_[n];
}

double CoefficientTable::bell(int n, int k) { return bell_big(n, k).convert_to<double>(); }
double CoefficientTable::c(int p) { return c_big(p).convert_to<double>(); }
double CoefficientTable::d(int p) { return d_big(p).convert_to<double>(); }
double CoefficientTable::omega(int n) { return omega_big(n).convert_to<double>(); }
double CoefficientTable::delta(int n) { return delta_big(n).convert_to<double>(); }

double CoefficientTable::moment_ex(int n) {
  if (n < 1) throw InvalidInput("moment_ex: requires n >= 1");
  BigFloat om = omega_big(n);
  PrecisionGuard guard(bits_);
  const BigFloat al(alpha_.alpha());
  BigFloat fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  BigFloat v = fact * al * tgamma(1 - 1 / al) * om /
               tgamma((n - 1) * (al + 1) / al + 1);
  return v.convert_to<double>();
}

double CoefficientTable::neg_moment_ex(int n) {
  if (n < 1) throw InvalidInput("neg_moment_ex: requires n >= 1");
  BigFloat dn = delta_big(n);
  PrecisionGuard guard(bits_);
  const BigFloat al(alpha_.alpha());
  const BigFloat ap1 = al + 1;
  BigFloat v = dn * pow(ap1, BigFloat(n + 1) / ap1) / tgamma((al * n - 1) / ap1);
  return v.convert_to<double>();
}

std::vector<double> CoefficientTable::growth_check_c(int n_max) {
  if (n_max < 5) throw InvalidInput("growth_check_c: requires n_max >= 5");
  std::vector<double> out;
  out.reserve(n_max);
  c_big(n_max);  // grow once
  PrecisionGuard guard(bits_);
  std::lock_guard<std::mutex> lock(mu_);
  for (int n = 1; n <= n_max; ++n) {
    BigFloat v = exp(log(c_[n]) / n) / n;
    out.push_back(v.convert_to<double>());
  }
  return out;
}

std::shared_ptr<CoefficientTable> table_for(const StableIndex& a,
                                            unsigned precision_bits) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, unsigned>,
                  std::shared_ptr<CoefficientTable>>
      tables;
  if (precision_bits < 256) precision_bits = 256;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[{a.key(), precision_bits}];
  if (!slot) slot = std::make_shared<CoefficientTable>(a, precision_bits);
  return slot;
}

double bell_B(const StableIndex& a, int n, int k) { return table_for(a)->bell(n, k); }
double c_p(const StableIndex& a, int p) { return table_for(a)->c(p); }
double d_p(const StableIndex& a, int p) { return table_for(a)->d(p); }
double omega_n(const StableIndex& a, int n) { return table_for(a)->omega(n); }
double delta_n(const StableIndex& a, int n) { return table_for(a)->delta(n); }
double moment_ex(const StableIndex& a, int n) { return table_for(a)->moment_ex(n); }
double neg_moment_ex(const StableIndex& a, int n) {
  return table_for(a)->neg_moment_ex(n);
}
std::vector<double> growth_check_c(const StableIndex& a, int n_max) {
  return table_for(a)->growth_check_c(n_max);
}

Rational c_rational_alpha2(int p) {
  if (p < 0) throw InvalidInput("c_rational_alpha2: requires p >= 0");
  // Gamma(3p + 1/2) = sqrt(pi) (6p)! / (4^{3p} (3p)!), so
  // c_p = (6p)! / ((2p)! (3p)! 4^{3p} 9^p).
  auto fact = [](int m) {
    cpp_int f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  cpp_int num = fact(6 * p);
  cpp_int den = fact(2 * p) * fact(3 * p) * pow(cpp_int(4), 3 * p) *
                pow(cpp_int(9), p);
  return Rational(num, den);
}

}  // namespace stablearea::coeffs
