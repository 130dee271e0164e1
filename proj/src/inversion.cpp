#include "stablearea/inversion.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "stablearea/bigfloat.hpp"
#include "stablearea/errors.hpp"
#include "stablearea/transforms.hpp"
#include "stablearea/wright.hpp"

namespace stablearea::inversion {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

cpp_int factorial(int n) {
  cpp_int f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

cpp_int binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  cpp_int r = 1;
  for (int i = 0; i < k; ++i) {
    r *= (n - i);
    r /= (i + 1);
  }
  return r;
}

// The generic cpp_rational -> mpfr conversion mangles large values in this
// Boost version; route through exact decimal strings.
BigFloat to_big(const cpp_rational& r) {
  return BigFloat(numerator(r).convert_to<std::string>()) /
         BigFloat(denominator(r).convert_to<std::string>());
}

// Gaver-Stehfest weights zeta_k, k = 1..N (N = 2M), exact rationals:
//   zeta_k = (-1)^{M+k} sum_{j=floor((k+1)/2)}^{min(k,M)}
//            (j^{M+1}/M!) C(M,j) C(2j,j) C(j,k-j).
const std::vector<cpp_rational>& gaver_weights(int N) {
  static std::mutex mu;
  static std::map<int, std::vector<cpp_rational>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it != cache.end()) return it->second;
  int M = N / 2;
  cpp_int mfact = factorial(M);
  std::vector<cpp_rational> w(N + 1);
  for (int k = 1; k <= N; ++k) {
    cpp_int acc = 0;
    for (int j = (k + 1) / 2; j <= std::min(k, M); ++j) {
      cpp_int term = pow(cpp_int(j), M + 1) * binom(M, j) * binom(2 * j, j) *
                     binom(j, k - j);
      acc += term;
    }
    cpp_rational z(acc, mfact);
    if ((M + k) & 1) z = -z;
    w[k] = z;
  }
  return cache.emplace(N, std::move(w)).first->second;
}

enum class Image { excursion, meander, conditioned };

// Image evaluations carry extra headroom for the cancellation between the
// lambda^{1/alpha}-sized pieces and the O(1/lambda) results at large lambda.
BigFloat eval_image(Image im, const StableIndex& a, const BigFloat& lambda,
                    unsigned bits) {
  double lam = lambda.convert_to<double>();
  double xi = lam > 1.0 ? std::pow(lam, a.one_plus_inv()) : 1.0;
  unsigned extra = static_cast<unsigned>(std::log2(xi)) + 24;
  PrecisionGuard guard(bits + extra);
  const BigFloat al(a.alpha());
  switch (im) {
    case Image::excursion:
      return tgamma(-1 / al) *
             (transforms::phi_ratio_big(a, lambda) + pow(lambda, 1 / al));
    case Image::meander:
      return tgamma(1 - 1 / al) * transforms::h_alpha_big(a, lambda);
    case Image::conditioned:
      return -lambda * transforms::h_alpha_big(a, lambda) -
             transforms::phi_ratio_big(a, lambda);
  }
  return BigFloat(0);
}

struct GaverOut {
  BigFloat value;      // N-node estimate
  BigFloat value_half; // N/2-node estimate from the same evaluations
};

GaverOut gaver(Image im, const StableIndex& a, const BigFloat& t, int N,
               unsigned bits) {
  const auto& zN = gaver_weights(N);
  const auto& zH = gaver_weights(N / 2);
  PrecisionGuard guard(bits);
  const BigFloat ln2 = boost::math::constants::ln_two<BigFloat>();
  BigFloat sum = 0, sum_half = 0;
  for (int k = 1; k <= N; ++k) {
    BigFloat lam = k * ln2 / t;
    BigFloat F = eval_image(im, a, lam, bits);
    sum += to_big(zN[k]) * F;
    if (k <= N / 2) sum_half += to_big(zH[k]) * F;
  }
  GaverOut out;
  out.value = sum * ln2 / t;
  out.value_half = sum_half * ln2 / t;
  return out;
}

unsigned auto_bits(const InversionConfig& cfg) {
  if (cfg.precision_bits) return cfg.precision_bits;
  // Stehfest weights grow like ~10^{0.6 N}; keep that plus result digits.
  return static_cast<unsigned>(2.3 * cfg.node_count) + 160;
}

void check_config(const InversionConfig& cfg) {
  if (cfg.node_count < 8 || cfg.node_count % 4 != 0)
    throw InvalidInput("inversion: node_count must be a multiple of 4, >= 8");
  if (cfg.singularity_abscissa > 0.0)
    throw InvalidInput("inversion: images here have abscissa <= 0");
}

double finish(const StableIndex& a, double s, Law law, const GaverOut& g,
              const BigFloat& t, const InversionConfig& cfg, double* err_out) {
  PrecisionGuard guard(auto_bits(cfg));
  const BigFloat al(a.alpha());
  BigFloat v, vh;
  switch (law) {
    case Law::excursion: {
      BigFloat w = pow(t, 1 + 1 / al);
      v = 1 - w * g.value;
      vh = 1 - w * g.value_half;
      break;
    }
    case Law::meander: {
      BigFloat w = pow(t, 1 / al);
      v = w * g.value;
      vh = w * g.value_half;
      break;
    }
    case Law::conditioned:
      v = g.value;
      vh = g.value_half;
      break;
  }
  double vd = v.convert_to<double>();
  double diff = fabs(v - vh).convert_to<double>();
  if (err_out) *err_out = diff;
  double scale = std::max(std::fabs(vd), 1e-12);
  if (diff > cfg.stability_rtol * scale)
    throw InversionUnstable("inversion: node counts N/2 and N disagree (" +
                            std::to_string(diff) + " at s=" + std::to_string(s) +
                            ")");
  // clamp only when already within tolerance of the boundary
  if (vd > 1.0 && vd < 1.0 + 1e-9) vd = 1.0;
  if (vd < 0.0 && vd > -1e-9) vd = 0.0;
  return vd;
}

// ---------------------------------------------------------------------------
// Fixed-Talbot contour (Abate-Valko), the deformed-contour cross-check.
// lambda(theta) = r theta (cot theta + i); all image singularities lie on the
// negative real axis, which the contour wraps around.
// ---------------------------------------------------------------------------

BigComplex eval_image_c(Image im, const StableIndex& a, const BigComplex& lam) {
  const BigFloat al(a.alpha());
  BigComplex phi = wright::phi_series_bigc(a, lam);
  BigComplex dphi = wright::phi_prime_series_bigc(a, lam);
  BigComplex ratio = dphi / phi;
  switch (im) {
    case Image::excursion:
      return (ratio + pow(lam, 1 / al)) * tgamma(-1 / al);
    case Image::meander: {
      BigComplex psi = wright::psi_series_bigc(a, lam);
      BigComplex dpsi = wright::psi_prime_series_bigc(a, lam);
      const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
      return (dpsi - ratio * psi) * (pi_big * tgamma(1 - 1 / al));
    }
    case Image::conditioned: {
      BigComplex psi = wright::psi_series_bigc(a, lam);
      BigComplex dpsi = wright::psi_prime_series_bigc(a, lam);
      const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
      BigComplex h = (dpsi - ratio * psi) * pi_big;
      return BigComplex{BigFloat(0), BigFloat(0)} - lam * h - ratio;
    }
  }
  return BigComplex{BigFloat(0), BigFloat(0)};
}

BigFloat talbot(Image im, const StableIndex& a, const BigFloat& t, int N,
                unsigned bits) {
  PrecisionGuard guard(bits);
  const BigFloat pi_big = boost::math::constants::pi<BigFloat>();
  BigFloat r = BigFloat(2 * N) / (5 * t);
  // theta = 0 node
  BigFloat acc = (exp(r * t) * eval_image_c(im, a, BigComplex{r, BigFloat(0)}).re) / 2;
  for (int k = 1; k < N; ++k) {
    BigFloat th = k * pi_big / N;
    BigFloat cot = cos(th) / sin(th);
    BigComplex lam{r * th * cot, r * th};
    BigFloat sigma = th + (th * cot - 1) * cot;
    BigComplex F = eval_image_c(im, a, lam);
    BigComplex w = exp(BigComplex{lam.re * t, lam.im * t});
    BigComplex g = F * w;
    acc += g.re - sigma * g.im;  // Re[(1 + i sigma) F e^{lambda t}]
  }
  return acc * r / N;
}

}  // namespace

double invert(Law law, const StableIndex& a, double s, const InversionConfig& cfg) {
  check_config(cfg);
  if (!(s > 0.0)) throw InvalidInput("invert: requires s > 0");
  unsigned bits = auto_bits(cfg);
  PrecisionGuard guard(bits);
  const BigFloat al(a.alpha());
  BigFloat t = pow(BigFloat(s), al / (al + 1));
  Image im = law == Law::excursion   ? Image::excursion
             : law == Law::meander   ? Image::meander
                                     : Image::conditioned;
  if (cfg.method == Method::contour) {
    BigFloat f = talbot(im, a, t, cfg.node_count, bits);
    BigFloat fh = talbot(im, a, t, cfg.node_count - 4, bits);
    GaverOut g{f, fh};
    return finish(a, s, law, g, t, cfg, nullptr);
  }
  GaverOut g = gaver(im, a, t, cfg.node_count, bits);
  return finish(a, s, law, g, t, cfg, nullptr);
}

double invert_excursion(const StableIndex& a, double s, const InversionConfig& cfg) {
  return invert(Law::excursion, a, s, cfg);
}
double invert_meander(const StableIndex& a, double s, const InversionConfig& cfg) {
  return invert(Law::meander, a, s, cfg);
}
double invert_conditioned(const StableIndex& a, double s, const InversionConfig& cfg) {
  return invert(Law::conditioned, a, s, cfg);
}

LaplaceCurve curve(Law law, const StableIndex& a, const std::vector<double>& s_grid,
                   const InversionConfig& cfg) {
  check_config(cfg);
  LaplaceCurve out;
  out.law = law;
  out.s_grid = s_grid;
  out.values.resize(s_grid.size());
  out.err_est.resize(s_grid.size());
  unsigned bits = auto_bits(cfg);
  Image im = law == Law::excursion   ? Image::excursion
             : law == Law::meander   ? Image::meander
                                     : Image::conditioned;
  for (std::size_t i = 0; i < s_grid.size(); ++i) {
    double s = s_grid[i];
    if (!(s > 0.0)) throw InvalidInput("curve: requires s > 0");
    PrecisionGuard guard(bits);
    const BigFloat al(a.alpha());
    BigFloat t = pow(BigFloat(s), al / (al + 1));
    GaverOut g = gaver(im, a, t, cfg.node_count, bits);
    out.values[i] = finish(a, s, law, g, t, cfg, &out.err_est[i]);
  }
  return out;
}

double density_estimate(Law law, const StableIndex& a, double x,
                        const InversionConfig& cfg) {
  check_config(cfg);
  if (!(x > 0.0)) throw InvalidInput("density_estimate: requires x > 0");
  if (a.alpha() < 1.3)
    throw InvalidInput(
        "density_estimate: offered only for alpha >= 1.3 (stacked-inversion "
        "error budget)");
  const int N = 12;  // outer nodes; inner values are double-accurate only
  const double ln2 = 0.6931471805599453;
  // keep the inner transforms within the supported geometric s-range
  if (N * ln2 / x > 1e3 || ln2 / x < 1e-3)
    throw InvalidInput("density_estimate: x outside supported range");
  const auto& z = gaver_weights(N);
  InversionConfig inner = cfg;
  inner.node_count = std::max(16, cfg.node_count);
  PrecisionGuard guard(128);
  BigFloat acc = 0;
  for (int k = 1; k <= N; ++k) {
    double s = k * ln2 / x;
    acc += to_big(z[k]) * invert(law, a, s, inner);
  }
  double v = (acc * ln2 / x).convert_to<double>();
  return v;
}

}  // namespace stablearea::inversion
