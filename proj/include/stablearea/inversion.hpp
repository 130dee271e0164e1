#ifndef STABLEAREA_INVERSION_HPP
#define STABLEAREA_INVERSION_HPP

#include <vector>

#include "stablearea/stable_index.hpp"

namespace stablearea::inversion {

enum class Law { excursion, meander, conditioned };

inline const char* law_name(Law l) {
  switch (l) {
    case Law::excursion: return "excursion";
    case Law::meander: return "meander";
    case Law::conditioned: return "conditioned";
  }
  return "?";
}

/// Inversion back-ends: Gaver-Stehfest real-node summation in extended
/// precision (default), or the fixed-Talbot deformed contour (cross-check).
/// Both tolerate the image functions here, whose only singularities sit on
/// the negative real axis.
enum class Method { gaver, contour };

struct InversionConfig {
  Method method = Method::gaver;
  /// Gaver-Stehfest node count (multiple of 4, >= 8); also the Talbot count.
  int node_count = 16;
  /// Working mantissa bits; 0 picks a value matched to node_count.
  unsigned precision_bits = 0;
  /// Rightmost singularity of the image; all three images here have their
  /// poles at the (strictly negative) real zeros of Phi.
  double singularity_abscissa = 0.0;
  /// Relative disagreement between node counts N/2 and N that triggers
  /// InversionUnstable.
  double stability_rtol = 0.05;
};

struct LaplaceCurve {
  std::vector<double> s_grid;
  std::vector<double> values;
  std::vector<double> err_est;
  Law law = Law::excursion;
};

/// E[exp(-s A_ex)]: inverts the alternative excursion transform
/// Gamma(-1/a)(Phi'/Phi + lambda^{1/a}), then unweights
/// 1 - t^{1+1/a} k(t) at t = s^{a/(1+a)}.
double invert_excursion(const StableIndex& a, double s,
                        const InversionConfig& cfg = {});

/// E[exp(-s A_me)]: inverts Gamma(1-1/a) H(lambda) and multiplies back the
/// t^{1/a} weight.
double invert_meander(const StableIndex& a, double s,
                      const InversionConfig& cfg = {});

/// E[exp(-s A_up)]: plain inversion of -lambda H - Phi'/Phi.
double invert_conditioned(const StableIndex& a, double s,
                          const InversionConfig& cfg = {});

double invert(Law law, const StableIndex& a, double s,
              const InversionConfig& cfg = {});

/// Evaluate one law on an s-grid, with the N/2-vs-N disagreement recorded
/// per point.
LaplaceCurve curve(Law law, const StableIndex& a, const std::vector<double>& s_grid,
                   const InversionConfig& cfg = {});

/// Best-effort density by a second (stacked) inversion of s -> E[e^{-sA}].
/// Offered for alpha >= 1.3 where the first-stage error budget is small.
double density_estimate(Law law, const StableIndex& a, double x,
                        const InversionConfig& cfg = {});

}  // namespace stablearea::inversion

#endif
