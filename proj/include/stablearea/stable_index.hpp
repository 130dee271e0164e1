#ifndef STABLEAREA_STABLE_INDEX_HPP
#define STABLEAREA_STABLE_INDEX_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <string>

#include "stablearea/errors.hpp"

namespace stablearea {

/// The stability index alpha of a spectrally positive stable process,
/// restricted to 1 < alpha <= 2, together with the derived constants that
/// appear throughout the library. Construction validates the range once so
/// downstream code never re-checks it.
class StableIndex {
 public:
  explicit StableIndex(double alpha) : alpha_(alpha) {
    if (!(alpha > 1.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
      throw InvalidInput("StableIndex: alpha must lie in (1, 2], got " +
                         std::to_string(alpha));
  }

  double alpha() const { return alpha_; }

  /// 1 + alpha
  double one_plus_alpha() const { return 1.0 + alpha_; }
  /// alpha / (1 + alpha)
  double alpha_frac() const { return alpha_ / (1.0 + alpha_); }
  /// 1 / (1 + alpha)
  double inv_one_plus() const { return 1.0 / (1.0 + alpha_); }
  /// 1 + 1/alpha
  double one_plus_inv() const { return 1.0 + 1.0 / alpha_; }

  /// Gaussian endpoint (Airy case).
  bool is_airy() const { return alpha_ == 2.0; }

  /// Requires alpha strictly below 2; used by the tail formulas and the
  /// jump-driven parts of the simulator.
  void require_below_two(const char* what) const {
    if (is_airy())
      throw InvalidInput(std::string(what) + ": defined only for alpha < 2");
  }

  /// Bit pattern of alpha, used as a memoization key.
  std::uint64_t key() const { return std::bit_cast<std::uint64_t>(alpha_); }

  friend bool operator==(const StableIndex& a, const StableIndex& b) {
    return a.alpha_ == b.alpha_;
  }

 private:
  double alpha_;
};

}  // namespace stablearea

#endif
