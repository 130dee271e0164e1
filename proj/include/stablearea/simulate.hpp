#ifndef STABLEAREA_SIMULATE_HPP
#define STABLEAREA_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "stablearea/stable_index.hpp"

namespace stablearea::mc {

/// Sample mean with standard error; reproducible from (seed, config).
struct MCEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  long long n = 0;
  std::uint64_t seed = 0;
};

/// One simulated skeleton on a uniform grid.
struct PathSample {
  double dt = 0.0;
  std::vector<double> values;
  std::optional<double> t_hit;  // first grid time the skeleton reached <= 0
  double area = 0.0;            // left-endpoint Riemann sum
};

struct McConfig {
  std::uint64_t seed = 20240913ULL;
  /// 0 = all OpenMP threads; 1 = the serial reference path.
  int n_threads = 0;
  /// Paths per deterministic substream block. The sample set depends only on
  /// (seed, block layout), never on the thread count.
  long long block_size = 1024;
  /// First-passage time cap; unabsorbed paths are counted and bounded.
  double horizon = 50.0;
  /// Attempt budget per accepted sample for the rejection samplers.
  long long rejection_budget = 4000;
};

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() {  // (0,1)
    return ((gen_() >> 11) + 0.5) * 0x1p-53;
  }
  double exponential() { return -std::log(uniform()); }

 private:
  std::mt19937_64 gen_;
};

/// Deterministic substream for one block.
Rng block_rng(std::uint64_t seed, std::uint64_t block);

/// Totally-skewed stable sampler (Chambers-Mallows-Stuck transform), scaled
/// so that E[exp(-q L_1)] = exp(q^alpha) for q >= 0 — the spectrally positive
/// normalization used throughout. At alpha = 2 this degenerates smoothly to
/// N(0, 2).
class StableSampler {
 public:
  explicit StableSampler(const StableIndex& a);
  double draw(Rng& rng) const;  // one copy of L_1
  double alpha() const { return alpha_; }

 private:
  double alpha_, b_, s_, sigma_, inv_alpha_, skew_exp_;
};

/// One increment of L over dt (= dt^{1/alpha} times a standard draw).
double stable_increment(const StableIndex& a, double dt, Rng& rng);

// ---------------------------------------------------------------------------
// Estimators. Each one runs over deterministic blocks; blocks execute in
// parallel under OpenMP or serially (cfg.n_threads == 1), and the merged
// result is identical either way.
// ---------------------------------------------------------------------------

struct PairedEstimate {
  MCEstimate path_area;        // E[exp(-q int_0^1 L_u du)] by path simulation
  MCEstimate scaled_endpoint;  // E[exp(-q (1+alpha)^{-1/alpha} L_1)]
};

/// Both sides of the area identity at Laplace argument q.
PairedEstimate area_identity_check(const StableIndex& a, long long n_samples,
                                   double q, double dt, const McConfig& cfg = {});

struct FirstPassageResult {
  MCEstimate estimate;
  long long unabsorbed = 0;
  double tail_bound = 0.0;  // upper bound on the unabsorbed contribution
};

/// E_z[exp(-lambda T_0 - mu int_0^{T_0} L_s ds)] by direct path simulation.
FirstPassageResult first_passage_functional(const StableIndex& a, double z,
                                            double lambda, double mu,
                                            long long n_samples, double dt,
                                            const McConfig& cfg = {});

/// One normalized excursion skeleton: endpoint-pinned walk (window
/// pin_window, then the residual endpoint is spread evenly over the
/// increments so the bridge ends exactly at 0) rotated at its minimum.
PathSample sample_excursion(const StableIndex& a, int n_steps, Rng& rng,
                            double pin_window = 0.05,
                            long long max_attempts = 2000000);

/// One meander skeleton: walk from 0 conditioned to stay positive after the
/// first step (rejection).
PathSample sample_meander(const StableIndex& a, int n_steps, Rng& rng,
                          long long max_attempts = 2000000);

std::vector<double> excursion_areas(const StableIndex& a, int n_steps,
                                    long long n_samples, const McConfig& cfg = {},
                                    double pin_window = 0.05);

std::vector<double> meander_areas(const StableIndex& a, int n_steps,
                                  long long n_samples, const McConfig& cfg = {});

struct WeightedSample {
  double area = 0.0;
  double weight = 0.0;  // h-transform weight L_1 1{min > 0} / x0, or 0
};

/// Raw h-transform-weighted paths from x0 on [0,1].
std::vector<WeightedSample> conditioned_weighted_areas(const StableIndex& a,
                                                       double x0, int n_steps,
                                                       long long n_samples,
                                                       const McConfig& cfg = {});

/// Importance-weighted estimate of E_up[functional(area)]; throws
/// DegenerateWeights if the effective sample size drops below 100.
MCEstimate sample_conditioned_weighted(const StableIndex& a, double x0, int n_steps,
                                       const std::function<double(double)>& functional,
                                       long long n_samples, const McConfig& cfg = {});

// ---------------------------------------------------------------------------
// Tail diagnostics.
// ---------------------------------------------------------------------------

/// Slope of ln(-ln Phat(A > x)) against ln x over [q_lo, q_hi] quantiles;
/// compares to alpha/(alpha-1) for the excursion. Requires >= 10^4 samples.
double excursion_tail_slope(const std::vector<double>& areas, double q_lo = 0.90,
                            double q_hi = 0.999);

/// Slope of ln Phat(A > x) against ln x over [q_lo, q_hi] quantiles.
double tail_log_slope(const std::vector<double>& samples, double q_lo = 0.95,
                      double q_hi = 0.999);

double weighted_tail_log_slope(const std::vector<WeightedSample>& samples,
                               double q_lo = 0.95, double q_hi = 0.999);

/// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_two_sample_pvalue(std::vector<double> xs, std::vector<double> ys);

/// Mean/SE summary of a plain sample.
MCEstimate summarize(const std::vector<double>& xs, std::uint64_t seed);

}  // namespace stablearea::mc

#endif
