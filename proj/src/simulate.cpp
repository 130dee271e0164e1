#include "stablearea/simulate.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "stablearea/errors.hpp"

namespace stablearea::mc {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int thread_count(const McConfig& cfg) {
  if (cfg.n_threads > 0) return cfg.n_threads;
  return omp_get_max_threads();
}

// Runs body(block_index, rng) over ceil(n/block) blocks. Blocks own
// independent substreams, partial results are merged in block order, so the
// outcome is identical for any thread count.
template <typename Partial, typename Body>
std::vector<Partial> run_blocks(long long n_items, const McConfig& cfg,
                                const Body& body) {
  const long long bs = std::max<long long>(1, cfg.block_size);
  const long long nblocks = (n_items + bs - 1) / bs;
  std::vector<Partial> partials(nblocks);
  const int nt = thread_count(cfg);
#pragma omp parallel for schedule(dynamic) num_threads(nt) if (nt > 1)
  for (long long b = 0; b < nblocks; ++b) {
    long long count = std::min(bs, n_items - b * bs);
    Rng rng = block_rng(cfg.seed, static_cast<std::uint64_t>(b));
    partials[b] = body(b, count, rng);
  }
  return partials;
}

struct MomentPartial {
  double sum = 0.0, sumsq = 0.0;
  long long n = 0;
  void add(double v) {
    sum += v;
    sumsq += v * v;
    ++n;
  }
};

MCEstimate merge_moments(const std::vector<MomentPartial>& parts,
                         std::uint64_t seed) {
  double sum = 0.0, sumsq = 0.0;
  long long n = 0;
  for (const auto& p : parts) {
    sum += p.sum;
    sumsq += p.sumsq;
    n += p.n;
  }
  MCEstimate est;
  est.n = n;
  est.seed = seed;
  if (n > 0) est.mean = sum / n;
  if (n > 1) {
    double var = (sumsq - n * est.mean * est.mean) / (n - 1.0);
    est.stderr_ = var > 0.0 ? std::sqrt(var / n) : 0.0;
  }
  return est;
}

}  // namespace

Rng block_rng(std::uint64_t seed, std::uint64_t block) {
  return Rng(splitmix64(seed ^ splitmix64(block + 0x9E3779B97F4A7C15ULL)));
}

StableSampler::StableSampler(const StableIndex& a) : alpha_(a.alpha()) {
  double t = std::tan(kPi * alpha_ / 2.0);
  b_ = std::atan(t) / alpha_;
  s_ = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha_));
  sigma_ = std::pow(-std::cos(kPi * alpha_ / 2.0), 1.0 / alpha_);
  inv_alpha_ = 1.0 / alpha_;
  skew_exp_ = (1.0 - alpha_) / alpha_;
}

double StableSampler::draw(Rng& rng) const {
  double v = kPi * (rng.uniform() - 0.5);
  double w = rng.exponential();
  double avb = alpha_ * (v + b_);
  double x = s_ * std::sin(avb) / std::pow(std::cos(v), inv_alpha_) *
             std::pow(std::cos(v - avb) / w, skew_exp_);
  return sigma_ * x;
}

double stable_increment(const StableIndex& a, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw InvalidInput("stable_increment: requires dt > 0");
  StableSampler sampler(a);
  return std::pow(dt, 1.0 / a.alpha()) * sampler.draw(rng);
}

PairedEstimate area_identity_check(const StableIndex& a, long long n_samples,
                                   double q, double dt, const McConfig& cfg) {
  if (n_samples < 1000)
    throw InvalidInput("area_identity_check: requires n >= 1000");
  StableSampler sampler(a);
  const int n_steps = std::max(1, static_cast<int>(std::llround(1.0 / dt)));
  const double step_dt = 1.0 / n_steps;
  const double scale = std::pow(step_dt, 1.0 / a.alpha());

  auto paths = run_blocks<MomentPartial>(
      n_samples, cfg, [&](long long, long long count, Rng rng) {
        MomentPartial p;
        for (long long i = 0; i < count; ++i) {
          double x = 0.0, area = 0.0;
          for (int k = 0; k < n_steps; ++k) {
            area += x * step_dt;  // left endpoint
            x += scale * sampler.draw(rng);
          }
          p.add(std::exp(-q * area));
        }
        return p;
      });

  McConfig cfg_b = cfg;
  cfg_b.seed = splitmix64(cfg.seed ^ 0xA11CE5EEDULL);
  const double endpoint_scale = std::pow(1.0 + a.alpha(), -1.0 / a.alpha());
  auto endpoints = run_blocks<MomentPartial>(
      n_samples, cfg_b, [&](long long, long long count, Rng rng) {
        MomentPartial p;
        for (long long i = 0; i < count; ++i)
          p.add(std::exp(-q * endpoint_scale * sampler.draw(rng)));
        return p;
      });

  return {merge_moments(paths, cfg.seed), merge_moments(endpoints, cfg_b.seed)};
}

FirstPassageResult first_passage_functional(const StableIndex& a, double z,
                                            double lambda, double mu,
                                            long long n_samples, double dt,
                                            const McConfig& cfg) {
  if (!(z > 0.0)) throw InvalidInput("first_passage_functional: requires z > 0");
  if (!(dt > 0.0)) throw InvalidInput("first_passage_functional: requires dt > 0");
  StableSampler sampler(a);
  const double scale = std::pow(dt, 1.0 / a.alpha());
  const long long max_steps = static_cast<long long>(cfg.horizon / dt);

  struct Partial {
    MomentPartial m;
    long long unabsorbed = 0;
    double bound = 0.0;
  };
  auto parts = run_blocks<Partial>(
      n_samples, cfg, [&](long long, long long count, Rng rng) {
        Partial p;
        for (long long i = 0; i < count; ++i) {
          double x = z, area = 0.0;
          long long k = 0;
          for (; k < max_steps; ++k) {
            area += x * dt;
            x += scale * sampler.draw(rng);
            if (x <= 0.0) break;
          }
          if (k >= max_steps) {
            ++p.unabsorbed;
            p.bound = std::max(p.bound, std::exp(-lambda * cfg.horizon - mu * area));
            p.m.add(0.0);
          } else {
            double t_hit = (k + 1) * dt;
            p.m.add(std::exp(-lambda * t_hit - mu * area));
          }
        }
        return p;
      });

  FirstPassageResult out;
  std::vector<MomentPartial> moments;
  moments.reserve(parts.size());
  for (const auto& p : parts) {
    moments.push_back(p.m);
    out.unabsorbed += p.unabsorbed;
    out.tail_bound = std::max(out.tail_bound, p.bound);
  }
  out.estimate = merge_moments(moments, cfg.seed);
  return out;
}

namespace {

// Pinned-bridge excursion attempt: returns true and fills path/area when the
// endpoint lands in the window.
bool excursion_attempt(const StableSampler& sampler, int n, double pin_window,
                       Rng& rng, std::vector<double>& incr,
                       std::vector<double>& walk, PathSample* out) {
  const double dt = 1.0 / n;
  const double scale = std::pow(dt, 1.0 / sampler.alpha());
  incr.resize(n);
  walk.resize(n + 1);
  double x = 0.0;
  walk[0] = 0.0;
  for (int k = 0; k < n; ++k) {
    incr[k] = scale * sampler.draw(rng);
    x += incr[k];
    walk[k + 1] = x;
  }
  if (std::fabs(x) > pin_window) return false;
  // spread the endpoint residue evenly: exact bridge, exact Vervaat rotation
  const double shim = x / n;
  int argmin = 0;
  double minv = 0.0, acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += incr[k] - shim;
    walk[k + 1] = acc;
    if (k + 1 < n && acc < minv) {
      minv = acc;
      argmin = k + 1;
    }
  }
  // rotate increments at the argmin and accumulate the area
  out->dt = dt;
  out->values.assign(n + 1, 0.0);
  double area = 0.0, y = 0.0;
  for (int j = 0; j < n; ++j) {
    area += y * dt;  // left endpoint, starts at 0
    int src = argmin + j;
    if (src >= n) src -= n;
    y += incr[src] - shim;
    out->values[j + 1] = y;
  }
  out->values[n] = 0.0;  // exact by construction
  out->area = area;
  out->t_hit.reset();
  return true;
}

}  // namespace

PathSample sample_excursion(const StableIndex& a, int n_steps, Rng& rng,
                            double pin_window, long long max_attempts) {
  if (n_steps < 100) throw InvalidInput("sample_excursion: requires n_steps >= 100");
  StableSampler sampler(a);
  std::vector<double> incr, walk;
  PathSample out;
  for (long long att = 0; att < max_attempts; ++att)
    if (excursion_attempt(sampler, n_steps, pin_window, rng, incr, walk, &out))
      return out;
  throw RejectionBudgetExceeded("sample_excursion: bridge pinning failed too often");
}

std::vector<double> excursion_areas(const StableIndex& a, int n_steps,
                                    long long n_samples, const McConfig& cfg,
                                    double pin_window) {
  if (n_steps < 100) throw InvalidInput("excursion_areas: requires n_steps >= 100");
  StableSampler sampler(a);
  struct Partial {
    std::vector<double> areas;
    bool exhausted = false;
  };
  auto parts = run_blocks<Partial>(
      n_samples, cfg, [&](long long, long long count, Rng rng) {
        Partial p;
        p.areas.reserve(count);
        std::vector<double> incr, walk;
        PathSample ps;
        long long budget = cfg.rejection_budget * count;
        for (long long i = 0; i < count; ++i) {
          bool ok = false;
          while (budget-- > 0) {
            if (excursion_attempt(sampler, n_steps, pin_window, rng, incr, walk,
                                  &ps)) {
              p.areas.push_back(ps.area);
              ok = true;
              break;
            }
          }
          if (!ok) {
            p.exhausted = true;
            break;
          }
        }
        return p;
      });
  std::vector<double> areas;
  areas.reserve(n_samples);
  for (auto& p : parts) {
    if (p.exhausted)
      throw RejectionBudgetExceeded("excursion_areas: attempt budget exhausted");
    areas.insert(areas.end(), p.areas.begin(), p.areas.end());
  }
  return areas;
}

PathSample sample_meander(const StableIndex& a, int n_steps, Rng& rng,
                          long long max_attempts) {
  if (n_steps < 100) throw InvalidInput("sample_meander: requires n_steps >= 100");
  StableSampler sampler(a);
  const double dt = 1.0 / n_steps;
  const double scale = std::pow(dt, 1.0 / a.alpha());
  PathSample out;
  out.dt = dt;
  out.values.resize(n_steps + 1);
  for (long long att = 0; att < max_attempts; ++att) {
    double x = 0.0, area = 0.0;
    out.values[0] = 0.0;
    bool alive = true;
    for (int k = 0; k < n_steps; ++k) {
      area += x * dt;
      x += scale * sampler.draw(rng);
      if (x <= 0.0) {
        alive = false;
        break;
      }
      out.values[k + 1] = x;
    }
    if (alive) {
      out.area = area;
      out.t_hit.reset();
      return out;
    }
  }
  throw RejectionBudgetExceeded("sample_meander: rejection budget exhausted");
}

std::vector<double> meander_areas(const StableIndex& a, int n_steps,
                                  long long n_samples, const McConfig& cfg) {
  if (n_steps < 100) throw InvalidInput("meander_areas: requires n_steps >= 100");
  StableSampler sampler(a);
  const double dt = 1.0 / n_steps;
  const double scale = std::pow(dt, 1.0 / a.alpha());
  struct Partial {
    std::vector<double> areas;
    bool exhausted = false;
  };
  auto parts = run_blocks<Partial>(
      n_samples, cfg, [&](long long, long long count, Rng rng) {
        Partial p;
        p.areas.reserve(count);
        long long budget = cfg.rejection_budget * count;
        for (long long i = 0; i < count; ++i) {
          bool ok = false;
          while (budget-- > 0) {
            double x = 0.0, area = 0.0;
            bool alive = true;
            for (int k = 0; k < n_steps; ++k) {
              area += x * dt;
              x += scale * sampler.draw(rng);
              if (x <= 0.0) {
                alive = false;
                break;
              }
            }
            if (alive) {
              p.areas.push_back(area);
              ok = true;
              break;
            }
          }
          if (!ok) {
            p.exhausted = true;
            break;
          }
        }
        return p;
      });
  std::vector<double> areas;
  areas.reserve(n_samples);
  for (auto& p : parts) {
    if (p.exhausted)
      throw RejectionBudgetExceeded("meander_areas: attempt budget exhausted");
    areas.insert(areas.end(), p.areas.begin(), p.areas.end());
  }
  return areas;
}

std::vector<WeightedSample> conditioned_weighted_areas(const StableIndex& a,
                                                       double x0, int n_steps,
                                                       long long n_samples,
                                                       const McConfig& cfg) {
  if (!(x0 > 0.0)) throw InvalidInput("conditioned_weighted_areas: requires x0 > 0");
  if (n_steps < 100)
    throw InvalidInput("conditioned_weighted_areas: requires n_steps >= 100");
  StableSampler sampler(a);
  const double dt = 1.0 / n_steps;
  const double scale = std::pow(dt, 1.0 / a.alpha());
  struct Partial {
    std::vector<WeightedSample> samples;
  };
  auto parts = run_blocks<Partial>(
      n_samples, cfg, [&](long long, long long count, Rng rng) {
        Partial p;
        p.samples.reserve(count);
        for (long long i = 0; i < count; ++i) {
          double x = x0, area = 0.0;
          bool alive = true;
          for (int k = 0; k < n_steps; ++k) {
            area += x * dt;
            x += scale * sampler.draw(rng);
            if (x <= 0.0) alive = false;  // keep simulating? no: weight is 0
            if (!alive) break;
          }
          WeightedSample ws;
          ws.area = area;
          ws.weight = alive ? x / x0 : 0.0;
          p.samples.push_back(ws);
        }
        return p;
      });
  std::vector<WeightedSample> all;
  all.reserve(n_samples);
  for (auto& p : parts)
    all.insert(all.end(), p.samples.begin(), p.samples.end());
  return all;
}

MCEstimate sample_conditioned_weighted(const StableIndex& a, double x0, int n_steps,
                                       const std::function<double(double)>& functional,
                                       long long n_samples, const McConfig& cfg) {
  auto samples = conditioned_weighted_areas(a, x0, n_steps, n_samples, cfg);
  double wsum = 0.0, wsq = 0.0;
  for (const auto& s : samples) {
    wsum += s.weight;
    wsq += s.weight * s.weight;
  }
  double ess = wsq > 0.0 ? wsum * wsum / wsq : 0.0;
  if (ess < 100.0)
    throw DegenerateWeights("sample_conditioned_weighted: effective sample size " +
                            std::to_string(ess));
  MomentPartial m;
  for (const auto& s : samples) m.add(s.weight * functional(s.area));
  return merge_moments({m}, cfg.seed);
}

double tail_log_slope(const std::vector<double>& samples, double q_lo, double q_hi) {
  if (samples.size() < 1000)
    throw InsufficientTail("tail_log_slope: needs >= 1000 samples");
  std::vector<double> xs = samples;
  std::sort(xs.begin(), xs.end());
  const long long n = static_cast<long long>(xs.size());
  long long i_lo = static_cast<long long>(q_lo * n);
  long long i_hi = std::min<long long>(static_cast<long long>(q_hi * n), n - 2);
  if (i_hi - i_lo < 50) throw InsufficientTail("tail_log_slope: too few tail points");
  // regression of ln Phat against ln x over the tail order statistics
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long m = 0;
  for (long long i = i_lo; i <= i_hi; ++i) {
    if (!(xs[i] > 0.0)) continue;
    double lx = std::log(xs[i]);
    double lp = std::log(static_cast<double>(n - i) / n);
    sx += lx;
    sy += lp;
    sxx += lx * lx;
    sxy += lx * lp;
    ++m;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double excursion_tail_slope(const std::vector<double>& areas, double q_lo,
                            double q_hi) {
  if (areas.size() < 10000)
    throw InsufficientTail("excursion_tail_slope: needs >= 10^4 samples");
  std::vector<double> xs = areas;
  std::sort(xs.begin(), xs.end());
  const long long n = static_cast<long long>(xs.size());
  long long i_lo = static_cast<long long>(q_lo * n);
  long long i_hi = std::min<long long>(static_cast<long long>(q_hi * n), n - 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long m = 0;
  for (long long i = i_lo; i <= i_hi; ++i) {
    if (!(xs[i] > 0.0)) continue;
    double lx = std::log(xs[i]);
    double p = static_cast<double>(n - i) / n;
    double y = std::log(-std::log(p));
    sx += lx;
    sy += y;
    sxx += lx * lx;
    sxy += lx * y;
    ++m;
  }
  if (m < 50) throw InsufficientTail("excursion_tail_slope: too few tail points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double weighted_tail_log_slope(const std::vector<WeightedSample>& samples,
                               double q_lo, double q_hi) {
  std::vector<WeightedSample> xs;
  xs.reserve(samples.size());
  double wtot = 0.0;
  for (const auto& s : samples)
    if (s.weight > 0.0) {
      xs.push_back(s);
      wtot += s.weight;
    }
  if (xs.size() < 1000)
    throw InsufficientTail("weighted_tail_log_slope: too few live samples");
  std::sort(xs.begin(), xs.end(),
            [](const WeightedSample& a, const WeightedSample& b) {
              return a.area < b.area;
            });
  // weighted survival function, regressed between the weighted quantiles
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  long long m = 0;
  double cum = 0.0;
  for (auto& s : xs) {
    cum += s.weight;
    double p = 1.0 - cum / wtot;
    if (p <= 0.0) break;
    double q = cum / wtot;
    if (q < q_lo || q > q_hi) continue;
    if (!(s.area > 0.0)) continue;
    double lx = std::log(s.area);
    double lp = std::log(p);
    sx += lx;
    sy += lp;
    sxx += lx * lx;
    sxy += lx * lp;
    ++m;
  }
  if (m < 50) throw InsufficientTail("weighted_tail_log_slope: too few tail points");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

double ks_two_sample_pvalue(std::vector<double> xs, std::vector<double> ys) {
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double n1 = static_cast<double>(xs.size());
  const double n2 = static_cast<double>(ys.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < xs.size() && j < ys.size()) {
    if (xs[i] <= ys[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(i / n1 - j / n2));
  }
  double ne = std::sqrt(n1 * n2 / (n1 + n2));
  double lam = (ne + 0.12 + 0.11 / ne) * d;
  double p = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lam * lam);
    p += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * p, 0.0, 1.0);
}

MCEstimate summarize(const std::vector<double>& xs, std::uint64_t seed) {
  MomentPartial m;
  for (double v : xs) m.add(v);
  return merge_moments({m}, seed);
}

}  // namespace stablearea::mc
