#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ilab/random.hpp"
#include "ilab/types.hpp"

namespace ilab::multilevel {

struct ReflectedSpec {
  HPParams params{};      // params.n = pattern depth
  double dt_base = 1e-3;
};

struct ReflectedOptions {
  bool freeze_level_one = false;  // diagnostic: break the coupling on purpose
};

struct ReflectedResult {
  GTPattern pattern;
  bool stopped = false;   // same-level coincidence (tolerance 1e-12)
  double stop_time = 0.0;
};

struct PatternSnapshot {
  double t = 0.0;
  GTPattern pattern;
};

// Gibbs/central sample: bottom row from the supplied sampler, upper levels
// uniform on the interlacing polytope.
GTPattern gibbs_sample(const std::function<WeylPoint(RandomStream&)>& bottom_sampler,
                       RandomStream& rng);

// Reflected multilevel dynamics: per step, level 1 takes a free Euler move;
// each particle of level n >= 2 takes an independent level-n Euler move and
// is then projected into the moving interval formed by the already-updated
// level below.  Interlacing holds after every step by construction.
ReflectedResult reflected_simulate(const ReflectedSpec& spec, const GTPattern& start,
                                   double T, RandomStream& rng,
                                   const ReflectedOptions& opts = {});

// Same, recording `snapshots` equally spaced pattern states.
std::vector<PatternSnapshot> reflected_simulate_path(const ReflectedSpec& spec,
                                                     const GTPattern& start, double T,
                                                     RandomStream& rng, int snapshots,
                                                     const ReflectedOptions& opts = {});

// Rosenblatt coordinates of the upper levels conditionally on the bottom row:
// under the Gibbs property each returned coordinate is uniform on (0,1).
// Supported for depth 2 and 3.
std::vector<double> conditional_uniform_coords(const GTPattern& pattern);

// --- discrete push-block chain -------------------------------------------

struct PushBlockParams {
  double u = 0.0, u_prime = 0.0, v = 0.0, v_prime = 0.0;
  int depth = 1;
};

// Jump rates of a level-n particle at site x.
double right_rate(const PushBlockParams& p, int level_n, long long x);
double left_rate(const PushBlockParams& p, int level_n, long long x);

// Throws std::invalid_argument if either rate is negative anywhere on the
// window [lo, hi] for any level up to depth.
void validate_rates_on_window(const PushBlockParams& p, long long lo, long long hi);

// Strictly ordered integer levels with x^{(n)}_k <= x^{(n-1)}_k < x^{(n)}_{k+1}.
struct IntPattern {
  std::vector<std::vector<long long>> levels;
  int depth() const { return static_cast<int>(levels.size()); }
  bool interlacing() const;
};

struct PushBlockSnapshot {
  double t = 0.0;
  IntPattern pattern;
};

// Event-driven continuous-time chain with blocking (by the level below) and
// instantaneous pushing (of the levels above).  Throws NumericError if a
// visited site has a negative rate.
IntPattern pushblock_simulate(const PushBlockParams& p, const IntPattern& start,
                              double T, RandomStream& rng);

std::vector<PushBlockSnapshot> pushblock_simulate_path(const PushBlockParams& p,
                                                       const IntPattern& start, double T,
                                                       RandomStream& rng, int snapshots);

// Log-increment moments of the rescaled single-particle level-n chain started
// at round(x0 * scale): returns (mean, variance, se_mean, se_var) of
// log(X(t)/X(0)) over n_paths paths.
struct LogIncrementStats {
  double mean = 0.0, variance = 0.0, se_mean = 0.0, se_var = 0.0;
};
LogIncrementStats pushblock_log_increments(const PushBlockParams& p, int level_n,
                                           double scale, double x0, double t,
                                           std::size_t n_paths, std::uint64_t seed,
                                           int workers);

namespace detail {
// Single push-block moves (level n is 1-based, particle k is 0-based),
// exposed for direct rule tests.
void move_right(IntPattern& pat, int n, int k);
void move_left(IntPattern& pat, int n, int k);
}  // namespace detail

}  // namespace ilab::multilevel
