#include "ilab/multilevel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ilab/links.hpp"
#include "ilab/parallel.hpp"

namespace ilab::multilevel {

namespace {

constexpr double kTieTolerance = 1e-12;
constexpr double kGaussNodes15[] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601700, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGaussWeights15[] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss15(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < 15; ++i) s += kGaussWeights15[i] * f(mid + half * kGaussNodes15[i]);
  return s * half;
}

}  // namespace

GTPattern gibbs_sample(const std::function<WeylPoint(RandomStream&)>& bottom_sampler,
                       RandomStream& rng) {
  WeylPoint bottom = bottom_sampler(rng);
  if (!bottom.strictly_ordered())
    throw NumericError("gibbs_sample: bottom sampler produced a tied point");
  return links::gt_uniform_sample(bottom, rng);
}

namespace {

struct LevelStepper {
  double lin;   // (2 - 2n - 2 Re s)
  double s_im;
  double step(double x, double dt, RandomStream& rng) const {
    const double sigma = std::sqrt(2.0 * (x * x + 1.0));
    return x + (lin * x + 2.0 * s_im) * dt + sigma * std::sqrt(dt) * rng.normal();
  }
};

}  // namespace

ReflectedResult reflected_simulate(const ReflectedSpec& spec, const GTPattern& start,
                                   double T, RandomStream& rng,
                                   const ReflectedOptions& opts) {
  if (!start.interlacing())
    throw std::invalid_argument("reflected_simulate: start pattern not interlacing");
  const int depth = start.depth();
  ReflectedResult res;
  res.pattern = start;
  std::vector<LevelStepper> steppers(static_cast<std::size_t>(depth));
  for (int n = 1; n <= depth; ++n)
    steppers[static_cast<std::size_t>(n - 1)] =
        LevelStepper{2.0 - 2.0 * n - 2.0 * spec.params.s_re, spec.params.s_im};

  double t = 0.0;
  while (t < T - 1e-15 * T) {
    const double dt = std::min(spec.dt_base, T - t);
    auto& lv = res.pattern.levels;
    // level 1 moves freely
    if (!opts.freeze_level_one)
      lv[0].values[0] = steppers[0].step(lv[0].values[0], dt, rng);
    // level n particles move independently, then land inside the moving
    // interval formed by the already-updated level n-1
    for (int n = 2; n <= depth; ++n) {
      auto& cur = lv[static_cast<std::size_t>(n - 1)].values;
      const auto& below = lv[static_cast<std::size_t>(n - 2)].values;
      for (int i = 0; i < n; ++i) {
        double x = steppers[static_cast<std::size_t>(n - 1)].step(
            cur[static_cast<std::size_t>(i)], dt, rng);
        const double lo = i == 0 ? -std::numeric_limits<double>::infinity()
                                 : below[static_cast<std::size_t>(i - 1)];
        const double hi = i == n - 1 ? std::numeric_limits<double>::infinity()
                                     : below[static_cast<std::size_t>(i)];
        if (lo == hi)
          x = lo;  // pinched interval, tie-break at the midpoint
        else
          x = std::clamp(x, lo, hi);
        cur[static_cast<std::size_t>(i)] = x;
      }
      for (int i = 1; i < n; ++i) {
        if (cur[static_cast<std::size_t>(i)] - cur[static_cast<std::size_t>(i - 1)] <=
            kTieTolerance) {
          res.stopped = true;
          res.stop_time = t + dt;
          return res;
        }
      }
    }
    t += dt;
  }
  return res;
}

std::vector<PatternSnapshot> reflected_simulate_path(const ReflectedSpec& spec,
                                                     const GTPattern& start, double T,
                                                     RandomStream& rng, int snapshots,
                                                     const ReflectedOptions& opts) {
  snapshots = std::max(snapshots, 2);
  std::vector<PatternSnapshot> out;
  out.reserve(static_cast<std::size_t>(snapshots));
  out.push_back({0.0, start});
  GTPattern cur = start;
  for (int k = 1; k < snapshots; ++k) {
    const double t0 = T * (k - 1) / (snapshots - 1);
    const double t1 = T * k / (snapshots - 1);
    ReflectedResult r = reflected_simulate(spec, cur, t1 - t0, rng, opts);
    cur = r.pattern;
    out.push_back({t1, cur});
    if (r.stopped) break;
  }
  return out;
}

std::vector<double> conditional_uniform_coords(const GTPattern& pattern) {
  const int depth = pattern.depth();
  if (depth == 2) {
    const double y = pattern.level(1).values[0];
    const double a = pattern.level(2).values[0], b = pattern.level(2).values[1];
    return {(y - a) / (b - a)};
  }
  if (depth == 3) {
    // Rosenblatt transform of the level-2 pair given the bottom row; the
    // conditional density is proportional to (y2 - y1) on the polytope.
    const double y1 = pattern.level(2).values[0], y2 = pattern.level(2).values[1];
    const double x1 = pattern.level(3).values[0], x2 = pattern.level(3).values[1],
                 x3 = pattern.level(3).values[2];
    auto inner = [&](double a) {  // integral over y2 of (y2 - a)
      const double lo = std::max(a, x2);
      return [lo, a](double hi) {
        return 0.5 * (hi - a) * (hi - a) - 0.5 * (lo - a) * (lo - a);
      };
    };
    auto marginal1 = [&](double a) { return inner(a)(x3); };
    const double z = gauss15(marginal1, x1, x2);
    const double u1 = gauss15(marginal1, x1, y1) / z;
    const double u2 = inner(y1)(y2) / inner(y1)(x3);
    return {u1, u2};
  }
  throw std::invalid_argument("conditional_uniform_coords: supported for depth 2 and 3");
}

// --- push-block -------------------------------------------------------------

double right_rate(const PushBlockParams& p, int level_n, long long x) {
  const double xd = static_cast<double>(x);
  return (xd - (p.u + level_n - 1.0)) * (xd - (p.u_prime + level_n - 1.0));
}

double left_rate(const PushBlockParams& p, int /*level_n*/, long long x) {
  const double xd = static_cast<double>(x);
  return (xd + p.v) * (xd + p.v_prime);
}

void validate_rates_on_window(const PushBlockParams& p, long long lo, long long hi) {
  for (int n = 1; n <= p.depth; ++n)
    for (long long x = lo; x <= hi; ++x)
      if (right_rate(p, n, x) < 0.0 || left_rate(p, n, x) < 0.0)
        throw std::invalid_argument("push-block rates negative on the configured window");
}

bool IntPattern::interlacing() const {
  for (int n = 1; n <= depth(); ++n) {
    const auto& cur = levels[static_cast<std::size_t>(n - 1)];
    if (static_cast<int>(cur.size()) != n) return false;
    for (int i = 1; i < n; ++i)
      if (cur[static_cast<std::size_t>(i)] <= cur[static_cast<std::size_t>(i - 1)])
        return false;
    if (n > 1) {
      const auto& below = levels[static_cast<std::size_t>(n - 2)];
      // x^{(n)}_k <= x^{(n-1)}_k < x^{(n)}_{k+1}
      for (int k = 0; k < n - 1; ++k) {
        if (cur[static_cast<std::size_t>(k)] > below[static_cast<std::size_t>(k)])
          return false;
        if (below[static_cast<std::size_t>(k)] >= cur[static_cast<std::size_t>(k + 1)])
          return false;
      }
    }
  }
  return true;
}

namespace {

void check_rate(double r, const char* which) {
  if (r < 0.0)
    throw NumericError(std::string("pushblock_simulate: negative ") + which +
                       " rate at a visited site");
}

}  // namespace

namespace detail {

// Right move of particle k (0-based) at level n (1-based), with blocking and
// push propagation.
void move_right(IntPattern& pat, int n, int k) {
  auto& lv = pat.levels;
  if (n >= 2) {
    const auto& below = lv[static_cast<std::size_t>(n - 2)];
    if (k < n - 1 && below[static_cast<std::size_t>(k)] == lv[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)])
      return;  // blocked: clock consumed, nothing moves
  }
  lv[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] += 1;
  // push upward while strict interlacing x^{(m)}_k < x^{(m+1)}_{k+1} fails
  int m = n, kk = k;
  while (m < pat.depth()) {
    auto& above = lv[static_cast<std::size_t>(m)];
    if (lv[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(kk)] ==
        above[static_cast<std::size_t>(kk + 1)]) {
      above[static_cast<std::size_t>(kk + 1)] += 1;
      kk = kk + 1;
      m += 1;
    } else {
      break;
    }
  }
}

void move_left(IntPattern& pat, int n, int k) {
  auto& lv = pat.levels;
  if (n >= 2 && k >= 1) {
    const auto& below = lv[static_cast<std::size_t>(n - 2)];
    if (below[static_cast<std::size_t>(k - 1)] ==
        lv[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] - 1)
      return;  // blocked
  }
  lv[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)] -= 1;
  // push upward while x^{(m+1)}_k <= x^{(m)}_k fails
  int m = n, kk = k;
  while (m < pat.depth()) {
    auto& above = lv[static_cast<std::size_t>(m)];
    if (above[static_cast<std::size_t>(kk)] - 1 ==
        lv[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(kk)]) {
      above[static_cast<std::size_t>(kk)] -= 1;
      m += 1;
    } else {
      break;
    }
  }
}

}  // namespace detail

IntPattern pushblock_simulate(const PushBlockParams& p, const IntPattern& start,
                              double T, RandomStream& rng) {
  if (!start.interlacing())
    throw std::invalid_argument("pushblock_simulate: start not interlacing");
  IntPattern pat = start;
  const int depth = pat.depth();
  std::vector<double> rates;
  double t = 0.0;
  for (;;) {
    rates.clear();
    double total = 0.0;
    for (int n = 1; n <= depth; ++n)
      for (int k = 0; k < n; ++k) {
        const long long x = pat.levels[static_cast<std::size_t>(n - 1)][static_cast<std::size_t>(k)];
        const double rr = right_rate(p, n, x);
        const double rl = left_rate(p, n, x);
        check_rate(rr, "right");
        check_rate(rl, "left");
        rates.push_back(rr);
        rates.push_back(rl);
        total += rr + rl;
      }
    if (total <= 0.0) return pat;  // absorbing configuration
    t += rng.exponential(total);
    if (t >= T) return pat;
    double pick = rng.uniform() * total;
    std::size_t idx = 0;
    while (idx + 1 < rates.size() && pick > rates[idx]) {
      pick -= rates[idx];
      ++idx;
    }
    const int particle = static_cast<int>(idx / 2);
    const bool right = (idx % 2) == 0;
    int n = 1, k = particle;
    while (k >= n) {
      k -= n;
      ++n;
    }
    if (right)
      detail::move_right(pat, n, k);
    else
      detail::move_left(pat, n, k);
  }
}

std::vector<PushBlockSnapshot> pushblock_simulate_path(const PushBlockParams& p,
                                                       const IntPattern& start, double T,
                                                       RandomStream& rng, int snapshots) {
  snapshots = std::max(snapshots, 2);
  std::vector<PushBlockSnapshot> out;
  out.push_back({0.0, start});
  IntPattern cur = start;
  for (int k = 1; k < snapshots; ++k) {
    const double t0 = T * (k - 1) / (snapshots - 1);
    const double t1 = T * k / (snapshots - 1);
    cur = pushblock_simulate(p, cur, t1 - t0, rng);
    out.push_back({t1, cur});
  }
  return out;
}

LogIncrementStats pushblock_log_increments(const PushBlockParams& p, int level_n,
                                           double scale, double x0, double t,
                                           std::size_t n_paths, std::uint64_t seed,
                                           int workers) {
  const long long start = static_cast<long long>(std::llround(x0 * scale));
  std::vector<double> incs(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed, i));
    long long x = start;
    double tau = 0.0;
    for (;;) {
      const double rr = right_rate(p, level_n, x);
      const double rl = left_rate(p, level_n, x);
      check_rate(rr, "right");
      check_rate(rl, "left");
      const double total = rr + rl;
      if (total <= 0.0) break;
      tau += rng.exponential(total);
      if (tau >= t) break;
      x += rng.uniform() * total < rr ? 1 : -1;
    }
    incs[i] = std::log(static_cast<double>(x) / static_cast<double>(start));
  });
  LogIncrementStats st;
  double sum = 0.0;
  for (double v : incs) sum += v;
  st.mean = sum / static_cast<double>(n_paths);
  double ss = 0.0, s4 = 0.0;
  for (double v : incs) {
    const double d = v - st.mean;
    ss += d * d;
    s4 += d * d * d * d;
  }
  const double n = static_cast<double>(n_paths);
  st.variance = ss / (n - 1.0);
  st.se_mean = std::sqrt(st.variance / n);
  const double m4 = s4 / n;
  const double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * st.variance * st.variance) / n;
  st.se_var = std::sqrt(std::max(var_of_var, 0.0));
  return st;
}

}  // namespace ilab::multilevel
