#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ilab/random.hpp"
#include "ilab/types.hpp"

namespace ilab::sde {

enum class Kind { hp, dbm, ou, hp_1d, hp_dual_1d, circle };

struct SdeSpec {
  Kind kind = Kind::hp;
  HPParams params{};      // s and level; for interacting kinds params.n is the
                          // particle count, for 1-d kinds it is the level.
  double ou_rate = 1.0;   // c, for kind::ou
  double dt_base = 1e-3;
};

struct PathRecord {
  std::vector<double> times;
  std::vector<WeylPoint> states;
  std::uint64_t seed = 0;
  double dt_effective = 0.0;  // smallest accepted step over the run
};

// Drift and diffusion coefficients of the selected system, written into
// caller-owned buffers (dimension = x.size()).
void drift(const SdeSpec& spec, std::span<const double> x, std::span<double> out);
void diffusion(const SdeSpec& spec, std::span<const double> x, std::span<double> out);

// Interacting-system coefficients in explicit form.
std::vector<double> hp_drift(const WeylPoint& x, const HPParams& p);
std::vector<double> hp_diffusion(const WeylPoint& x);

// Stepper state reused across steps to keep the hot loop allocation-free.
class Stepper {
public:
  Stepper(const SdeSpec& spec, int dim);

  // Advances the state over [0, T] with adaptive Euler-Maruyama: a proposed
  // step is accepted only if ordering (or the angle range, for the circle
  // kind) survives and every particle moves less than 10 sigma_i sqrt(dt);
  // otherwise dt halves, up to 20 times per attempted step.  On success the
  // working step grows back toward dt_base.  dt_start (0 = dt_base) sets the
  // first working step; after a diffraction step it must be of the order of
  // the micro-step so the near-collision phase stays within the halving
  // budget.
  void advance(std::vector<double>& state, double T, RandomStream& rng,
               double dt_start = 0.0);

  // A single noise-only micro-step (drift switched off), used to separate
  // tied coordinates before the interaction term is evaluated.
  void diffraction_step(std::vector<double>& state, double dt, RandomStream& rng);

  double min_accepted_dt() const { return min_dt_; }

private:
  bool try_step(std::vector<double>& state, double dt, RandomStream& rng);
  bool admissible(const std::vector<double>& proposal) const;

  SdeSpec spec_;
  int dim_;
  std::vector<double> drift_, diff_, prop_;
  double min_dt_ = 0.0;
};

// Full simulation with `snapshots` equally spaced recorded states
// (including t = 0 and t = T).
PathRecord simulate(const SdeSpec& spec, const WeylPoint& x0, double T,
                    RandomStream& rng, int snapshots = 2);

// Simulation from a possibly tied start: an initial noise-only sub-step of
// length dt_init (must be <= dt_base * 1e-4) separates the particles, after
// which the path continues exactly as simulate().
PathRecord simulate_degenerate_start(const SdeSpec& spec, const WeylPoint& x0, double T,
                                     RandomStream& rng, double dt_init, int snapshots = 2);

// Terminal values of n_paths independent paths, row-major (n_paths x dim).
// init fills the initial state for path i from the same per-path stream the
// path noise uses; results are deterministic in (seed, n_paths, workers-free).
std::vector<double> terminal_ensemble(
    const SdeSpec& spec, int dim, double T, std::size_t n_paths, std::uint64_t seed,
    int workers,
    const std::function<void(std::size_t, RandomStream&, std::span<double>)>& init);

// Closed-form boundary flows.
OmegaPoint dbm_boundary_flow(const OmegaPoint& start, double t);
OmegaPoint ou_boundary_flow(const OmegaPoint& start, double t, double c);

// One-dimensional generator, primal or dual, applied to f at x:
//   (x^2+1) f'' + [(2-2n-2 Re s) x + 2 Im s] f'        (primal)
//   (x^2+1) f'' + [(2n+2 Re s) x - 2 Im s] f'          (dual)
double generator_apply_1d(int n, const HPParams& p, bool dual,
                          const std::function<double(double)>& f,
                          const std::function<double(double)>& fp,
                          const std::function<double(double)>& fpp, double x);

// Same, with centered finite differences (h = 1e-5) for the derivatives.
double generator_apply_1d(int n, const HPParams& p, bool dual,
                          const std::function<double(double)>& f, double x);

// Relative residual of the Vandermonde eigenfunction identity at x, using
// the analytic partial derivatives:
//   | sum_i L_{s,x_i} Delta - lambda_{N,s} Delta | / |Delta|.
double eigenfunction_check(int n, const HPParams& p, const WeylPoint& x);

}  // namespace ilab::sde
