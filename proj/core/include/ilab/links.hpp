#pragma once

#include <cstddef>

#include "ilab/random.hpp"
#include "ilab/rmt.hpp"
#include "ilab/types.hpp"

namespace ilab::links {

// Density of the level link on the interlacing polytope:
//   N! Delta_N(y) / Delta_{N+1}(x)  for y interlacing x, else 0.
// Undefined (throws) when x has ties; use link_sample there instead.
double link_density(const WeylPoint& x, const WeylPoint& y);

// Exact draw from the link via the matrix representation: eigenvalues of the
// N x N corner of U* diag(x) U with U Haar on the (N+1)-dimensional unitary
// group.  Valid for arbitrary x, ties included.
WeylPoint link_sample(const WeylPoint& x, RandomStream& rng);

// Uniform pattern with fixed bottom row, built by chaining link_sample from
// level N-1 down to level 1.
GTPattern gt_uniform_sample(const WeylPoint& bottom, RandomStream& rng);

// Unnormalized dual-weighted kernel: prod_i m_hat^{(N+1)}(y_i) on the
// interlacing polytope, else 0.  p.n is ignored; the level is taken from x.
double lambda_hat_density(const WeylPoint& x, const WeylPoint& y, const HPParams& p);

// h-function paired with the kernel above:
//   h(y) = prod_i [m_hat^{(N+1)}]^{-1}(y_i) * Delta_N(y);
// integrating h against the kernel over the polytope gives
// Delta_{N+1}(x) / N!.
double lambda_hat_h_function(const WeylPoint& y, int n_plus_1, const HPParams& p);

// Draw from the boundary kernel at level n: eigenvalues of an ergodic-measure
// matrix sample with parameter omega.
WeylPoint boundary_link_sample(const OmegaPoint& omega, int n, RandomStream& rng);

enum class HPMethod { cue_cayley, mh };

struct MHConfig {
  // The sorted-extreme coordinates decorrelate over ~2e3 sweeps at the
  // default proposal scale, so validation against the exact route needs
  // thinning of this order.
  std::size_t burn_in = 10000;
  std::size_t thinning = 300;
  double scale_factor = 0.5;  // per-coordinate proposal scale is factor/sqrt(N)
};

// Single draw from the level-N measure.  cue_cayley is exact and only valid
// at s = 0 (angles of a Haar unitary mapped through the Cayley transform);
// mh runs a random-walk chain on the unnormalized log density and is valid
// for Re(s) > -1/2.
WeylPoint hp_sample(const HPParams& p, HPMethod method, RandomStream& rng,
                    const MHConfig& mh = {});

// Chain sampler: one burn-in, then draws every `thinning` accepted sweeps.
std::vector<WeylPoint> hp_sample_chain(const HPParams& p, std::size_t n_draws,
                                       RandomStream& rng, const MHConfig& mh = {});

// Ascending eigenangles in (-pi, pi] of a Haar unitary.
std::vector<double> cue_sample(int n, RandomStream& rng);

}  // namespace ilab::links
