#pragma once

#include <complex>
#include <vector>

#include "ilab/types.hpp"

namespace ilab {

// Scalar Cayley transform between the real line and the open angle interval
// (-pi, pi):  theta = 2 atan(x),  x = tan(theta / 2).
double cayley_to_angle(double x);
double angle_to_cayley(double theta);

// Vandermonde product over ordered pairs; 1 for n <= 1.
double vandermonde(const WeylPoint& x);

// First and second partial derivatives of the Vandermonde product in each
// coordinate, in closed form via logarithmic differentiation.
std::vector<double> vandermonde_grad(const WeylPoint& x);
std::vector<double> vandermonde_second(const WeylPoint& x);

// Eigenvalue of the Vandermonde product under the sum of level-N
// single-particle generators:  n(n-1)(-2n+1-3 Re s)/3.
double km_eigenvalue(int n, double s_re);

// Eigenvalue of the inverse dual speed density under the dual generator:
// c_{N,s} = -2N - 2 Re s.  Satisfies lambda_{N+1} = lambda_N + N c_N exactly.
double dual_constant(int n, double s_re);

// Finite-level embedding into the boundary coordinates: scaled positive /
// negative extremes, mean, and scaled sum of squares.
OmegaPoint embed(const WeylPoint& x);

// Characteristic function F_omega(x); exact finite product over the stored
// alpha entries.
std::complex<double> charfunc(const OmegaPoint& omega, double x);

// Unnormalized log density of the level-N measure:
//   2 log Delta(x) + sum_j [ -(s_re+N) log(1+x_j^2) + 2 s_im atan(x_j) ].
// Requires strictly ordered x; throws NumericError on a tie.
double hp_log_density_unnorm(const WeylPoint& x, const HPParams& p);

// Speed density of the level-n one-dimensional diffusion, or of its dual:
//   m(x)    = (1+x^2)^(-s_re-n)   exp( 2 s_im atan x)
//   m_hat(x)= (1+x^2)^(s_re+n-1)  exp(-2 s_im atan x)
double speed_density(double x, int n, const HPParams& p, bool dual);
double log_speed_density(double x, int n, const HPParams& p, bool dual);

}  // namespace ilab
