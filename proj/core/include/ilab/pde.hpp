#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "ilab/types.hpp"

namespace ilab::pde {

struct GridConfig {
  double h = 0.01;       // uniform spacing in the arsinh coordinate
  double domain_a = 8.0; // grid covers [-A, A] in the arsinh coordinate
  double dt = 1e-4;      // Crank-Nicolson time step
  double mass_defect_tol = 1e-4;
};

// Transition density of the one-dimensional diffusion (level n, primal or
// dual) on a grid, with respect to Lebesgue measure in the original
// coordinate.  values(i, j) = p_t(x_i, x_j): row = source point.
//
// The solver works in the arsinh coordinate, where the generator has bounded
// coefficients, and uses a speed-measure-weighted flux discretization, so the
// discrete chain is in detailed balance with the exact speed density at the
// nodes.  Time stepping is Crank-Nicolson with an implicit-Euler startup to
// damp the delta initial condition.
struct DensityGrid {
  std::vector<double> w;  // arsinh coordinates
  std::vector<double> x;  // sinh(w)
  Eigen::MatrixXd values;
  double t = 0.0;
  double mass_defect = 0.0;
  int level = 1;
  bool dual = false;
  HPParams params{};
  GridConfig config{};

  int size() const { return static_cast<int>(w.size()); }

  // Nearest grid index of the point with sinh(w_j) closest to xq.
  int index_of(double xq) const;

  // Bilinear interpolation of p_t(xs, xd) in the arsinh plane.
  double interp(double xs, double xd) const;

  // Cumulative mass from the source node i up to destination node j
  // (trapezoid in the arsinh coordinate); cdf(i, m-1) is the row mass.
  double cdf_at_node(int i, int j) const { return cdf_(i, j); }

  double row_mass(int i) const { return cdf_(i, size() - 1); }

  void write_csv(std::ostream& os) const;

  void build_cdf();  // called by the solver; table shared read-only after

private:
  Eigen::MatrixXd cdf_;
};

DensityGrid solve_density(int level, const HPParams& p, bool dual, double t,
                          const GridConfig& cfg = {}, int workers = 0);

// Process-wide cache keyed by (level, dual, params, t, cfg); solves on miss.
const DensityGrid& solve_density_cached(int level, const HPParams& p, bool dual,
                                        double t, const GridConfig& cfg = {},
                                        int workers = 0);
void clear_density_cache();

// det(p_t(x_i, y_j)) by interpolation; with the prefactor flag multiplies by
// exp(-lambda_{N,s} t) Delta(y)/Delta(x).
double km_determinant(const DensityGrid& g, const WeylPoint& x, const WeylPoint& y,
                      bool h_transform_prefactor = false);

// Max |  -d/dy CDF_p(y -> x)  -  p_hat(x -> y) | over an n_lattice^2 lattice
// of central (x, y) pairs.  Both grids must share level and configuration.
double check_siegmund_pde(const DensityGrid& primal, const DensityGrid& dual_grid,
                          int n_lattice = 10);

// Intertwining of the killed two-particle semigroup with the dual-weighted
// kernel, at the two-to-one level: max absolute gap between
//   LHS(y') = m_hat(y') [ P_1(y') Q_2(y') - P_2(y') Q_1(y') ]
//   RHS(y') = int_{x_1}^{x_2} m_hat(y) p_hat_t(y, y') dy
// over y' in a central window and source pairs x = (x_1, x_2) from the
// supplied lattice.
double check_intermediate_intertwining(const DensityGrid& primal2,
                                       const DensityGrid& dual2,
                                       const std::vector<std::pair<double, double>>& x_pairs);

struct BlockKernelGaps {
  double integrate_destinations = 0.0;  // against det D
  double integrate_sources = 0.0;       // against det A * m_hat(y')
};

// Both integral identities of the block determinant kernel at the
// two-to-one level, for a configuration ((x1,x2), y) and ((x1',x2'), y')
// with y in [x1,x2], y' in [x1',x2'].
BlockKernelGaps check_block_kernel(const DensityGrid& primal2, const DensityGrid& dual2,
                                   double x1, double x2, double y,
                                   double x1_prime, double x2_prime, double y_prime);

// Max relative gap of
//   exp(-c_{N,s} t) p_hat^{(N+1)}_t(x, y) m_hat(x)/m_hat(y)  vs  p^{(N)}_t(x, y)
// over the sub-grid |x|, |y| <= window.
double check_h_transform(const DensityGrid& primal_n, const DensityGrid& dual_np1,
                         double window = 2.0);

}  // namespace ilab::pde
