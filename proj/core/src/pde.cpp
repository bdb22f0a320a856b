#include "ilab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <ostream>
#include <tuple>

#include "ilab/core.hpp"
#include "ilab/parallel.hpp"

namespace ilab::pde {

namespace {

// Tridiagonal system with precomputed Thomas factorization; the left-hand
// matrix is shared by every source column.
struct TridiagSolver {
  std::vector<double> sub, diag, sup;      // matrix bands
  std::vector<double> cp, inv_denom;       // factorization

  void factor() {
    const std::size_t m = diag.size();
    cp.assign(m, 0.0);
    inv_denom.assign(m, 0.0);
    double denom = diag[0];
    inv_denom[0] = 1.0 / denom;
    cp[0] = sup[0] * inv_denom[0];
    for (std::size_t j = 1; j < m; ++j) {
      denom = diag[j] - sub[j] * cp[j - 1];
      inv_denom[j] = 1.0 / denom;
      cp[j] = sup[j] * inv_denom[j];
    }
  }

  void solve_in_place(std::vector<double>& d) const {
    const std::size_t m = diag.size();
    d[0] *= inv_denom[0];
    for (std::size_t j = 1; j < m; ++j)
      d[j] = (d[j] - sub[j] * d[j - 1]) * inv_denom[j];
    for (std::size_t j = m - 1; j-- > 0;) d[j] -= cp[j] * d[j + 1];
  }
};

struct Discretization {
  std::vector<double> w, x, node_mass;     // node speed density in the w coordinate
  std::vector<double> gen_sub, gen_diag, gen_sup;  // forward generator bands

  // Apply the generator to u (densities in w), scaled by factor, added to out.
  void apply(const std::vector<double>& u, double factor, std::vector<double>& out) const {
    const std::size_t m = w.size();
    out[0] = u[0] + factor * (gen_diag[0] * u[0] + gen_sup[0] * u[1]);
    for (std::size_t j = 1; j + 1 < m; ++j)
      out[j] = u[j] + factor * (gen_sub[j] * u[j - 1] + gen_diag[j] * u[j] + gen_sup[j] * u[j + 1]);
    out[m - 1] = u[m - 1] + factor * (gen_sub[m - 1] * u[m - 2] + gen_diag[m - 1] * u[m - 1]);
  }
};

// Node speed density in the arsinh coordinate:
//   log M(w) = (beta - 1) log cosh(w) + gamma atan(sinh(w)),
// beta, gamma the linear drift coefficients of the original generator.
Discretization build_discretization(int level, const HPParams& p, bool dual,
                                    const GridConfig& cfg) {
  Discretization d;
  const int m = static_cast<int>(std::llround(2.0 * cfg.domain_a / cfg.h)) + 1;
  d.w.resize(static_cast<std::size_t>(m));
  d.x.resize(static_cast<std::size_t>(m));
  d.node_mass.resize(static_cast<std::size_t>(m));
  const double beta = dual ? 2.0 * level + 2.0 * p.s_re : 2.0 - 2.0 * level - 2.0 * p.s_re;
  const double gamma = dual ? -2.0 * p.s_im : 2.0 * p.s_im;
  for (int j = 0; j < m; ++j) {
    const double w = -cfg.domain_a + cfg.h * j;
    d.w[static_cast<std::size_t>(j)] = w;
    d.x[static_cast<std::size_t>(j)] = std::sinh(w);
    const double logm = (beta - 1.0) * std::log(std::cosh(w)) + gamma * std::atan(std::sinh(w));
    d.node_mass[static_cast<std::size_t>(j)] = std::exp(logm);
  }
  // Flux form of the forward operator with geometric-mean edge weights: the
  // resulting chain is in exact detailed balance with node_mass.
  d.gen_sub.assign(static_cast<std::size_t>(m), 0.0);
  d.gen_diag.assign(static_cast<std::size_t>(m), 0.0);
  d.gen_sup.assign(static_cast<std::size_t>(m), 0.0);
  const double inv_h2 = 1.0 / (cfg.h * cfg.h);
  std::vector<double> edge(static_cast<std::size_t>(m - 1));
  for (int j = 0; j + 1 < m; ++j)
    edge[static_cast<std::size_t>(j)] = std::sqrt(d.node_mass[static_cast<std::size_t>(j)] *
                                                  d.node_mass[static_cast<std::size_t>(j + 1)]);
  for (int j = 0; j < m; ++j) {
    const double e_lo = j > 0 ? edge[static_cast<std::size_t>(j - 1)] : 0.0;
    const double e_hi = j + 1 < m ? edge[static_cast<std::size_t>(j)] : 0.0;
    const double mj = d.node_mass[static_cast<std::size_t>(j)];
    if (j > 0)
      d.gen_sub[static_cast<std::size_t>(j)] =
          inv_h2 * e_lo / d.node_mass[static_cast<std::size_t>(j - 1)];
    if (j + 1 < m)
      d.gen_sup[static_cast<std::size_t>(j)] =
          inv_h2 * e_hi / d.node_mass[static_cast<std::size_t>(j + 1)];
    d.gen_diag[static_cast<std::size_t>(j)] = -inv_h2 * (e_lo + e_hi) / mj;
  }
  return d;
}

TridiagSolver build_lhs(const Discretization& d, double factor) {
  // (I - factor * M)
  TridiagSolver s;
  const std::size_t m = d.w.size();
  s.sub.resize(m);
  s.diag.resize(m);
  s.sup.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    s.sub[j] = -factor * d.gen_sub[j];
    s.diag[j] = 1.0 - factor * d.gen_diag[j];
    s.sup[j] = -factor * d.gen_sup[j];
  }
  s.factor();
  return s;
}

}  // namespace

int DensityGrid::index_of(double xq) const {
  const double wq = std::asinh(xq);
  const double pos = (wq + config.domain_a) / config.h;
  const int j = static_cast<int>(std::llround(pos));
  return std::clamp(j, 0, size() - 1);
}

double DensityGrid::interp(double xs, double xd) const {
  const double ws = std::asinh(xs), wd = std::asinh(xd);
  auto locate = [&](double wq, int& j, double& frac) {
    double pos = (wq + config.domain_a) / config.h;
    pos = std::clamp(pos, 0.0, static_cast<double>(size() - 1));
    j = std::min(static_cast<int>(pos), size() - 2);
    frac = pos - j;
  };
  int i0, j0;
  double fi, fj;
  locate(ws, i0, fi);
  locate(wd, j0, fj);
  const double v00 = values(i0, j0), v01 = values(i0, j0 + 1);
  const double v10 = values(i0 + 1, j0), v11 = values(i0 + 1, j0 + 1);
  return (1 - fi) * ((1 - fj) * v00 + fj * v01) + fi * ((1 - fj) * v10 + fj * v11);
}

void DensityGrid::build_cdf() {
  const int m = size();
  cdf_.resize(m, m);
  for (int i = 0; i < m; ++i) {
    double acc = 0.0;
    cdf_(i, 0) = 0.0;
    for (int j = 1; j < m; ++j) {
      // trapezoid of the w-space density values(i,.) * cosh(w)
      const double a = values(i, j - 1) * std::cosh(w[static_cast<std::size_t>(j - 1)]);
      const double b = values(i, j) * std::cosh(w[static_cast<std::size_t>(j)]);
      acc += 0.5 * (a + b) * config.h;
      cdf_(i, j) = acc;
    }
  }
}

void DensityGrid::write_csv(std::ostream& os) const {
  os << "x,y,value\n";
  const int m = size();
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      os << x[static_cast<std::size_t>(i)] << ',' << x[static_cast<std::size_t>(j)] << ','
         << values(i, j) << '\n';
}

DensityGrid solve_density(int level, const HPParams& p, bool dual, double t,
                          const GridConfig& cfg, int workers) {
  if (t <= 0.0) throw std::invalid_argument("solve_density: t must be positive");
  const Discretization d = build_discretization(level, p, dual, cfg);
  const int m = static_cast<int>(d.w.size());

  // Implicit-Euler startup (damps the delta), then Crank-Nicolson.
  const int startup_steps = 4;
  long long cn_steps = std::llround(std::ceil(t / cfg.dt)) - startup_steps / 2;
  if (cn_steps < 0) cn_steps = 0;
  const double startup_dt = (t - static_cast<double>(cn_steps) * cfg.dt) / startup_steps;
  if (startup_dt <= 0.0) throw std::invalid_argument("solve_density: t too small for dt");
  const TridiagSolver be = build_lhs(d, startup_dt);
  const TridiagSolver cn = build_lhs(d, 0.5 * cfg.dt);

  DensityGrid g;
  g.w = d.w;
  g.x = d.x;
  g.t = t;
  g.level = level;
  g.dual = dual;
  g.params = p;
  g.config = cfg;
  g.values.resize(m, m);

  // Truncation diagnostic: the zero-flux walls conserve mass exactly, so a
  // too-narrow domain shows up as mass piling into the outer cells instead of
  // as row-mass loss.  The defect combines both, gated on sources in the
  // central half of the domain (the region every downstream check uses).
  const int wall_cells = std::max(2, m / 100);
  std::vector<double> defects(static_cast<std::size_t>(m), 0.0);
  parallel_for(static_cast<std::size_t>(m), workers, [&](std::size_t src) {
    std::vector<double> u(static_cast<std::size_t>(m), 0.0);
    std::vector<double> rhs(static_cast<std::size_t>(m), 0.0);
    u[src] = 1.0 / cfg.h;
    for (int k = 0; k < startup_steps; ++k) {
      rhs = u;
      be.solve_in_place(rhs);
      u.swap(rhs);
    }
    for (long long k = 0; k < cn_steps; ++k) {
      d.apply(u, 0.5 * cfg.dt, rhs);
      cn.solve_in_place(rhs);
      u.swap(rhs);
    }
    double mass = 0.0, wall_mass = 0.0;
    for (int j = 0; j < m; ++j) mass += u[static_cast<std::size_t>(j)];
    for (int j = 0; j < wall_cells; ++j) {
      wall_mass += u[static_cast<std::size_t>(j)];
      wall_mass += u[static_cast<std::size_t>(m - 1 - j)];
    }
    const bool central = std::abs(d.w[src]) <= 0.5 * cfg.domain_a;
    defects[src] = std::abs(1.0 - mass * cfg.h) + (central ? wall_mass * cfg.h : 0.0);
    for (int j = 0; j < m; ++j) {
      const double v = u[static_cast<std::size_t>(j)] / std::cosh(d.w[static_cast<std::size_t>(j)]);
      g.values(static_cast<int>(src), j) = v < 0.0 ? 0.0 : v;
    }
  });
  g.mass_defect = *std::max_element(defects.begin(), defects.end());
  if (g.mass_defect > cfg.mass_defect_tol)
    throw NumericError("solve_density: mass defect " + std::to_string(g.mass_defect) +
                       " exceeds tolerance; widen the domain");
  g.build_cdf();
  return g;
}

namespace {
std::mutex cache_mutex;
std::map<std::tuple<int, bool, double, double, double, double, double, double>, DensityGrid>
    grid_cache;
}  // namespace

const DensityGrid& solve_density_cached(int level, const HPParams& p, bool dual, double t,
                                        const GridConfig& cfg, int workers) {
  const auto key = std::make_tuple(level, dual, p.s_re, p.s_im, t, cfg.h, cfg.domain_a, cfg.dt);
  {
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = grid_cache.find(key);
    if (it != grid_cache.end()) return it->second;
  }
  DensityGrid g = solve_density(level, p, dual, t, cfg, workers);
  std::lock_guard<std::mutex> lock(cache_mutex);
  return grid_cache.emplace(key, std::move(g)).first->second;
}

void clear_density_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex);
  grid_cache.clear();
}

double km_determinant(const DensityGrid& g, const WeylPoint& x, const WeylPoint& y,
                      bool h_transform_prefactor) {
  const int n = x.n();
  if (y.n() != n) throw std::invalid_argument("km_determinant: size mismatch");
  for (double v : x.values)
    if (std::abs(v) > std::sinh(g.config.domain_a))
      throw std::invalid_argument("km_determinant: point outside the grid");
  Eigen::MatrixXd mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      mat(i, j) = g.interp(x.values[static_cast<std::size_t>(i)],
                           y.values[static_cast<std::size_t>(j)]);
  double det = mat.determinant();
  if (h_transform_prefactor) {
    const double lam = km_eigenvalue(g.level, g.params.s_re);
    det *= std::exp(-lam * g.t) * vandermonde(y) / vandermonde(x);
  }
  return det;
}

double check_siegmund_pde(const DensityGrid& primal, const DensityGrid& dual_grid,
                          int n_lattice) {
  // q(x, y) = -d/dy CDF_p(y -> x), derivative across source rows, compared
  // with p_hat(x -> y) on a central lattice.
  const int m = primal.size();
  const double lo = -1.5, hi = 1.5;
  double max_gap = 0.0;
  for (int a = 0; a < n_lattice; ++a) {
    const double xq = lo + (hi - lo) * a / (n_lattice - 1);
    const int xi = primal.index_of(xq);
    for (int b = 0; b < n_lattice; ++b) {
      const double yq = lo + (hi - lo) * b / (n_lattice - 1);
      const int yj = primal.index_of(yq);
      if (yj < 1 || yj > m - 2) continue;
      const double cdf_plus = primal.cdf_at_node(yj + 1, xi);
      const double cdf_minus = primal.cdf_at_node(yj - 1, xi);
      const double dy = 2.0 * primal.config.h * std::cosh(primal.w[static_cast<std::size_t>(yj)]);
      const double q = -(cdf_plus - cdf_minus) / dy;
      const double gap = std::abs(q - dual_grid.values(xi, yj));
      max_gap = std::max(max_gap, gap);
    }
  }
  return max_gap;
}

double check_intermediate_intertwining(const DensityGrid& primal2,
                                       const DensityGrid& dual2,
                                       const std::vector<std::pair<double, double>>& x_pairs) {
  const int m = primal2.size();
  const int level = primal2.level;
  const HPParams& p = primal2.params;
  const double window = 2.0;
  double max_gap = 0.0;
  for (const auto& [x1q, x2q] : x_pairs) {
    const int i1 = primal2.index_of(x1q), i2 = primal2.index_of(x2q);
    // RHS integrand rows: dual densities from sources y in [x1, x2]
    for (int j = 0; j < m; ++j) {
      if (std::abs(primal2.x[static_cast<std::size_t>(j)]) > window) continue;
      const double yp = primal2.x[static_cast<std::size_t>(j)];
      const double p1 = primal2.cdf_at_node(i1, j);
      const double p2 = primal2.cdf_at_node(i2, j);
      const double q1 = primal2.row_mass(i1) - p1;
      const double q2 = primal2.row_mass(i2) - p2;
      const double lhs = speed_density(yp, level, p, /*dual=*/true) * (p1 * q2 - p2 * q1);
      double rhs = 0.0;
      for (int k = i1; k <= i2; ++k) {
        const double y = dual2.x[static_cast<std::size_t>(k)];
        const double wgt = (k == i1 || k == i2) ? 0.5 : 1.0;
        rhs += wgt * speed_density(y, level, p, /*dual=*/true) * dual2.values(k, j) *
               std::cosh(dual2.w[static_cast<std::size_t>(k)]) * dual2.config.h;
      }
      max_gap = std::max(max_gap, std::abs(lhs - rhs));
    }
  }
  return max_gap;
}

BlockKernelGaps check_block_kernel(const DensityGrid& primal2, const DensityGrid& dual2,
                                   double x1, double x2, double y,
                                   double x1_prime, double x2_prime, double y_prime) {
  const int i1 = primal2.index_of(x1), i2 = primal2.index_of(x2);
  const int j1 = primal2.index_of(x1_prime), j2 = primal2.index_of(x2_prime);
  const int iy = primal2.index_of(y), iyp = primal2.index_of(y_prime);
  const int level = primal2.level;
  const HPParams& p = primal2.params;
  const double h = primal2.config.h;
  const double mh_yp = speed_density(primal2.x[static_cast<std::size_t>(iyp)], level, p, true);
  const int m = primal2.size();

  // Entry builders; src and j are source/destination node indices.
  auto entry_a = [&](int src, int j) { return primal2.values(src, j); };
  auto entry_c = [&](int src_y, int j) {
    const double dy = 2.0 * h * std::cosh(primal2.w[static_cast<std::size_t>(src_y)]);
    const double mh = speed_density(primal2.x[static_cast<std::size_t>(src_y)], level, p, true);
    return -(primal2.values(src_y + 1, j) - primal2.values(src_y - 1, j)) / (dy * mh);
  };
  auto entry_b = [&](int src) {
    // the indicator column 1(j >= i) contributes only to the first source row
    return mh_yp * (primal2.cdf_at_node(src, iyp) - (src == i1 ? 1.0 : 0.0));
  };
  const double b1 = entry_b(i1);
  const double b2 = entry_b(i2);
  const double dval = dual2.values(iy, iyp);

  BlockKernelGaps gaps;

  // Identity 1: integrate the destination pair over x1' <= y' <= x2'.  The
  // determinant is linear in each destination column, so the double integral
  // collapses to integrated columns.
  auto integrate_col = [&](const std::function<double(int)>& f, int j_lo, int j_hi) {
    double acc = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double wgt = (j == j_lo || j == j_hi) ? 0.5 : 1.0;
      acc += wgt * f(j) * std::cosh(primal2.w[static_cast<std::size_t>(j)]) * h;
    }
    return acc;
  };
  Eigen::Matrix3d m1;
  m1 << integrate_col([&](int j) { return entry_a(i1, j); }, 0, iyp),
      integrate_col([&](int j) { return entry_a(i1, j); }, iyp, m - 1), b1,
      integrate_col([&](int j) { return entry_a(i2, j); }, 0, iyp),
      integrate_col([&](int j) { return entry_a(i2, j); }, iyp, m - 1), b2,
      integrate_col([&](int j) { return entry_c(iy, j); }, 0, iyp),
      integrate_col([&](int j) { return entry_c(iy, j); }, iyp, m - 1), dval;
  gaps.integrate_destinations = std::abs(m1.determinant() - dval);

  // Identity 2: integrate the source row y over [x1, x2] against m_hat(y);
  // the m_hat weight cancels against the normalization of the C entries.
  double row_c1 = 0.0, row_c2 = 0.0, row_d = 0.0;
  for (int k = i1; k <= i2; ++k) {
    if (k < 1 || k > m - 2) continue;
    const double wgt = (k == i1 || k == i2) ? 0.5 : 1.0;
    const double mh_k = speed_density(primal2.x[static_cast<std::size_t>(k)], level, p, true);
    const double jac = std::cosh(primal2.w[static_cast<std::size_t>(k)]) * h;
    row_c1 += wgt * mh_k * entry_c(k, j1) * jac;
    row_c2 += wgt * mh_k * entry_c(k, j2) * jac;
    row_d += wgt * mh_k * dual2.values(k, iyp) * jac;
  }
  Eigen::Matrix3d m2;
  m2 << entry_a(i1, j1), entry_a(i1, j2), b1,
        entry_a(i2, j1), entry_a(i2, j2), b2,
        row_c1, row_c2, row_d;
  Eigen::Matrix2d a2;
  a2 << entry_a(i1, j1), entry_a(i1, j2), entry_a(i2, j1), entry_a(i2, j2);
  gaps.integrate_sources = std::abs(m2.determinant() - a2.determinant() * mh_yp);
  return gaps;
}

double check_h_transform(const DensityGrid& primal_n, const DensityGrid& dual_np1,
                         double window) {
  if (dual_np1.level != primal_n.level + 1)
    throw std::invalid_argument("check_h_transform: dual grid must be one level up");
  const double c = dual_constant(primal_n.level, primal_n.params.s_re);
  const double pref = std::exp(-c * primal_n.t);
  const int m = primal_n.size();
  double max_rel = 0.0;
  for (int i = 0; i < m; ++i) {
    const double xi = primal_n.x[static_cast<std::size_t>(i)];
    if (std::abs(xi) > window) continue;
    const double mh_x = speed_density(xi, dual_np1.level, dual_np1.params, true);
    for (int j = 0; j < m; ++j) {
      const double yj = primal_n.x[static_cast<std::size_t>(j)];
      if (std::abs(yj) > window) continue;
      const double mh_y = speed_density(yj, dual_np1.level, dual_np1.params, true);
      const double lhs = pref * dual_np1.values(i, j) * mh_x / mh_y;
      const double rhs = primal_n.values(i, j);
      max_rel = std::max(max_rel, std::abs(lhs - rhs) / rhs);
    }
  }
  return max_rel;
}

}  // namespace ilab::pde
