#include <doctest.h>

#include <cmath>

#include "ilab/core.hpp"
#include "ilab/pde.hpp"
#include "ilab/sde.hpp"

using namespace ilab;

namespace {
pde::GridConfig small_grid() {
  pde::GridConfig g;
  g.h = 0.02;
  g.domain_a = 7.0;
  g.dt = 1e-4;
  return g;
}
}  // namespace

TEST_CASE("density grid basics: positivity, mass, symmetry, reversibility") {
  const HPParams p{0.0, 0.0, 2};
  const auto g = pde::solve_density(2, p, false, 0.1, small_grid());
  CHECK(g.mass_defect < 1e-6);
  const int m = g.size();
  double minv = 1e300;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) minv = std::min(minv, g.values(i, j));
  CHECK(minv >= 0.0);
  // s_im = 0 makes the kernel symmetric under joint sign flip
  for (int i = 0; i < m; i += 37)
    for (int j = 0; j < m; j += 41)
      CHECK(g.values(i, j) ==
            doctest::Approx(g.values(m - 1 - i, m - 1 - j)).epsilon(1e-8));
  // detailed balance against the exact speed density
  for (int i = m / 4; i < 3 * m / 4; i += 13) {
    for (int j = m / 4; j < 3 * m / 4; j += 17) {
      const double lhs = speed_density(g.x[i], 2, p, false) * g.values(i, j);
      const double rhs = speed_density(g.x[j], 2, p, false) * g.values(j, i);
      if (rhs > 1e-12) CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
    }
  }
}

TEST_CASE("short-time consistency against the generator") {
  const HPParams p{0.0, 0.0, 1};
  pde::GridConfig cfg = small_grid();
  cfg.dt = 2.5e-5;
  auto f = [](double y) { return std::exp(-y * y); };
  auto fp = [](double y) { return -2.0 * y * std::exp(-y * y); };
  auto fpp = [](double y) { return (4.0 * y * y - 2.0) * std::exp(-y * y); };
  const double x0 = 0.4;
  const double lf = sde::generator_apply_1d(1, p, false, f, fp, fpp, x0);
  double prev_err = 0.0;
  for (double t : {1e-3, 5e-4}) {
    const auto g = pde::solve_density(1, p, false, t, cfg);
    const int i = g.index_of(x0);
    double integral = 0.0;
    for (int j = 0; j < g.size(); ++j)
      integral += g.values(i, j) * f(g.x[j]) * std::cosh(g.w[j]) * cfg.h *
                  ((j == 0 || j == g.size() - 1) ? 0.5 : 1.0);
    const double rate = (integral - f(g.x[i])) / t;
    CHECK(rate == doctest::Approx(lf).epsilon(0.05));
    const double err = std::abs(integral - f(g.x[i]));
    if (prev_err > 0.0) CHECK(prev_err > err);  // error shrinks with t
    prev_err = err;
  }
}

TEST_CASE("determinant kernel") {
  const HPParams p{0.0, 0.0, 2};
  const auto g = pde::solve_density(2, p, false, 0.05, small_grid());
  // one-dimensional case reduces to the density itself
  CHECK(pde::km_determinant(g, WeylPoint{{0.2}}, WeylPoint{{0.5}}) ==
        doctest::Approx(g.interp(0.2, 0.5)).epsilon(1e-12));
  CHECK(pde::km_determinant(g, WeylPoint{{-1.0, 1.0}}, WeylPoint{{-0.9, 1.1}}) > 0.0);
  CHECK_THROWS(pde::km_determinant(g, WeylPoint{{1e9}}, WeylPoint{{0.0}}));
  // near-diagonal dominance at short time
  pde::GridConfig cfg = small_grid();
  cfg.dt = 2.5e-5;
  const auto gs = pde::solve_density(2, p, false, 1e-3, cfg);
  const WeylPoint xy{{-1.0, 1.0}};
  const double det = pde::km_determinant(gs, xy, xy);
  const double prod = gs.interp(-1.0, -1.0) * gs.interp(1.0, 1.0);
  CHECK(det == doctest::Approx(prod).epsilon(1e-3));
}

TEST_CASE("kernel duality relation on the grid") {
  const HPParams p{0.0, 0.0, 2};
  const auto cfg = small_grid();
  const auto gp = pde::solve_density(2, p, false, 0.2, cfg);
  const auto gd = pde::solve_density(2, p, true, 0.2, cfg);
  CHECK(pde::check_siegmund_pde(gp, gd, 10) < 4e-3);
}

TEST_CASE("transformed dual density matches the lower level") {
  const HPParams p{0.0, 0.0, 1};
  const auto cfg = small_grid();
  const auto gp = pde::solve_density(1, p, false, 0.2, cfg);
  const auto gd = pde::solve_density(2, p, true, 0.2, cfg);
  CHECK(pde::check_h_transform(gp, gd, 2.0) < 4e-3);
}

TEST_CASE("two-to-one intertwining and block identities at reduced resolution") {
  const HPParams p{0.0, 0.0, 2};
  const auto cfg = small_grid();
  const auto gp = pde::solve_density(2, p, false, 0.2, cfg);
  const auto gd = pde::solve_density(2, p, true, 0.2, cfg);
  const double gap = pde::check_intermediate_intertwining(gp, gd, {{-1.0, 1.0}});
  CHECK(gap < 2e-2);
  const auto gaps = pde::check_block_kernel(gp, gd, -1.0, 0.8, -0.2, -1.2, 1.1, 0.3);
  CHECK(gaps.integrate_destinations < 4e-2);
  CHECK(gaps.integrate_sources < 4e-2);

  // refinement improves both families of checks
  pde::GridConfig fine = cfg;
  fine.h = cfg.h / 2.0;
  const auto gpf = pde::solve_density(2, p, false, 0.2, fine);
  const auto gdf = pde::solve_density(2, p, true, 0.2, fine);
  CHECK(pde::check_intermediate_intertwining(gpf, gdf, {{-1.0, 1.0}}) < gap);
  const auto gaps_f = pde::check_block_kernel(gpf, gdf, -1.0, 0.8, -0.2, -1.2, 1.1, 0.3);
  CHECK(gaps_f.integrate_destinations + gaps_f.integrate_sources <
        gaps.integrate_destinations + gaps.integrate_sources);
}

TEST_CASE("narrow domain is rejected through the truncation diagnostic") {
  const HPParams p{0.0, 0.0, 1};
  pde::GridConfig cfg;
  cfg.h = 0.02;
  cfg.domain_a = 1.2;
  cfg.dt = 1e-4;
  CHECK_THROWS_AS(pde::solve_density(1, p, false, 0.5, cfg), NumericError);
}
