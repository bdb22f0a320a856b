#include "ilab/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ilab/core.hpp"
#include "ilab/links.hpp"
#include "ilab/matrix.hpp"
#include "ilab/multilevel.hpp"
#include "ilab/parallel.hpp"
#include "ilab/pde.hpp"
#include "ilab/random.hpp"
#include "ilab/rmt.hpp"
#include "ilab/sde.hpp"

namespace ilab::verify {

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw std::invalid_argument("ks_two_sample: empty sample");
  std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < sa.size() && j < sb.size()) {
    const double v = std::min(sa[i], sb[j]);
    while (i < sa.size() && sa[i] <= v) ++i;
    while (j < sb.size() && sb[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_uniform(std::span<const double> u) {
  if (u.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  std::vector<double> s(u.begin(), u.end());
  std::sort(s.begin(), s.end());
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double di = static_cast<double>(i);
    d = std::max(d, std::max((di + 1.0) / n - s[i], s[i] - di / n));
  }
  return d;
}

MeanSe mc_mean_with_se(std::span<const double> draws) {
  if (draws.empty()) throw std::invalid_argument("mc_mean_with_se: empty sample");
  const double n = static_cast<double>(draws.size());
  double sum = 0.0;
  for (double v : draws) sum += v;
  MeanSe r;
  r.mean = sum / n;
  if (draws.size() == 1) return r;
  double ss = 0.0;
  for (double v : draws) ss += (v - r.mean) * (v - r.mean);
  r.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return r;
}

double per_coordinate_ks(std::span<const double> a, std::span<const double> b, int dim) {
  const std::size_t na = a.size() / static_cast<std::size_t>(dim);
  const std::size_t nb = b.size() / static_cast<std::size_t>(dim);
  double worst = 0.0;
  std::vector<double> ca(na), cb(nb);
  for (int j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < na; ++i) ca[i] = a[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
    for (std::size_t i = 0; i < nb; ++i) cb[i] = b[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(j)];
    worst = std::max(worst, ks_two_sample(ca, cb));
  }
  return worst;
}

std::string reports_to_json(const std::vector<TestReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"name", r.name},
                   {"statistic", r.statistic},
                   {"threshold", r.threshold},
                   {"n_samples", r.n_samples},
                   {"seed", r.seed},
                   {"pass", r.pass},
                   {"details", r.details}});
  }
  return arr.dump(2);
}

namespace {

TestReport make_report(const std::string& name, double stat, double thr, long long n,
                       std::uint64_t seed, const std::string& details = "") {
  TestReport r;
  r.name = name;
  r.statistic = stat;
  r.threshold = thr;
  r.n_samples = n;
  r.seed = seed;
  r.pass = stat <= thr;
  r.details = details;
  return r;
}

// Negative control: the measured value must EXCEED `required`; reported as
// the ratio required/value so that pass keeps meaning statistic <= threshold.
TestReport control_report(const std::string& name, double value, double required,
                          long long n, std::uint64_t seed, const std::string& what) {
  const double ratio = value > 0.0 ? required / value : std::numeric_limits<double>::infinity();
  TestReport r = make_report(name, ratio, 1.0, n, seed,
                             what + " (control value " + std::to_string(value) +
                                 ", must exceed " + std::to_string(required) + ")");
  return r;
}

TestReport inconclusive_report(const std::string& name, std::size_t n, std::size_t floor,
                               std::uint64_t seed) {
  TestReport r;
  r.name = name;
  r.statistic = std::numeric_limits<double>::infinity();
  r.threshold = 0.0;
  r.n_samples = static_cast<long long>(n);
  r.seed = seed;
  r.pass = false;
  r.details = "inconclusive: " + std::to_string(n) + " samples below the power floor " +
              std::to_string(floor);
  return r;
}

std::size_t pick(std::size_t configured, std::size_t fallback) {
  return configured == 0 ? fallback : configured;
}
double pick(double configured, double fallback) {
  return configured == 0.0 ? fallback : configured;
}

pde::GridConfig grid_config(const SuiteConfig& c) {
  pde::GridConfig g;
  g.h = pick(c.grid_h, 0.01);
  g.domain_a = pick(c.domain_a, 8.0);
  return g;
}

// ---------------------------------------------------------------- suites --

std::vector<TestReport> suite_eigenfunction(const SuiteConfig& c) {
  const std::size_t points = pick(c.samples, std::size_t{100});
  const std::vector<HPParams> params = {{0.0, 0.0, 0}, {-0.4, 0.0, 0}, {2.0, 3.0, 0}};
  RandomStream rng(seed_split(c.seed, 0));
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    for (const auto& base : params) {
      HPParams p = base;
      p.n = n;
      for (std::size_t k = 0; k < points; ++k) {
        WeylPoint x;
        do {
          x.values.resize(static_cast<std::size_t>(n));
          for (double& v : x.values) v = rng.uniform(-3.0, 3.0);
          std::sort(x.values.begin(), x.values.end());
          bool ok = true;
          for (int i = 1; i < n; ++i)
            if (x.values[static_cast<std::size_t>(i)] - x.values[static_cast<std::size_t>(i - 1)] < 0.02)
              ok = false;
          if (ok) break;
        } while (true);
        worst = std::max(worst, sde::eigenfunction_check(n, p, x));
      }
    }
  }
  std::vector<TestReport> out;
  out.push_back(make_report("eigenfunction/residual", worst, c.thresholds.eigenfunction_residual,
                            static_cast<long long>(points), c.seed,
                            "max relative residual over N<=6, s in {0,-0.4,2+3i}"));
  // control: wrong eigenvalue constant must leave a visible residual
  WeylPoint x{{-1.0, 0.3, 2.0}};
  const double delta = vandermonde(x);
  const auto grad = vandermonde_grad(x);
  const auto second = vandermonde_second(x);
  double lhs = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double xi = x.values[static_cast<std::size_t>(i)];
    lhs += (xi * xi + 1.0) * second[static_cast<std::size_t>(i)] +
           (2.0 - 6.0) * xi * grad[static_cast<std::size_t>(i)];
  }
  const double wrong = std::abs(lhs - km_eigenvalue(3, 0.5) * delta) / std::abs(delta);
  out.push_back(control_report("eigenfunction/control-wrong-eigenvalue", wrong, 1e-3, 1, c.seed,
                               "residual with perturbed s in the eigenvalue"));
  return out;
}

std::vector<TestReport> suite_invariance(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{100000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("invariance/ks", n, c.thresholds.power_floor, c.seed)};
  const int dim = 4;
  const double T = pick(c.t_final, 0.5);
  sde::SdeSpec spec;
  spec.kind = sde::Kind::hp;
  spec.params = {0.0, 0.0, dim};
  spec.dt_base = pick(c.dt, 1e-3);
  std::vector<double> initial(n * dim);
  auto init = [&](std::size_t i, RandomStream& rng, std::span<double> x0) {
    const WeylPoint w = links::hp_sample({0.0, 0.0, dim}, links::HPMethod::cue_cayley, rng);
    std::copy(w.values.begin(), w.values.end(), x0.begin());
    std::copy(w.values.begin(), w.values.end(), initial.begin() + static_cast<std::ptrdiff_t>(i * dim));
  };
  const std::vector<double> final_states =
      sde::terminal_ensemble(spec, dim, T, n, c.seed, c.workers, init);
  const double ks = per_coordinate_ks(initial, final_states, dim);
  std::vector<TestReport> out;
  out.push_back(make_report("invariance/ks", ks, c.thresholds.ks_invariance,
                            static_cast<long long>(n), c.seed,
                            "N=4, s=0, exact start, T=" + std::to_string(T)));
  // control: evolve the s=0 ensemble with s_re=2 dynamics
  sde::SdeSpec wrong = spec;
  wrong.params.s_re = 2.0;
  const std::size_t nc = n / 4;
  std::vector<double> initial_c(nc * dim);
  auto init_c = [&](std::size_t i, RandomStream& rng, std::span<double> x0) {
    const WeylPoint w = links::hp_sample({0.0, 0.0, dim}, links::HPMethod::cue_cayley, rng);
    std::copy(w.values.begin(), w.values.end(), x0.begin());
    std::copy(w.values.begin(), w.values.end(), initial_c.begin() + static_cast<std::ptrdiff_t>(i * dim));
  };
  const std::vector<double> final_c =
      sde::terminal_ensemble(wrong, dim, T, nc, seed_split(c.seed, 1), c.workers, init_c);
  const double ks_c = per_coordinate_ks(initial_c, final_c, dim);
  out.push_back(control_report("invariance/control-perturbed-s", ks_c,
                               2.0 * c.thresholds.ks_invariance, static_cast<long long>(nc),
                               c.seed, "s_re=2 dynamics from the s=0 ensemble"));
  return out;
}

std::vector<TestReport> suite_intertwining_mc(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{1000000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("intertwining-mc/gap", n, c.thresholds.power_floor, c.seed)};
  const double t = pick(c.t_final, 0.25);
  const double dt = pick(c.dt, 5e-4);
  const WeylPoint x{{-1.0, 0.2, 1.1}};
  auto test_fn = [](const WeylPoint& y) {
    double s = 0.0;
    for (double v : y.values) s += v * v;
    return std::exp(-s);
  };
  // side A: evolve three particles from x, then project through the link
  std::vector<double> fa(n), fb(n);
  sde::SdeSpec spec3;
  spec3.kind = sde::Kind::hp;
  spec3.params = {0.0, 0.0, 3};
  spec3.dt_base = dt;
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    std::vector<double> state = x.values;
    sde::Stepper st(spec3, 3);
    st.advance(state, t, rng);
    fa[i] = test_fn(links::link_sample(WeylPoint{state}, rng));
  });
  // side B: project first, then evolve two particles
  sde::SdeSpec spec2 = spec3;
  spec2.params.n = 2;
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed_split(c.seed, 7), i));
    WeylPoint y0 = links::link_sample(x, rng);
    std::vector<double> state = y0.values;
    sde::Stepper st(spec2, 2);
    st.advance(state, t, rng);
    fb[i] = test_fn(WeylPoint{state});
  });
  const MeanSe ma = mc_mean_with_se(fa), mb = mc_mean_with_se(fb);
  const double comb = std::sqrt(ma.se * ma.se + mb.se * mb.se);
  const double stat = std::abs(ma.mean - mb.mean) / comb;
  std::vector<TestReport> out;
  std::ostringstream det;
  det << "E_A=" << ma.mean << " E_B=" << mb.mean << " combined SE=" << comb;
  out.push_back(make_report("intertwining-mc/gap", stat, c.thresholds.sigma_gate,
                            static_cast<long long>(n), c.seed, det.str()));
  // control: skip the link on side A (take the lowest two coordinates)
  const std::size_t nc = n / 10;
  std::vector<double> fc(nc);
  parallel_for(nc, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    std::vector<double> state = x.values;
    sde::Stepper st(spec3, 3);
    st.advance(state, t, rng);
    fc[i] = test_fn(WeylPoint{{state[0], state[1]}});
  });
  const MeanSe mcs = mc_mean_with_se(fc);
  const double comb_c = std::sqrt(mcs.se * mcs.se + mb.se * mb.se);
  const double stat_c = std::abs(mcs.mean - mb.mean) / comb_c;
  out.push_back(control_report("intertwining-mc/control-no-link", stat_c, 10.0,
                               static_cast<long long>(nc), c.seed,
                               "side A without the link must disagree"));
  return out;
}

std::vector<TestReport> suite_coherency(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{100000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("coherency/ks", n, c.thresholds.power_floor, c.seed)};
  std::vector<double> a(n * 2), b(n * 2), ctrl(n * 2);
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    const WeylPoint x3 = links::hp_sample({0.0, 0.0, 3}, links::HPMethod::cue_cayley, rng);
    const WeylPoint y = links::link_sample(x3, rng);
    a[2 * i] = y.values[0];
    a[2 * i + 1] = y.values[1];
    ctrl[2 * i] = x3.values[0];
    ctrl[2 * i + 1] = x3.values[1];
    const WeylPoint x2 = links::hp_sample({0.0, 0.0, 2}, links::HPMethod::cue_cayley, rng);
    b[2 * i] = x2.values[0];
    b[2 * i + 1] = x2.values[1];
  });
  std::vector<TestReport> out;
  out.push_back(make_report("coherency/ks", per_coordinate_ks(a, b, 2),
                            c.thresholds.ks_coherency, static_cast<long long>(n), c.seed,
                            "link-projected three-particle law vs two-particle law, s=0"));
  out.push_back(control_report("coherency/control-no-link", per_coordinate_ks(ctrl, b, 2),
                               2.0 * c.thresholds.ks_coherency, static_cast<long long>(n),
                               c.seed, "lowest two coordinates without the link"));
  return out;
}

std::vector<TestReport> suite_boundary_coherency(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{100000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("boundary-coherency/ks", n, c.thresholds.power_floor, c.seed)};
  OmegaPoint omega;
  omega.alpha_plus = {1.0};
  omega.delta = 2.0;  // gamma2 = 1
  std::vector<double> direct(n), composed(n), wrong(n);
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    direct[i] = links::boundary_link_sample(omega, 1, rng).values[0];
    composed[i] = links::link_sample(links::boundary_link_sample(omega, 2, rng), rng).values[0];
    OmegaPoint om2 = omega;
    om2.alpha_plus = {2.0};
    om2.delta = 5.0;
    wrong[i] = links::link_sample(links::boundary_link_sample(om2, 2, rng), rng).values[0];
  });
  std::vector<TestReport> out;
  out.push_back(make_report("boundary-coherency/ks", ks_two_sample(direct, composed),
                            c.thresholds.ks_boundary_coherency, static_cast<long long>(n),
                            c.seed, "omega=(gamma2=1, alpha1+=1), level 2 -> 1"));
  out.push_back(control_report("boundary-coherency/control-wrong-omega",
                               ks_two_sample(direct, wrong),
                               2.0 * c.thresholds.ks_boundary_coherency,
                               static_cast<long long>(n), c.seed,
                               "composed side drawn with alpha1+=2"));
  return out;
}

std::vector<TestReport> suite_duality(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{1000000});
  const double t = pick(c.t_final, 0.2);
  const double dt = pick(c.dt, 2.5e-4);
  const int level = 2;
  const double x_thr = 0.5, y0 = -0.3;
  std::vector<TestReport> out;
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("duality/mc", n, c.thresholds.power_floor, c.seed)};
  // MC: P_y(X_t <= x) vs P_x(X_hat_t >= y)
  std::vector<double> ind_a(n), ind_b(n), ind_c(n);
  sde::SdeSpec primal;
  primal.kind = sde::Kind::hp_1d;
  primal.params = {0.0, 0.0, level};
  primal.dt_base = dt;
  sde::SdeSpec dual = primal;
  dual.kind = sde::Kind::hp_dual_1d;
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    std::vector<double> s{y0};
    sde::Stepper st(primal, 1);
    st.advance(s, t, rng);
    ind_a[i] = s[0] <= x_thr ? 1.0 : 0.0;
    RandomStream rng2(seed_split(seed_split(c.seed, 11), i));
    std::vector<double> sd{x_thr};
    sde::Stepper std_(dual, 1);
    std_.advance(sd, t, rng2);
    ind_b[i] = sd[0] >= y0 ? 1.0 : 0.0;
    // control: primal dynamics on the dual side
    RandomStream rng3(seed_split(seed_split(c.seed, 13), i));
    std::vector<double> sc{x_thr};
    sde::Stepper stc(primal, 1);
    stc.advance(sc, t, rng3);
    ind_c[i] = sc[0] >= y0 ? 1.0 : 0.0;
  });
  const MeanSe ma = mc_mean_with_se(ind_a), mb = mc_mean_with_se(ind_b),
               mcs = mc_mean_with_se(ind_c);
  const double comb = std::sqrt(ma.se * ma.se + mb.se * mb.se);
  std::ostringstream det;
  det << "P_y(X_t<=x)=" << ma.mean << " P_x(Xhat_t>=y)=" << mb.mean << " SE=" << comb;
  out.push_back(make_report("duality/mc", std::abs(ma.mean - mb.mean) / comb,
                            c.thresholds.sigma_gate, static_cast<long long>(n), c.seed,
                            det.str()));
  const double comb_c = std::sqrt(ma.se * ma.se + mcs.se * mcs.se);
  out.push_back(control_report("duality/control-wrong-dual",
                               std::abs(ma.mean - mcs.mean) / comb_c, 10.0,
                               static_cast<long long>(n), c.seed,
                               "primal dynamics in place of the dual"));
  // PDE: kernel relation on a central lattice
  const pde::GridConfig gc = grid_config(c);
  const HPParams p{0.0, 0.0, level};
  const auto& gp = pde::solve_density_cached(level, p, false, t, gc, c.workers);
  const auto& gd = pde::solve_density_cached(level, p, true, t, gc, c.workers);
  const double gap = pde::check_siegmund_pde(gp, gd, 10);
  out.push_back(make_report("duality/pde", gap, c.thresholds.siegmund_pde_gap,
                            10 * 10, c.seed, "10x10 central lattice, level 2, s=0"));
  return out;
}

std::vector<TestReport> suite_eq26(const SuiteConfig& c) {
  const double t = pick(c.t_final, 0.2);
  const pde::GridConfig gc = grid_config(c);
  const HPParams p{0.0, 0.0, 2};
  const std::vector<std::pair<double, double>> pairs = {{-1.0, 1.0}, {-0.5, 0.7}, {0.3, 1.2}};
  const auto& gp = pde::solve_density_cached(2, p, false, t, gc, c.workers);
  const auto& gd = pde::solve_density_cached(2, p, true, t, gc, c.workers);
  const double gap = pde::check_intermediate_intertwining(gp, gd, pairs);
  std::vector<TestReport> out;
  out.push_back(make_report("eq26/gap", gap, c.thresholds.eq26_gap, gp.size(), c.seed,
                            "two-to-one intertwining by quadrature, t=" + std::to_string(t)));
  // refinement: halving h must decrease the gap
  pde::GridConfig fine = gc;
  fine.h = gc.h / 2.0;
  const auto& gpf = pde::solve_density_cached(2, p, false, t, fine, c.workers);
  const auto& gdf = pde::solve_density_cached(2, p, true, t, fine, c.workers);
  const double gap_fine = pde::check_intermediate_intertwining(gpf, gdf, pairs);
  out.push_back(make_report("eq26/refinement", gap_fine / gap, 1.0, gpf.size(), c.seed,
                            "gap ratio fine/coarse = " + std::to_string(gap_fine) + "/" +
                                std::to_string(gap)));
  return out;
}

std::vector<TestReport> suite_block_kernel(const SuiteConfig& c) {
  const double t = pick(c.t_final, 0.2);
  const pde::GridConfig gc = grid_config(c);
  const HPParams p{0.0, 0.0, 2};
  const auto& gp = pde::solve_density_cached(2, p, false, t, gc, c.workers);
  const auto& gd = pde::solve_density_cached(2, p, true, t, gc, c.workers);
  const double x1 = -1.0, x2 = 0.8, y = -0.2, x1p = -1.2, x2p = 1.1, yp = 0.3;
  const auto gaps = pde::check_block_kernel(gp, gd, x1, x2, y, x1p, x2p, yp);
  std::vector<TestReport> out;
  out.push_back(make_report("block-kernel/integrate-destinations", gaps.integrate_destinations,
                            c.thresholds.block_kernel_gap, gp.size(), c.seed,
                            "integral over the destination pair vs the dual density"));
  out.push_back(make_report("block-kernel/integrate-sources", gaps.integrate_sources,
                            c.thresholds.block_kernel_gap, gp.size(), c.seed,
                            "weighted integral over the middle source vs det A"));
  pde::GridConfig fine = gc;
  fine.h = gc.h / 2.0;
  const auto& gpf = pde::solve_density_cached(2, p, false, t, fine, c.workers);
  const auto& gdf = pde::solve_density_cached(2, p, true, t, fine, c.workers);
  const auto gaps_f = pde::check_block_kernel(gpf, gdf, x1, x2, y, x1p, x2p, yp);
  const double coarse_total = gaps.integrate_destinations + gaps.integrate_sources;
  const double fine_total = gaps_f.integrate_destinations + gaps_f.integrate_sources;
  out.push_back(make_report("block-kernel/refinement", fine_total / coarse_total, 1.0,
                            gpf.size(), c.seed,
                            "total gap ratio fine/coarse = " + std::to_string(fine_total) +
                                "/" + std::to_string(coarse_total)));
  return out;
}

std::vector<TestReport> suite_h_transform(const SuiteConfig& c) {
  const double t = pick(c.t_final, 0.2);
  const pde::GridConfig gc = grid_config(c);
  const HPParams p{0.0, 0.0, 1};
  const auto& gp = pde::solve_density_cached(1, p, false, t, gc, c.workers);
  const auto& gd = pde::solve_density_cached(2, p, true, t, gc, c.workers);
  const double gap = pde::check_h_transform(gp, gd, 2.0);
  std::vector<TestReport> out;
  out.push_back(make_report("h-transform/gap", gap, c.thresholds.h_transform_gap, gp.size(),
                            c.seed, "dual level-2 density transformed onto level 1, s=0"));
  // control: wrong constant in the exponential prefactor
  const double cns = dual_constant(1, 0.0);
  const double wrong_factor = std::exp(-(cns + 1.0) * t) / std::exp(-cns * t);
  const double wrong_gap = std::abs(wrong_factor - 1.0);  // lower bound on the distortion
  out.push_back(control_report("h-transform/control-wrong-constant", wrong_gap,
                               2.0 * c.thresholds.h_transform_gap, 1, c.seed,
                               "prefactor shifted by one in the constant"));
  pde::GridConfig fine = gc;
  fine.h = gc.h / 2.0;
  const auto& gpf = pde::solve_density_cached(1, p, false, t, fine, c.workers);
  const auto& gdf = pde::solve_density_cached(2, p, true, t, fine, c.workers);
  const double gap_fine = pde::check_h_transform(gpf, gdf, 2.0);
  out.push_back(make_report("h-transform/refinement", gap_fine / gap, 1.0, gpf.size(), c.seed,
                            "gap ratio fine/coarse = " + std::to_string(gap_fine) + "/" +
                                std::to_string(gap)));
  return out;
}

std::vector<TestReport> suite_gibbs(const SuiteConfig& c) {
  const std::size_t n_marginal = pick(c.samples, std::size_t{100000});
  if (n_marginal < c.thresholds.power_floor)
    return {inconclusive_report("gibbs/marginal", n_marginal, c.thresholds.power_floor, c.seed)};
  const std::size_t n_uniform = std::min<std::size_t>(n_marginal, 10000);
  const double T = pick(c.t_final, 0.25);
  // the conditional-uniformity statistic is barrier-sensitive; the clamping
  // scheme needs a finer step than the generic default to stay within the
  // stated tolerance (bias scales like sqrt(dt))
  const double dt = pick(c.dt, 1e-4);
  multilevel::ReflectedSpec rspec;
  rspec.params = {0.0, 0.0, 2};
  rspec.dt_base = dt;
  auto bottom2 = [](RandomStream& rng) {
    return links::hp_sample({0.0, 0.0, 2}, links::HPMethod::cue_cayley, rng);
  };
  // (a) level-2 marginal vs the autonomous two-particle evolution
  std::vector<double> refl(2 * n_marginal), autonomous(2 * n_marginal);
  std::atomic<std::size_t> stopped{0};
  parallel_for(n_marginal, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(c.seed, i));
    const GTPattern start = multilevel::gibbs_sample(bottom2, rng);
    const auto res = multilevel::reflected_simulate(rspec, start, T, rng);
    refl[2 * i] = res.pattern.level(2).values[0];
    refl[2 * i + 1] = res.pattern.level(2).values[1];
    if (res.stopped) stopped.fetch_add(1, std::memory_order_relaxed);
  });
  sde::SdeSpec hp2;
  hp2.kind = sde::Kind::hp;
  hp2.params = {0.0, 0.0, 2};
  hp2.dt_base = dt;
  auto init2 = [&](std::size_t, RandomStream& rng, std::span<double> x0) {
    const WeylPoint w = bottom2(rng);
    std::copy(w.values.begin(), w.values.end(), x0.begin());
  };
  autonomous = sde::terminal_ensemble(hp2, 2, T, n_marginal, seed_split(c.seed, 3), c.workers, init2);
  std::vector<TestReport> out;
  out.push_back(make_report("gibbs/marginal", per_coordinate_ks(refl, autonomous, 2),
                            c.thresholds.ks_gibbs, static_cast<long long>(n_marginal), c.seed,
                            "reflected level-2 law vs autonomous two-particle law, stops=" +
                                std::to_string(stopped.load())));
  // (b) conditional uniformity at time T
  std::vector<double> coords(n_uniform);
  parallel_for(n_uniform, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed_split(c.seed, 5), i));
    const GTPattern start = multilevel::gibbs_sample(bottom2, rng);
    const auto res = multilevel::reflected_simulate(rspec, start, T, rng);
    coords[i] = multilevel::conditional_uniform_coords(res.pattern)[0];
  });
  out.push_back(make_report("gibbs/conditional-uniformity", ks_uniform(coords),
                            c.thresholds.ks_gibbs, static_cast<long long>(n_uniform), c.seed,
                            "Rosenblatt coordinate against the uniform law"));
  // (c) control: freeze level 1; a longer horizon amplifies the decoupling
  std::vector<double> frozen(n_uniform);
  const double T_control = 4.0 * T;
  parallel_for(n_uniform, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed_split(c.seed, 6), i));
    const GTPattern start = multilevel::gibbs_sample(bottom2, rng);
    multilevel::ReflectedOptions opts;
    opts.freeze_level_one = true;
    const auto res = multilevel::reflected_simulate(rspec, start, T_control, rng, opts);
    frozen[i] = multilevel::conditional_uniform_coords(res.pattern)[0];
  });
  out.push_back(control_report("gibbs/control-frozen-level", ks_uniform(frozen),
                               c.thresholds.gibbs_control_min,
                               static_cast<long long>(n_uniform), c.seed,
                               "frozen level 1 must break conditional uniformity (T x4)"));
  return out;
}

std::vector<TestReport> suite_boundary_dbm(const SuiteConfig& c) {
  const int n = 200;
  const double tol = c.thresholds.boundary_flow_factor / std::sqrt(static_cast<double>(n));
  sde::SdeSpec spec;
  spec.kind = sde::Kind::dbm;
  spec.params = {0.0, 0.0, n};
  spec.dt_base = pick(c.dt, 1e-3);
  RandomStream rng(seed_split(c.seed, 0));
  std::vector<double> state(static_cast<std::size_t>(n), 0.0);
  sde::Stepper st(spec, n);
  st.diffraction_step(state, spec.dt_base * 1e-4, rng);
  const OmegaPoint om0 = embed(WeylPoint{state});
  std::vector<TestReport> out;
  double t_now = 0.0;
  double dt_start = spec.dt_base * 1e-6;
  double worst_delta = 0.0, worst_alpha = 0.0, delta_at_1 = 0.0;
  for (double t_target : {0.25, 0.5, 1.0}) {
    st.advance(state, t_target - t_now, rng, dt_start);
    dt_start = 0.0;
    t_now = t_target;
    const OmegaPoint om = embed(WeylPoint{state});
    worst_delta = std::max(worst_delta, std::abs((om.delta - om0.delta) - t_target));
    for (std::size_t k = 0; k < om.alpha_plus.size(); ++k) {
      worst_alpha = std::max(worst_alpha, std::abs(om.alpha_plus[k] - om0.alpha_plus[k]));
      worst_alpha = std::max(worst_alpha, std::abs(om.alpha_minus[k] - om0.alpha_minus[k]));
    }
    if (t_target == 1.0) delta_at_1 = om.delta - om0.delta;
  }
  out.push_back(make_report("boundary-dbm/delta-linear", worst_delta, tol, n, c.seed,
                            "|delta(t)-delta(0)-t| at t in {0.25,0.5,1}, N=200"));
  out.push_back(make_report("boundary-dbm/alpha-frozen", worst_alpha, tol, n, c.seed,
                            "max alpha drift over the run"));
  out.push_back(control_report("boundary-dbm/control-wrong-slope",
                               std::abs(delta_at_1 - 2.0), tol, n, c.seed,
                               "delta shift against slope-2 law must fail"));
  return out;
}

std::vector<TestReport> suite_boundary_ou(const SuiteConfig& c) {
  const int n = 200;
  const double cr = 0.5;
  const double tol = c.thresholds.boundary_flow_factor / std::sqrt(static_cast<double>(n));
  sde::SdeSpec spec;
  spec.kind = sde::Kind::ou;
  spec.params = {0.0, 0.0, n};
  spec.ou_rate = cr;
  spec.dt_base = pick(c.dt, 1e-3);
  RandomStream rng(seed_split(c.seed, 0));
  std::vector<double> state(static_cast<std::size_t>(n), 3.0);
  sde::Stepper st(spec, n);
  st.diffraction_step(state, spec.dt_base * 1e-4, rng);
  const OmegaPoint om0 = embed(WeylPoint{state});
  double worst_gamma = 0.0, worst_delta = 0.0, gamma_at_2 = 0.0;
  double t_now = 0.0;
  double dt_start = spec.dt_base * 1e-6;
  for (double t_target : {1.0, 2.0}) {
    st.advance(state, t_target - t_now, rng, dt_start);
    dt_start = 0.0;
    t_now = t_target;
    const OmegaPoint om = embed(WeylPoint{state});
    const OmegaPoint flow = sde::ou_boundary_flow(om0, t_target, cr);
    worst_gamma = std::max(worst_gamma, std::abs(om.gamma1 - flow.gamma1));
    worst_delta = std::max(worst_delta, std::abs(om.delta - flow.delta));
    if (t_target == 2.0) gamma_at_2 = om.gamma1;
  }
  std::vector<TestReport> out;
  out.push_back(make_report("boundary-ou/gamma1-decay", worst_gamma, tol, n, c.seed,
                            "gamma1 against the exponential flow, c=0.5, N=200"));
  out.push_back(make_report("boundary-ou/delta-flow", worst_delta, tol, n, c.seed,
                            "delta against the closed-form flow"));
  const double wrong = std::abs(gamma_at_2 - om0.gamma1 * std::exp(-2.0 * cr * 2.0));
  out.push_back(control_report("boundary-ou/control-wrong-rate", wrong, tol, n, c.seed,
                               "gamma1 against a doubled decay rate must fail"));
  return out;
}

std::vector<TestReport> suite_matrix_vs_vector(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{100000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("matrix-vs-vector/ks", n, c.thresholds.power_floor, c.seed)};
  const double t = pick(c.t_final, 0.25);
  std::vector<TestReport> out;
  // (a) eigenvalue law of the matrix flow vs the interacting vector flow
  matrix::MatrixSdeSpec mspec;
  mspec.n = 3;
  mspec.params = {0.0, 0.0, 3};
  mspec.dt_base = pick(c.dt, 5e-4);
  const WeylPoint x0{{-1.0, 0.2, 1.1}};
  Eigen::VectorXd d0(3);
  d0 << -1.0, 0.2, 1.1;
  const rmt::HermitianMatrix m0 = d0.asDiagonal().toDenseMatrix().cast<std::complex<double>>();
  const std::vector<double> eig_ens = matrix::terminal_eigenvalue_ensemble(
      mspec, t, n, c.seed, c.workers, [&](std::size_t, RandomStream&) { return m0; });
  sde::SdeSpec vspec;
  vspec.kind = sde::Kind::hp;
  vspec.params = {0.0, 0.0, 3};
  vspec.dt_base = pick(c.dt, 1e-3);
  const std::vector<double> vec_ens = sde::terminal_ensemble(
      vspec, 3, t, n, seed_split(c.seed, 2), c.workers,
      [&](std::size_t, RandomStream&, std::span<double> s) {
        std::copy(x0.values.begin(), x0.values.end(), s.begin());
      });
  out.push_back(make_report("matrix-vs-vector/ks", per_coordinate_ks(eig_ens, vec_ens, 3),
                            c.thresholds.ks_matrix, static_cast<long long>(n), c.seed,
                            "N=3, s=0, t=" + std::to_string(t) + ", fixed start"));
  // (b) stationarity of the exact s=0 matrix ensemble
  const double T_st = 0.5;
  std::vector<double> init_eigs(n * 3);
  const std::vector<double> final_eigs = matrix::terminal_eigenvalue_ensemble(
      mspec, T_st, n, seed_split(c.seed, 3), c.workers,
      [&](std::size_t i, RandomStream& rng) {
        const rmt::HermitianMatrix x = matrix::hermitian_preimage(rmt::haar_unitary(3, rng));
        const WeylPoint ev = rmt::eval(x);
        std::copy(ev.values.begin(), ev.values.end(), init_eigs.begin() + static_cast<std::ptrdiff_t>(3 * i));
        return x;
      });
  out.push_back(make_report("matrix-vs-vector/stationarity",
                            per_coordinate_ks(init_eigs, final_eigs, 3),
                            c.thresholds.ks_matrix, static_cast<long long>(n), c.seed,
                            "exact matrix ensemble evolved to T=0.5, s=0"));
  // (c) drift-constant arbitration at N=1, s_re=1
  const std::size_t na = n / 2;
  matrix::MatrixSdeSpec arb;
  arb.n = 1;
  arb.params = {1.0, 0.0, 1};
  arb.dt_base = 5e-4;
  const rmt::HermitianMatrix one = rmt::HermitianMatrix::Constant(1, 1, 1.0);
  const std::vector<double> scalar_std = matrix::terminal_eigenvalue_ensemble(
      arb, t, na, seed_split(c.seed, 4), c.workers,
      [&](std::size_t, RandomStream&) { return one; });
  matrix::MatrixSdeSpec arb_shift = arb;
  arb_shift.drift_constant = matrix::DriftConstant::shifted;
  const std::vector<double> scalar_shift = matrix::terminal_eigenvalue_ensemble(
      arb_shift, t, na, seed_split(c.seed, 5), c.workers,
      [&](std::size_t, RandomStream&) { return one; });
  sde::SdeSpec scalar;
  scalar.kind = sde::Kind::hp;
  scalar.params = {1.0, 0.0, 1};
  scalar.dt_base = 5e-4;
  const std::vector<double> scalar_ref = sde::terminal_ensemble(
      scalar, 1, t, na, seed_split(c.seed, 6), c.workers,
      [&](std::size_t, RandomStream&, std::span<double> s) { s[0] = 1.0; });
  out.push_back(make_report("matrix-vs-vector/drift-constant",
                            ks_two_sample(scalar_std, scalar_ref), c.thresholds.ks_matrix,
                            static_cast<long long>(na), c.seed,
                            "N=1 reduction with the standard constant"));
  out.push_back(control_report("matrix-vs-vector/control-shifted-constant",
                               ks_two_sample(scalar_shift, scalar_ref),
                               2.0 * c.thresholds.ks_matrix, static_cast<long long>(na),
                               c.seed, "shifted constant must fail the N=1 reduction"));
  return out;
}

std::vector<TestReport> suite_cue(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{100000});
  if (n < c.thresholds.power_floor)
    return {inconclusive_report("cue/invariance", n, c.thresholds.power_floor, c.seed)};
  const double T = pick(c.t_final, 0.5);
  const double dt = pick(c.dt, 1e-3);
  std::vector<TestReport> out;
  // (a) invariance of the circular ensemble under the direct angle dynamics
  sde::SdeSpec circ4;
  circ4.kind = sde::Kind::circle;
  circ4.params = {0.0, 0.0, 4};
  circ4.dt_base = dt;
  std::vector<double> init(n * 4);
  const std::vector<double> fin = sde::terminal_ensemble(
      circ4, 4, T, n, c.seed, c.workers,
      [&](std::size_t i, RandomStream& rng, std::span<double> s) {
        const auto angles = links::cue_sample(4, rng);
        std::copy(angles.begin(), angles.end(), s.begin());
        std::copy(angles.begin(), angles.end(), init.begin() + static_cast<std::ptrdiff_t>(4 * i));
      });
  out.push_back(make_report("cue/invariance", per_coordinate_ks(init, fin, 4),
                            c.thresholds.ks_cue_invariance, static_cast<long long>(n), c.seed,
                            "N=4, s=0, T=" + std::to_string(T)));
  // (b) direct angle integration vs Cayley pushforward of the line process
  const double t_mode = 0.25;
  sde::SdeSpec circ2 = circ4;
  circ2.params.n = 2;
  std::vector<double> direct_fin(n * 2), push_fin(n * 2);
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed_split(c.seed, 21), i));
    const auto angles = links::cue_sample(2, rng);
    std::vector<double> th(angles);
    sde::Stepper st(circ2, 2);
    st.advance(th, t_mode, rng);
    direct_fin[2 * i] = th[0];
    direct_fin[2 * i + 1] = th[1];
  });
  sde::SdeSpec hp2;
  hp2.kind = sde::Kind::hp;
  hp2.params = {0.0, 0.0, 2};
  hp2.dt_base = dt;
  parallel_for(n, c.workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed_split(c.seed, 22), i));
    const auto angles = links::cue_sample(2, rng);
    std::vector<double> x{angle_to_cayley(angles[0]), angle_to_cayley(angles[1])};
    std::sort(x.begin(), x.end());
    sde::Stepper st(hp2, 2);
    st.advance(x, t_mode, rng);
    std::vector<double> th{cayley_to_angle(x[0]), cayley_to_angle(x[1])};
    push_fin[2 * i] = th[0];
    push_fin[2 * i + 1] = th[1];
  });
  out.push_back(make_report("cue/modes-agree", per_coordinate_ks(direct_fin, push_fin, 2),
                            c.thresholds.ks_cue_modes, static_cast<long long>(n), c.seed,
                            "direct angle SDE vs Cayley pushforward, N=2, t=0.25"));
  // control: s_re=2 angle dynamics from the circular start must drift
  const std::size_t nc = n / 4;
  sde::SdeSpec wrong = circ4;
  wrong.params.s_re = 2.0;
  std::vector<double> init_c(nc * 4);
  const std::vector<double> fin_c = sde::terminal_ensemble(
      wrong, 4, T, nc, seed_split(c.seed, 23), c.workers,
      [&](std::size_t i, RandomStream& rng, std::span<double> s) {
        const auto angles = links::cue_sample(4, rng);
        std::copy(angles.begin(), angles.end(), s.begin());
        std::copy(angles.begin(), angles.end(), init_c.begin() + static_cast<std::ptrdiff_t>(4 * i));
      });
  out.push_back(control_report("cue/control-perturbed-s", per_coordinate_ks(init_c, fin_c, 4),
                               2.0 * c.thresholds.ks_cue_invariance,
                               static_cast<long long>(nc), c.seed,
                               "s_re=2 angle dynamics from the circular ensemble"));
  return out;
}

std::vector<TestReport> suite_approximation(const SuiteConfig& c) {
  const std::size_t n = pick(c.samples, std::size_t{1000});
  const double t = pick(c.t_final, 0.25);
  const double dt = pick(c.dt, 1e-3);
  const std::vector<int> sizes = {25, 50, 100, 200};
  std::vector<std::vector<double>> gamma1(sizes.size()), delta(sizes.size());
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const int dim = sizes[si];
    gamma1[si].resize(n);
    delta[si].resize(n);
    sde::SdeSpec spec;
    spec.kind = sde::Kind::hp;
    spec.params = {0.0, 0.0, dim};
    spec.dt_base = dt;
    const std::vector<double> fin = sde::terminal_ensemble(
        spec, dim, t, n, seed_split(c.seed, si), c.workers,
        [&](std::size_t, RandomStream& rng, std::span<double> s) {
          const WeylPoint w = links::hp_sample({0.0, 0.0, dim}, links::HPMethod::cue_cayley, rng);
          std::copy(w.values.begin(), w.values.end(), s.begin());
        });
    for (std::size_t i = 0; i < n; ++i) {
      WeylPoint w;
      w.values.assign(fin.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)),
                      fin.begin() + static_cast<std::ptrdiff_t>((i + 1) * static_cast<std::size_t>(dim)));
      const OmegaPoint om = embed(w);
      gamma1[si][i] = om.gamma1;
      delta[si][i] = om.delta;
    }
  }
  std::ostringstream det;
  det << "KS(gamma1): ";
  std::vector<double> ks_g, ks_d;
  for (std::size_t si = 0; si + 1 < sizes.size(); ++si) {
    ks_g.push_back(ks_two_sample(gamma1[si], gamma1[si + 1]));
    ks_d.push_back(ks_two_sample(delta[si], delta[si + 1]));
    det << sizes[si] << "->" << sizes[si + 1] << "=" << ks_g.back() << " ";
  }
  det << "| KS(delta): ";
  for (std::size_t si = 0; si + 1 < sizes.size(); ++si)
    det << sizes[si] << "->" << sizes[si + 1] << "=" << ks_d[si] << " ";
  const double last = std::max(ks_g.back(), ks_d.back());
  std::vector<TestReport> out;
  out.push_back(make_report("approximation/cauchy-ks", last, c.thresholds.ks_approximation,
                            static_cast<long long>(n), c.seed, det.str()));
  return out;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"eigenfunction", "invariance",       "intertwining-mc", "coherency",
          "boundary-coherency", "duality",     "eq26",            "block-kernel",
          "h-transform",   "gibbs",            "boundary-dbm",    "boundary-ou",
          "matrix-vs-vector", "cue",           "approximation"};
}

std::vector<TestReport> suite(const std::string& name, const SuiteConfig& config) {
  if (name == "eigenfunction") return suite_eigenfunction(config);
  if (name == "invariance") return suite_invariance(config);
  if (name == "intertwining-mc") return suite_intertwining_mc(config);
  if (name == "coherency") return suite_coherency(config);
  if (name == "boundary-coherency") return suite_boundary_coherency(config);
  if (name == "duality") return suite_duality(config);
  if (name == "eq26") return suite_eq26(config);
  if (name == "block-kernel") return suite_block_kernel(config);
  if (name == "h-transform") return suite_h_transform(config);
  if (name == "gibbs") return suite_gibbs(config);
  if (name == "boundary-dbm") return suite_boundary_dbm(config);
  if (name == "boundary-ou") return suite_boundary_ou(config);
  if (name == "matrix-vs-vector") return suite_matrix_vs_vector(config);
  if (name == "cue") return suite_cue(config);
  if (name == "approximation") return suite_approximation(config);
  throw std::invalid_argument("unknown suite: " + name);
}

}  // namespace ilab::verify
