// interlace-lab: sampling, evolution, verification and kernel checks for
// interlacing particle systems driven by a complex parameter s.
//
//   interlace-lab sample  <hp|cue|gue|link|gt|omega>  [flags]
//   interlace-lab evolve  <hp|dbm|ou|circle|matrix|multilevel|pushblock> [flags]
//   interlace-lab verify  <suite>                     [flags]
//   interlace-lab pde     <density|siegmund|eq26|block-kernel|h-transform> [flags]
//
// Exit codes: 0 success, 1 usage/config error, 2 failed verification suite,
// 3 numeric failure.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ilab/core.hpp"
#include "ilab/csv.hpp"
#include "ilab/links.hpp"
#include "ilab/matrix.hpp"
#include "ilab/multilevel.hpp"
#include "ilab/parallel.hpp"
#include "ilab/pde.hpp"
#include "ilab/random.hpp"
#include "ilab/rmt.hpp"
#include "ilab/sde.hpp"
#include "ilab/verify.hpp"

#include <json.hpp>

namespace {

using namespace ilab;

struct Options {
  std::uint64_t seed = 20240809;
  int workers = 0;
  int n = 2;
  double s_re = 0.0, s_im = 0.0;
  double c_rate = 1.0;
  double t_final = 0.0, dt = 0.0;  // 0 = command-specific default
  std::size_t samples = 0;         // 0 = command-specific default
  int snapshots = 11;
  std::string method = "cue-cayley";
  std::size_t burn_in = 10000, thinning = 10;
  double variance = 1.0;
  double gamma1 = 0.0, gamma2 = 0.0;
  std::vector<double> alpha_plus, alpha_minus, x0;
  double u = -1.0, u_prime = -1.0, v = 1.0, v_prime = 1.0;
  int depth = 1;
  double scale = 100.0;
  double grid_h = 0.01, domain_a = 8.0, grid_dt = 1e-4;
  int level = 1;
  bool dual = false;
  double t_pde = 0.2;
  std::string out;
  std::string format = "csv";
  std::string target;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

std::ostream& out_stream(const Options& opt, std::ofstream& file) {
  if (opt.out.empty()) return std::cout;
  file = open_out(opt.out);
  return file;
}

WeylPoint parse_point(const std::vector<double>& v) {
  WeylPoint w{v};
  std::sort(w.values.begin(), w.values.end());
  return w;
}

OmegaPoint make_omega(const Options& opt) {
  OmegaPoint om;
  om.alpha_plus = opt.alpha_plus;
  om.alpha_minus = opt.alpha_minus;
  std::sort(om.alpha_plus.rbegin(), om.alpha_plus.rend());
  std::sort(om.alpha_minus.rbegin(), om.alpha_minus.rend());
  om.gamma1 = opt.gamma1;
  om.delta = opt.gamma2 + om.alpha_square_sum();
  if (!om.valid()) throw CLI::ValidationError("--gamma2/alpha", "invalid boundary point");
  return om;
}

int run_sample(Options opt) {
  if (opt.samples == 0) opt.samples = 1000;
  std::ofstream file;
  std::ostream& os = out_stream(opt, file);
  const HPParams p{opt.s_re, opt.s_im, opt.n};
  std::vector<double> rows;
  int dim = opt.n;

  if (opt.target == "hp") {
    rows.resize(opt.samples * static_cast<std::size_t>(dim));
    if (opt.method == "cue-cayley") {
      parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
        RandomStream rng(seed_split(opt.seed, i));
        const WeylPoint w = links::hp_sample(p, links::HPMethod::cue_cayley, rng);
        std::copy(w.values.begin(), w.values.end(),
                  rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
      });
    } else if (opt.method == "mh") {
      RandomStream rng(seed_split(opt.seed, 0));
      links::MHConfig mh{opt.burn_in, opt.thinning, 0.5};
      const auto chain = links::hp_sample_chain(p, opt.samples, rng, mh);
      for (std::size_t i = 0; i < chain.size(); ++i)
        std::copy(chain[i].values.begin(), chain[i].values.end(),
                  rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
    } else {
      throw CLI::ValidationError("--method", "expected cue-cayley or mh");
    }
  } else if (opt.target == "cue") {
    rows.resize(opt.samples * static_cast<std::size_t>(dim));
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
      RandomStream rng(seed_split(opt.seed, i));
      const auto a = links::cue_sample(opt.n, rng);
      std::copy(a.begin(), a.end(),
                rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
    });
  } else if (opt.target == "gue") {
    rows.resize(opt.samples * static_cast<std::size_t>(dim));
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
      RandomStream rng(seed_split(opt.seed, i));
      const WeylPoint w = rmt::eval(rmt::gue_sample(opt.n, opt.variance, rng));
      std::copy(w.values.begin(), w.values.end(),
                rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
    });
  } else if (opt.target == "link") {
    if (opt.x0.empty()) throw CLI::ValidationError("--x0", "source point required");
    const WeylPoint src = parse_point(opt.x0);
    dim = src.n() - 1;
    if (dim < 1) throw CLI::ValidationError("--x0", "need at least two coordinates");
    rows.resize(opt.samples * static_cast<std::size_t>(dim));
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
      RandomStream rng(seed_split(opt.seed, i));
      const WeylPoint y = links::link_sample(src, rng);
      std::copy(y.values.begin(), y.values.end(),
                rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
    });
  } else if (opt.target == "omega") {
    const OmegaPoint om = make_omega(opt);
    rows.resize(opt.samples * static_cast<std::size_t>(dim));
    parallel_for(opt.samples, opt.workers, [&](std::size_t i) {
      RandomStream rng(seed_split(opt.seed, i));
      const WeylPoint w = links::boundary_link_sample(om, opt.n, rng);
      std::copy(w.values.begin(), w.values.end(),
                rows.begin() + static_cast<std::ptrdiff_t>(i * static_cast<std::size_t>(dim)));
    });
  } else if (opt.target == "gt") {
    // pattern samples: one row per (sample, level, index)
    csv::set_precision(os);
    os << "idx,level,index,value\n";
    RandomStream rng(seed_split(opt.seed, 0));
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const WeylPoint bottom = links::hp_sample(p, links::HPMethod::cue_cayley, rng);
      const GTPattern pat = links::gt_uniform_sample(bottom, rng);
      for (int lvl = 1; lvl <= pat.depth(); ++lvl)
        for (int k = 0; k < lvl; ++k)
          os << i << ',' << lvl << ',' << k + 1 << ','
             << pat.level(lvl).values[static_cast<std::size_t>(k)] << '\n';
    }
    return 0;
  } else {
    throw CLI::ValidationError("target", "unknown sample target: " + opt.target);
  }
  csv::write_samples(os, rows, dim);
  return 0;
}

int run_evolve(Options opt) {
  if (opt.t_final == 0.0) opt.t_final = 0.5;
  if (opt.dt == 0.0) opt.dt = opt.target == "matrix" ? 5e-4 : 1e-3;
  std::ofstream file;
  std::ostream& os = out_stream(opt, file);
  const HPParams p{opt.s_re, opt.s_im, opt.n};

  if (opt.target == "multilevel") {
    RandomStream rng(seed_split(opt.seed, 0));
    multilevel::ReflectedSpec spec;
    spec.params = p;
    spec.dt_base = opt.dt;
    const GTPattern start = multilevel::gibbs_sample(
        [&](RandomStream& r) { return links::hp_sample(p, links::HPMethod::cue_cayley, r); }, rng);
    const auto snaps =
        multilevel::reflected_simulate_path(spec, start, opt.t_final, rng, opt.snapshots);
    csv::write_pattern_path(os, snaps);
    return 0;
  }
  if (opt.target == "pushblock") {
    multilevel::PushBlockParams pb{opt.u, opt.u_prime, opt.v, opt.v_prime, opt.depth};
    multilevel::IntPattern start;
    for (int lvl = 1; lvl <= opt.depth; ++lvl) {
      std::vector<long long> row;
      for (int k = 0; k < lvl; ++k) row.push_back(2 * k - lvl + 1);
      start.levels.push_back(row);
    }
    RandomStream rng(seed_split(opt.seed, 0));
    const auto snaps = multilevel::pushblock_simulate_path(pb, start, opt.t_final, rng, opt.snapshots);
    csv::write_pushblock_path(os, snaps);
    return 0;
  }
  if (opt.target == "matrix") {
    matrix::MatrixSdeSpec spec;
    spec.n = opt.n;
    spec.params = p;
    spec.dt_base = opt.dt;
    RandomStream rng(seed_split(opt.seed, 0));
    rmt::HermitianMatrix x0;
    if (opt.x0.empty()) {
      x0 = matrix::hermitian_preimage(rmt::haar_unitary(opt.n, rng));
    } else {
      const WeylPoint w = parse_point(opt.x0);
      Eigen::VectorXd d(w.n());
      for (int i = 0; i < w.n(); ++i) d(i) = w.values[static_cast<std::size_t>(i)];
      x0 = d.asDiagonal().toDenseMatrix().cast<std::complex<double>>();
    }
    const auto path = matrix::matrix_simulate(spec, x0, opt.t_final, rng, opt.snapshots);
    if (opt.format == "json") {
      nlohmann::json arr = nlohmann::json::array();
      for (std::size_t k = 0; k < path.times.size(); ++k) {
        nlohmann::json entries = nlohmann::json::array();
        const auto& mtx = path.matrices[k];
        for (int i = 0; i < mtx.rows(); ++i)
          for (int j = 0; j < mtx.cols(); ++j)
            entries.push_back({mtx(i, j).real(), mtx(i, j).imag()});
        arr.push_back({{"t", path.times[k]}, {"entries", entries}});
      }
      os << arr.dump(2) << '\n';
    } else {
      sde::PathRecord rec;
      rec.times = path.times;
      rec.states = path.eigenvalues;
      csv::write_path(os, rec);
    }
    return 0;
  }

  sde::SdeSpec spec;
  spec.params = p;
  spec.dt_base = opt.dt;
  spec.ou_rate = opt.c_rate;
  if (opt.target == "hp")
    spec.kind = sde::Kind::hp;
  else if (opt.target == "dbm")
    spec.kind = sde::Kind::dbm;
  else if (opt.target == "ou")
    spec.kind = sde::Kind::ou;
  else if (opt.target == "circle")
    spec.kind = sde::Kind::circle;
  else
    throw CLI::ValidationError("target", "unknown evolve target: " + opt.target);

  RandomStream rng(seed_split(opt.seed, 0));
  WeylPoint x0;
  if (!opt.x0.empty()) {
    x0 = parse_point(opt.x0);
  } else if (spec.kind == sde::Kind::circle) {
    x0 = WeylPoint{links::cue_sample(opt.n, rng)};
  } else {
    x0 = links::hp_sample({0.0, 0.0, opt.n}, links::HPMethod::cue_cayley, rng);
  }
  if (static_cast<int>(x0.values.size()) != opt.n)
    throw CLI::ValidationError("--x0", "dimension does not match --n");
  const bool tied = !x0.strictly_ordered();
  const auto rec = tied ? sde::simulate_degenerate_start(spec, x0, opt.t_final, rng,
                                                         opt.dt * 1e-4, opt.snapshots)
                        : sde::simulate(spec, x0, opt.t_final, rng, opt.snapshots);
  csv::write_path(os, rec);
  return 0;
}

int run_verify(const Options& opt) {
  verify::SuiteConfig cfg;
  cfg.seed = opt.seed;
  cfg.workers = opt.workers;
  cfg.samples = opt.samples;
  cfg.dt = opt.dt;
  cfg.t_final = opt.t_final;
  cfg.grid_h = opt.grid_h == 0.01 ? 0.0 : opt.grid_h;
  cfg.domain_a = opt.domain_a == 8.0 ? 0.0 : opt.domain_a;
  const auto names = verify::suite_names();
  if (std::find(names.begin(), names.end(), opt.target) == names.end())
    throw CLI::ValidationError("suite", "unknown suite: " + opt.target);
  const auto reports = verify::suite(opt.target, cfg);
  std::ofstream file;
  std::ostream& os = out_stream(opt, file);
  os << verify::reports_to_json(reports) << '\n';
  bool all_pass = true;
  for (const auto& r : reports) {
    std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  statistic=" << r.statistic
              << " threshold=" << r.threshold << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? 0 : 2;
}

int run_pde(const Options& opt) {
  pde::GridConfig cfg;
  cfg.h = opt.grid_h;
  cfg.domain_a = opt.domain_a;
  cfg.dt = opt.grid_dt;
  std::ofstream file;
  std::ostream& os = out_stream(opt, file);

  if (opt.target == "density") {
    const auto g = pde::solve_density(opt.level, {opt.s_re, opt.s_im, opt.level}, opt.dual,
                                      opt.t_pde, cfg, opt.workers);
    g.write_csv(os);
    std::cerr << "mass_defect=" << g.mass_defect << '\n';
    return 0;
  }
  if (opt.target == "siegmund") {
    const int lvl = std::max(opt.level, 1);
    const auto gp = pde::solve_density(lvl, {opt.s_re, opt.s_im, lvl}, false, opt.t_pde, cfg, opt.workers);
    const auto gd = pde::solve_density(lvl, {opt.s_re, opt.s_im, lvl}, true, opt.t_pde, cfg, opt.workers);
    const double gap = pde::check_siegmund_pde(gp, gd, 10);
    os << "{\"check\":\"siegmund\",\"gap\":" << gap << "}\n";
    return 0;
  }
  if (opt.target == "eq26") {
    const auto gp = pde::solve_density(2, {opt.s_re, opt.s_im, 2}, false, opt.t_pde, cfg, opt.workers);
    const auto gd = pde::solve_density(2, {opt.s_re, opt.s_im, 2}, true, opt.t_pde, cfg, opt.workers);
    const double gap = pde::check_intermediate_intertwining(gp, gd, {{-1.0, 1.0}, {-0.5, 0.7}});
    os << "{\"check\":\"eq26\",\"gap\":" << gap << "}\n";
    return 0;
  }
  if (opt.target == "block-kernel") {
    const auto gp = pde::solve_density(2, {opt.s_re, opt.s_im, 2}, false, opt.t_pde, cfg, opt.workers);
    const auto gd = pde::solve_density(2, {opt.s_re, opt.s_im, 2}, true, opt.t_pde, cfg, opt.workers);
    const auto gaps = pde::check_block_kernel(gp, gd, -1.0, 0.8, -0.2, -1.2, 1.1, 0.3);
    os << "{\"check\":\"block-kernel\",\"gap_destinations\":" << gaps.integrate_destinations
       << ",\"gap_sources\":" << gaps.integrate_sources << "}\n";
    return 0;
  }
  if (opt.target == "h-transform") {
    const int lvl = std::max(opt.level, 1);
    const auto gp = pde::solve_density(lvl, {opt.s_re, opt.s_im, lvl}, false, opt.t_pde, cfg, opt.workers);
    const auto gd = pde::solve_density(lvl + 1, {opt.s_re, opt.s_im, lvl + 1}, true, opt.t_pde, cfg, opt.workers);
    const double gap = pde::check_h_transform(gp, gd, 2.0);
    os << "{\"check\":\"h-transform\",\"gap\":" << gap << "}\n";
    return 0;
  }
  throw CLI::ValidationError("target", "unknown pde check: " + opt.target);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"interlacing particle system laboratory"};
  app.set_config("--config", "", "flat key=value configuration file");
  app.allow_config_extras(false);
  app.require_subcommand(1);

  Options opt;

  // flags live on the root app so that a flat config file can set any of
  // them; subcommands fall through and pick up only what they use
  app.add_option("--seed", opt.seed, "master seed")->envname("INTERLACE_LAB_SEED");
  app.add_option("--workers", opt.workers, "worker threads (0 = hardware)");
  app.add_option("--out", opt.out, "output file (default stdout)");
  app.add_option("--format", opt.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--n", opt.n, "particle count / matrix size");
  app.add_option("--s-re", opt.s_re, "real part of s");
  app.add_option("--s-im", opt.s_im, "imaginary part of s");
  app.add_option("--samples", opt.samples, "number of draws");
  app.add_option("--t", opt.t_final, "final time");
  app.add_option("--dt", opt.dt, "base time step");
  app.add_option("--grid-h", opt.grid_h, "grid spacing (transformed coordinate)");
  app.add_option("--domain-a", opt.domain_a, "grid half-width (transformed coordinate)");
  app.add_option("--method", opt.method, "hp sampling route: cue-cayley|mh");
  app.add_option("--burn-in", opt.burn_in, "chain burn-in sweeps");
  app.add_option("--thinning", opt.thinning, "chain thinning");
  app.add_option("--variance", opt.variance, "Gaussian ensemble entry variance");
  app.add_option("--x0", opt.x0, "source/initial point (comma separated)")->delimiter(',');
  app.add_option("--gamma1", opt.gamma1, "boundary gamma1");
  app.add_option("--gamma2", opt.gamma2, "boundary gamma2");
  app.add_option("--alpha-plus", opt.alpha_plus, "boundary alpha+ entries")->delimiter(',');
  app.add_option("--alpha-minus", opt.alpha_minus, "boundary alpha- entries")->delimiter(',');
  app.add_option("--c", opt.c_rate, "mean-reversion rate");
  app.add_option("--snapshots", opt.snapshots, "recorded states per path");
  app.add_option("--u", opt.u, "push-block parameter u");
  app.add_option("--u-prime", opt.u_prime, "push-block parameter u'");
  app.add_option("--v", opt.v, "push-block parameter v");
  app.add_option("--v-prime", opt.v_prime, "push-block parameter v'");
  app.add_option("--depth", opt.depth, "pattern depth");
  app.add_option("--level", opt.level, "diffusion level n");
  app.add_flag("--dual", opt.dual, "solve the dual kernel");
  app.add_option("--t-pde", opt.t_pde, "kernel time");
  app.add_option("--grid-dt", opt.grid_dt, "solver time step");

  auto* sample = app.add_subcommand("sample", "draw from the implemented measures");
  sample->add_option("target", opt.target, "hp|cue|gue|link|gt|omega")->required();
  sample->fallthrough();

  auto* evolve = app.add_subcommand("evolve", "run the stochastic dynamics");
  evolve->add_option("target", opt.target, "hp|dbm|ou|circle|matrix|multilevel|pushblock")
      ->required();
  evolve->fallthrough();

  auto* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
  verify_cmd->add_option("suite", opt.target, "suite name")->required();
  verify_cmd->fallthrough();

  auto* pde_cmd = app.add_subcommand("pde", "kernel solves and identity checks");
  pde_cmd->add_option("target", opt.target, "density|siegmund|eq26|block-kernel|h-transform")
      ->required();
  pde_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*sample) return run_sample(opt);
    if (*evolve) return run_evolve(opt);
    if (*verify_cmd) return run_verify(opt);
    if (*pde_cmd) return run_pde(opt);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
