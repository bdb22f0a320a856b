#include "ilab/links.hpp"

#include <algorithm>
#include <cmath>

#include "ilab/core.hpp"

namespace ilab::links {

double link_density(const WeylPoint& x, const WeylPoint& y) {
  if (!x.strictly_ordered())
    throw NumericError("link_density: tied source point, density undefined");
  if (!interlaces(y, x)) return 0.0;
  const int n = y.n();
  double nfact = 1.0;
  for (int k = 2; k <= n; ++k) nfact *= k;
  return nfact * vandermonde(y) / vandermonde(x);
}

WeylPoint link_sample(const WeylPoint& x, RandomStream& rng) {
  const int np1 = x.n();
  const rmt::UnitaryMatrix u = rmt::haar_unitary(np1, rng);
  Eigen::VectorXd d(np1);
  for (int i = 0; i < np1; ++i) d(i) = x.values[static_cast<std::size_t>(i)];
  rmt::HermitianMatrix m = u.adjoint() * d.asDiagonal() * u;
  rmt::hermitize(m);
  return rmt::eval(rmt::corner(m, np1 - 1));
}

GTPattern gt_uniform_sample(const WeylPoint& bottom, RandomStream& rng) {
  const int n = bottom.n();
  GTPattern pat;
  pat.levels.resize(static_cast<std::size_t>(n));
  pat.levels[static_cast<std::size_t>(n - 1)] = bottom;
  for (int lvl = n - 1; lvl >= 1; --lvl) {
    pat.levels[static_cast<std::size_t>(lvl - 1)] =
        link_sample(pat.levels[static_cast<std::size_t>(lvl)], rng);
  }
  return pat;
}

double lambda_hat_density(const WeylPoint& x, const WeylPoint& y, const HPParams& p) {
  if (!interlaces(y, x)) return 0.0;
  const int np1 = x.n();
  HPParams q = p;
  double prod = 1.0;
  for (double yi : y.values) prod *= speed_density(yi, np1, q, /*dual=*/true);
  return prod;
}

double lambda_hat_h_function(const WeylPoint& y, int n_plus_1, const HPParams& p) {
  double prod = vandermonde(y);
  for (double yi : y.values) prod /= speed_density(yi, n_plus_1, p, /*dual=*/true);
  return prod;
}

WeylPoint boundary_link_sample(const OmegaPoint& omega, int n, RandomStream& rng) {
  return rmt::eval(rmt::ergodic_matrix_sample(omega, n, rng));
}

std::vector<double> cue_sample(int n, RandomStream& rng) {
  const rmt::UnitaryMatrix u = rmt::haar_unitary(n, rng);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(u, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw NumericError("cue_sample: eigensolver did not converge");
  std::vector<double> angles(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) angles[static_cast<std::size_t>(i)] = std::arg(es.eigenvalues()(i));
  std::sort(angles.begin(), angles.end());
  return angles;
}

namespace {

// One random-walk sweep; proposal is a joint Gaussian move re-sorted into the
// chamber, which keeps the kernel symmetric on ordered representatives.
bool mh_sweep(std::vector<double>& x, double& logp, const HPParams& p, double scale,
              RandomStream& rng) {
  std::vector<double> prop(x);
  for (double& v : prop) v += scale * rng.normal();
  std::sort(prop.begin(), prop.end());
  WeylPoint w{prop};
  if (!w.strictly_ordered()) return false;
  const double lp = hp_log_density_unnorm(w, p);
  if (std::log(rng.uniform()) <= lp - logp) {
    x.swap(prop);
    logp = lp;
    return true;
  }
  return false;
}

std::vector<double> mh_initial_point(int n) {
  // Spread start inside the bulk of the target.
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    x[static_cast<std::size_t>(i)] = -1.0 + 2.0 * i / std::max(1, n - 1);
  if (n == 1) x[0] = 0.0;
  return x;
}

}  // namespace

std::vector<WeylPoint> hp_sample_chain(const HPParams& p, std::size_t n_draws,
                                       RandomStream& rng, const MHConfig& mh) {
  if (p.s_re <= -0.5)
    throw std::invalid_argument("hp_sample_chain: requires Re(s) > -1/2");
  const int n = p.n;
  const double scale = mh.scale_factor / std::sqrt(static_cast<double>(n));
  std::vector<double> x = mh_initial_point(n);
  double logp = hp_log_density_unnorm(WeylPoint{x}, p);
  for (std::size_t k = 0; k < mh.burn_in; ++k) mh_sweep(x, logp, p, scale, rng);
  std::vector<WeylPoint> out;
  out.reserve(n_draws);
  for (std::size_t d = 0; d < n_draws; ++d) {
    for (std::size_t k = 0; k < mh.thinning; ++k) mh_sweep(x, logp, p, scale, rng);
    out.emplace_back(WeylPoint{x});
  }
  return out;
}

WeylPoint hp_sample(const HPParams& p, HPMethod method, RandomStream& rng,
                    const MHConfig& mh) {
  switch (method) {
    case HPMethod::cue_cayley: {
      if (p.s_re != 0.0 || p.s_im != 0.0)
        throw std::invalid_argument("hp_sample: cue-cayley route is exact only at s = 0");
      std::vector<double> angles = cue_sample(p.n, rng);
      for (double& a : angles) a = angle_to_cayley(a);
      std::sort(angles.begin(), angles.end());
      return WeylPoint{std::move(angles)};
    }
    case HPMethod::mh:
      return hp_sample_chain(p, 1, rng, mh).front();
  }
  throw std::invalid_argument("hp_sample: unknown method");
}

}  // namespace ilab::links
