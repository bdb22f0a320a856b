#include "ilab/matrix.hpp"

#include <cmath>

#include "ilab/parallel.hpp"

namespace ilab::matrix {

namespace {

Eigen::MatrixXcd complex_gaussian_increment(int n, double dt, RandomStream& rng) {
  const double sd = std::sqrt(dt);
  Eigen::MatrixXcd w(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      w(i, j) = std::complex<double>(sd * rng.normal(), sd * rng.normal());
  return w;
}

double drift_coefficient(const MatrixSdeSpec& spec) {
  const double base = -spec.n - 2.0 * spec.params.s_re;
  return spec.drift_constant == DriftConstant::standard ? base : base + 1.0;
}

}  // namespace

rmt::HermitianMatrix matrix_step(const rmt::HermitianMatrix& x, const MatrixSdeSpec& spec,
                                 RandomStream& rng) {
  const int n = spec.n;
  const double dt = spec.dt_base;
  const rmt::HermitianMatrix s =
      rmt::hermitian_sqrt(0.5 * (Eigen::MatrixXcd::Identity(n, n) + x * x));
  const Eigen::MatrixXcd dw = complex_gaussian_increment(n, dt, rng);
  rmt::HermitianMatrix next = x + dw * s + s * dw.adjoint();
  next += (drift_coefficient(spec) * x +
           (2.0 * spec.params.s_im + x.trace().real()) *
               Eigen::MatrixXcd::Identity(n, n)) *
          dt;
  rmt::hermitize(next);
  return next;
}

MatrixPath matrix_simulate(const MatrixSdeSpec& spec, const rmt::HermitianMatrix& x0,
                           double T, RandomStream& rng, int snapshots) {
  snapshots = std::max(snapshots, 2);
  MatrixPath path;
  rmt::HermitianMatrix x = x0;
  rmt::hermitize(x);
  path.times.push_back(0.0);
  path.matrices.push_back(x);
  path.eigenvalues.push_back(rmt::eval(x));
  const long long total_steps = std::llround(std::ceil(T / spec.dt_base));
  long long done = 0;
  for (int k = 1; k < snapshots; ++k) {
    const long long target = total_steps * k / (snapshots - 1);
    for (; done < target; ++done) x = matrix_step(x, spec, rng);
    path.times.push_back(T * k / (snapshots - 1));
    path.matrices.push_back(x);
    path.eigenvalues.push_back(rmt::eval(x));
  }
  return path;
}

std::vector<double> terminal_eigenvalue_ensemble(
    const MatrixSdeSpec& spec, double T, std::size_t n_paths, std::uint64_t seed,
    int workers,
    const std::function<rmt::HermitianMatrix(std::size_t, RandomStream&)>& init) {
  const std::size_t dim = static_cast<std::size_t>(spec.n);
  std::vector<double> out(n_paths * dim);
  const long long steps = std::llround(std::ceil(T / spec.dt_base));
  parallel_for(n_paths, workers, [&](std::size_t i) {
    RandomStream rng(seed_split(seed, i));
    rmt::HermitianMatrix x = init(i, rng);
    for (long long k = 0; k < steps; ++k) x = matrix_step(x, spec, rng);
    const WeylPoint ev = rmt::eval(x);
    std::copy(ev.values.begin(), ev.values.end(),
              out.begin() + static_cast<std::ptrdiff_t>(i * dim));
  });
  return out;
}

rmt::UnitaryMatrix unitary_image(const rmt::HermitianMatrix& x) {
  const int n = static_cast<int>(x.rows());
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  return (iu * id + x).partialPivLu().solve((iu * id - x).eval()).eval();
}

rmt::HermitianMatrix hermitian_preimage(const rmt::UnitaryMatrix& u) {
  const int n = static_cast<int>(u.rows());
  const std::complex<double> iu(0.0, 1.0);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  rmt::HermitianMatrix x = iu * (id + u).partialPivLu().solve((id - u).eval()).eval();
  rmt::hermitize(x);
  return x;
}

SpectralCoeffs hp_spectral_coeffs(int n, const HPParams& p, DriftConstant dc) {
  SpectralCoeffs c;
  c.g = [](double) { return 1.0; };
  c.h = [](double x) { return std::sqrt(0.5 * (1.0 + x * x)); };
  const double lin = (dc == DriftConstant::standard ? -n - 2.0 * p.s_re
                                                    : 1.0 - n - 2.0 * p.s_re);
  const double s_im = p.s_im;
  c.b = [lin, s_im](double x) { return lin * x + 2.0 * s_im; };
  c.alpha = 1.0;
  return c;
}

std::vector<double> general_eigenvalue_drift(const SpectralCoeffs& c,
                                             const std::vector<double>& lambda) {
  const std::size_t n = lambda.size();
  double trace = 0.0;
  for (double l : lambda) trace += l;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double li = lambda[i];
    const double g2i = c.g(li) * c.g(li), h2i = c.h(li) * c.h(li);
    double inter = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      const double lk = lambda[k];
      const double g2k = c.g(lk) * c.g(lk), h2k = c.h(lk) * c.h(lk);
      inter += 2.0 * (g2i * h2k + g2k * h2i) / (li - lk);
    }
    out[i] = c.b(li) + c.alpha * trace + inter;
  }
  return out;
}

namespace {

rmt::HermitianMatrix apply_spectrally(const rmt::HermitianMatrix& x,
                                      const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x);
  if (es.info() != Eigen::Success)
    throw NumericError("apply_spectrally: eigensolver did not converge");
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev(i) = f(ev(i));
  rmt::HermitianMatrix out = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  rmt::hermitize(out);
  return out;
}

}  // namespace

rmt::HermitianMatrix general_matrix_step(const rmt::HermitianMatrix& x,
                                         const SpectralCoeffs& c, double dt,
                                         RandomStream& rng) {
  const int n = static_cast<int>(x.rows());
  const rmt::HermitianMatrix gx = apply_spectrally(x, c.g);
  const rmt::HermitianMatrix hx = apply_spectrally(x, c.h);
  const rmt::HermitianMatrix bx = apply_spectrally(x, c.b);
  const Eigen::MatrixXcd dw = complex_gaussian_increment(n, dt, rng);
  rmt::HermitianMatrix next = x + gx * dw * hx + hx * dw.adjoint() * gx;
  next += (bx + c.alpha * x.trace().real() * Eigen::MatrixXcd::Identity(n, n)) * dt;
  rmt::hermitize(next);
  return next;
}

}  // namespace ilab::matrix
