#include "ilab/core.hpp"

#include <cmath>

namespace ilab {

double cayley_to_angle(double x) { return 2.0 * std::atan(x); }

double angle_to_cayley(double theta) { return std::tan(theta / 2.0); }

double vandermonde(const WeylPoint& x) {
  const int n = x.n();
  double prod = 1.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) prod *= x.values[j] - x.values[i];
  return prod;
}

std::vector<double> vandermonde_grad(const WeylPoint& x) {
  // d/dx_k Delta = Delta * sum_{j != k} 1/(x_k - x_j)
  const int n = x.n();
  const double delta = vandermonde(x);
  std::vector<double> g(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int j = 0; j < n; ++j)
      if (j != k) s += 1.0 / (x.values[k] - x.values[j]);
    g[static_cast<std::size_t>(k)] = delta * s;
  }
  return g;
}

std::vector<double> vandermonde_second(const WeylPoint& x) {
  // d^2/dx_k^2 Delta = Delta * (S_k^2 - T_k),
  // S_k = sum 1/(x_k - x_j),  T_k = sum 1/(x_k - x_j)^2.
  const int n = x.n();
  const double delta = vandermonde(x);
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0, t = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == k) continue;
      const double d = 1.0 / (x.values[k] - x.values[j]);
      s += d;
      t += d * d;
    }
    h[static_cast<std::size_t>(k)] = delta * (s * s - t);
  }
  return h;
}

double km_eigenvalue(int n, double s_re) {
  return n * (n - 1.0) * (-2.0 * n + 1.0 - 3.0 * s_re) / 3.0;
}

double dual_constant(int n, double s_re) { return -2.0 * n - 2.0 * s_re; }

OmegaPoint embed(const WeylPoint& x) {
  const int n = x.n();
  OmegaPoint w;
  w.alpha_plus.resize(static_cast<std::size_t>(n));
  w.alpha_minus.resize(static_cast<std::size_t>(n));
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    w.alpha_plus[static_cast<std::size_t>(i)] =
        std::max(x.values[static_cast<std::size_t>(n - 1 - i)], 0.0) / n;
    w.alpha_minus[static_cast<std::size_t>(i)] =
        std::max(-x.values[static_cast<std::size_t>(i)], 0.0) / n;
    sum += x.values[static_cast<std::size_t>(i)];
    sumsq += x.values[static_cast<std::size_t>(i)] * x.values[static_cast<std::size_t>(i)];
  }
  w.gamma1 = sum / n;
  w.delta = sumsq / (static_cast<double>(n) * n);
  return w;
}

std::complex<double> charfunc(const OmegaPoint& omega, double x) {
  const std::complex<double> iu(0.0, 1.0);
  std::complex<double> f =
      std::exp(iu * (omega.gamma1 * x) - 0.5 * omega.gamma2() * x * x);
  for (double a : omega.alpha_plus) {
    if (a == 0.0) continue;
    f *= std::exp(-iu * (a * x)) / (1.0 - iu * (a * x));
  }
  for (double a : omega.alpha_minus) {
    if (a == 0.0) continue;
    f *= std::exp(iu * (a * x)) / (1.0 + iu * (a * x));
  }
  return f;
}

double hp_log_density_unnorm(const WeylPoint& x, const HPParams& p) {
  if (!x.strictly_ordered())
    throw NumericError("hp_log_density_unnorm: coincident coordinates");
  const int n = x.n();
  double logdelta = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      logdelta += std::log(x.values[static_cast<std::size_t>(j)] -
                           x.values[static_cast<std::size_t>(i)]);
  double sum = 0.0;
  for (double xi : x.values)
    sum += -(p.s_re + n) * std::log1p(xi * xi) + 2.0 * p.s_im * std::atan(xi);
  return 2.0 * logdelta + sum;
}

double log_speed_density(double x, int n, const HPParams& p, bool dual) {
  // Arg(1+ix) on the principal branch equals atan(x).
  if (dual) return (p.s_re + n - 1.0) * std::log1p(x * x) - 2.0 * p.s_im * std::atan(x);
  return -(p.s_re + n) * std::log1p(x * x) + 2.0 * p.s_im * std::atan(x);
}

double speed_density(double x, int n, const HPParams& p, bool dual) {
  return std::exp(log_speed_density(x, n, p, dual));
}

}  // namespace ilab
