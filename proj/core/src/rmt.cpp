#include "ilab/rmt.hpp"

#include <cmath>
#include <complex>

namespace ilab::rmt {

void hermitize(HermitianMatrix& m) { m = 0.5 * (m + m.adjoint()).eval(); }

bool is_hermitian(const HermitianMatrix& m, double tol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const UnitaryMatrix& u, double tol) {
  const auto n = u.rows();
  return (u * u.adjoint() - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

Eigen::RowVectorXcd complex_normal_row(int n, RandomStream& rng) {
  Eigen::RowVectorXcd z(n);
  for (int j = 0; j < n; ++j) {
    double re, im;
    rng.complex_normal_unit(re, im);
    z(j) = std::complex<double>(re, im);
  }
  return z;
}

UnitaryMatrix haar_unitary(int n, RandomStream& rng) {
  for (;;) {
    Eigen::MatrixXcd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double re, im;
        rng.complex_normal_unit(re, im);
        g(i, j) = std::complex<double>(re, im);
      }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    bool degenerate = false;
    for (int j = 0; j < n; ++j) {
      const double a = std::abs(r(j, j));
      if (a < 1e-300) {
        degenerate = true;  // probability-zero Gaussian degeneracy; redraw
        break;
      }
      q.col(j) *= r(j, j) / a;
    }
    if (!degenerate) return q;
  }
}

WeylPoint eval(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("eval: Hermitian eigensolver did not converge");
  const auto& ev = es.eigenvalues();
  WeylPoint x;
  x.values.assign(ev.data(), ev.data() + ev.size());
  return x;
}

HermitianMatrix corner(const HermitianMatrix& h, int k) {
  if (k < 1 || k > h.rows())
    throw std::invalid_argument("corner: block size out of range");
  return h.topLeftCorner(k, k);
}

HermitianMatrix gue_sample(int n, double variance, RandomStream& rng) {
  // Unitarily invariant convention: diagonal N(0, variance), off-diagonal
  // complex entries with total second moment `variance` (real and imaginary
  // parts each variance/2).  Anything else breaks corner consistency with
  // the level links, which the boundary-kernel identities rely on.
  HermitianMatrix g = HermitianMatrix::Zero(n, n);
  if (variance == 0.0) return g;
  const double sd = std::sqrt(variance);
  const double sd_off = std::sqrt(0.5 * variance);
  for (int i = 0; i < n; ++i) {
    g(i, i) = sd * rng.normal();
    for (int j = i + 1; j < n; ++j) {
      const std::complex<double> z(sd_off * rng.normal(), sd_off * rng.normal());
      g(i, j) = z;
      g(j, i) = std::conj(z);
    }
  }
  return g;
}

HermitianMatrix hermitian_sqrt(const HermitianMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success)
    throw NumericError("hermitian_sqrt: eigensolver did not converge");
  Eigen::VectorXd ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-6)
      throw NumericError("hermitian_sqrt: input is not positive semidefinite");
    ev(i) = std::sqrt(std::max(ev(i), 0.0));
  }
  HermitianMatrix s = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  hermitize(s);
  return s;
}

HermitianMatrix ergodic_matrix_sample(const OmegaPoint& omega, int n, RandomStream& rng) {
  HermitianMatrix m = omega.gamma1 * HermitianMatrix::Identity(n, n);
  const double g2 = omega.gamma2();
  if (g2 > 0.0) m += gue_sample(n, g2, rng);
  const HermitianMatrix id = HermitianMatrix::Identity(n, n);
  for (double a : omega.alpha_plus) {
    if (a == 0.0) continue;
    const Eigen::RowVectorXcd z = complex_normal_row(n, rng);
    m += a * (z.adjoint() * z - id);
  }
  for (double a : omega.alpha_minus) {
    if (a == 0.0) continue;
    const Eigen::RowVectorXcd z = complex_normal_row(n, rng);
    m += -a * (z.adjoint() * z - id);
  }
  hermitize(m);
  return m;
}

}  // namespace ilab::rmt
