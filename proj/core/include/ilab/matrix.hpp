#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ilab/random.hpp"
#include "ilab/rmt.hpp"
#include "ilab/types.hpp"

namespace ilab::matrix {

// The two candidate linear-drift constants appearing in the source displays;
// the N = 1 reduction test arbitrates: `standard` (-N - 2 Re s) reproduces
// the interacting vector SDE exactly, `shifted` (1 - N - 2 Re s) does not.
enum class DriftConstant { standard, shifted };

struct MatrixSdeSpec {
  int n = 1;
  HPParams params{};
  double dt_base = 5e-4;
  DriftConstant drift_constant = DriftConstant::standard;
};

// One Euler step of
//   dX = dW S + S dW* + [ c X + 2 Im(s) I + Tr(X) I ] dt,
// S = sqrt((I + X^2)/2), dW with independent N(0, dt) real/imaginary entry
// parts.  The result is re-Hermitized.
rmt::HermitianMatrix matrix_step(const rmt::HermitianMatrix& x, const MatrixSdeSpec& spec,
                                 RandomStream& rng);

struct MatrixPath {
  std::vector<double> times;
  std::vector<rmt::HermitianMatrix> matrices;
  std::vector<WeylPoint> eigenvalues;
};

MatrixPath matrix_simulate(const MatrixSdeSpec& spec, const rmt::HermitianMatrix& x0,
                           double T, RandomStream& rng, int snapshots = 2);

// Terminal eigenvalues of n_paths independent matrix paths, row-major.
std::vector<double> terminal_eigenvalue_ensemble(
    const MatrixSdeSpec& spec, double T, std::size_t n_paths, std::uint64_t seed,
    int workers,
    const std::function<rmt::HermitianMatrix(std::size_t, RandomStream&)>& init);

// Cayley image U = (iI - X)(iI + X)^{-1}; unitary for Hermitian X.
rmt::UnitaryMatrix unitary_image(const rmt::HermitianMatrix& x);

// Inverse Cayley map X = i (I - U)(I + U)^{-1}; Hermitian for unitary U.
rmt::HermitianMatrix hermitian_preimage(const rmt::UnitaryMatrix& u);

// General spectral coefficient set (g, h, b, alpha); the matrix equation is
//   dX = g(X) dW h(X) + h(X) dW* g(X) + (b(X) + alpha Tr(X) I) dt
// with scalar functions applied spectrally.
struct SpectralCoeffs {
  std::function<double(double)> g, h, b;
  double alpha = 0.0;
};

SpectralCoeffs hp_spectral_coeffs(int n, const HPParams& p, DriftConstant c = DriftConstant::standard);

// Drift of the autonomous eigenvalue system of the general equation:
//   b(l_i) + alpha sum_k l_k + sum_{k != i} 2 G(l_i, l_k)/(l_i - l_k),
// G(x,y) = g^2(x) h^2(y) + g^2(y) h^2(x).
std::vector<double> general_eigenvalue_drift(const SpectralCoeffs& c,
                                             const std::vector<double>& lambda);

// One Euler step of the general matrix equation with spectrally applied
// coefficients (reference path; the specialized matrix_step is equivalent
// for the coefficient set above).
rmt::HermitianMatrix general_matrix_step(const rmt::HermitianMatrix& x,
                                         const SpectralCoeffs& c, double dt,
                                         RandomStream& rng);

}  // namespace ilab::matrix
