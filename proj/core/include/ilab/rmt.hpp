#pragma once

#include <Eigen/Dense>

#include "ilab/random.hpp"
#include "ilab/types.hpp"

namespace ilab::rmt {

using HermitianMatrix = Eigen::MatrixXcd;
using UnitaryMatrix = Eigen::MatrixXcd;

// Forces exact Hermitian symmetry: M <- (M + M*)/2.
void hermitize(HermitianMatrix& m);

bool is_hermitian(const HermitianMatrix& m, double tol = 1e-12);
bool is_unitary(const UnitaryMatrix& u, double tol = 1e-10);

// Haar-distributed unitary via QR of a complex Gaussian matrix with the
// phase correction that makes the law exactly Haar.
UnitaryMatrix haar_unitary(int n, RandomStream& rng);

// Ascending real eigenvalues of a Hermitian matrix.
WeylPoint eval(const HermitianMatrix& h);

// Top-left k x k block.  Eigenvalues of the corner interlace those of the
// original matrix.
HermitianMatrix corner(const HermitianMatrix& h, int k);

// Hermitian Gaussian matrix in the unitarily invariant normalization:
// diagonal entries N(0, variance), off-diagonal real/imaginary parts each
// N(0, variance/2), so E Tr X^2 = variance * N^2.
HermitianMatrix gue_sample(int n, double variance, RandomStream& rng);

// Hermitian PSD square root via eigendecomposition; eigenvalues in
// [-1e-6, 0) are treated as roundoff and clamped, anything lower throws.
HermitianMatrix hermitian_sqrt(const HermitianMatrix& h);

// Draw from the ergodic measure with parameter omega, projected to n x n:
//   gamma1 I + G^{gamma2} + sum_k a_k^+ [-I + z*(k) z(k)]
//            + sum_k (-a_k^-)[-I + w*(k) w(k)],
// with z, w rows of i.i.d. standard complex normals (E|z_j|^2 = 1).
HermitianMatrix ergodic_matrix_sample(const OmegaPoint& omega, int n, RandomStream& rng);

// Row vector of n i.i.d. standard complex normals.
Eigen::RowVectorXcd complex_normal_row(int n, RandomStream& rng);

}  // namespace ilab::rmt
