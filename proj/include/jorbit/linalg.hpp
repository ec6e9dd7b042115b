#pragma once

#include <complex>

#include <Eigen/Dense>

#include "jorbit/random.hpp"

namespace jorbit::linalg {

using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Pfaffian of a skew-symmetric matrix by Parlett-Reid elimination with pivoting.
std::complex<double> pfaffian(Matrix a);

/// x = u * diag(sigma) * u^T with u unitary and sigma descending, for complex symmetric x.
struct Takagi {
  Matrix u;
  Vector sigma;
};

/// Takagi factorization via the 2n x 2n real symmetric embedding [[X, Y], [Y, -X]] of
/// x = X + iY, whose eigenpairs (p; q) with eigenvalue sigma give x conj(p + iq) = sigma (p + iq).
/// Columns belonging to zero values are re-orthonormalized over C.
Takagi takagi(const Matrix& x);

/// x = q * (z_1 J (+) ... (+) z_n J) * q^T for real skew x of size 2n, q orthogonal,
/// z descending and nonnegative, J = [[0, 1], [-1, 0]].
struct SkewCanonical {
  RealMatrix q;
  Vector z;
};
SkewCanonical skew_canonical(const RealMatrix& x);

/// Singular values, descending.
Vector singular_values(const Matrix& x);

/// Haar-distributed orthogonal (real) or unitary (complex) matrix of size n: QR of a
/// Gaussian matrix with the diagonal of R normalized to be positive.
RealMatrix haar_orthogonal(int n, Stream& rng);
Matrix haar_unitary(int n, Stream& rng);

/// ||m^* m - I||_max.
double unitarity_residual(const Matrix& m);

/// sigma_max / sigma_min (infinity for singular input).
double condition_number(const Matrix& m);

/// Complex Gram-Schmidt of the columns in place; degenerate columns are replaced by
/// standard basis vectors orthogonalized against the rest.
void orthonormalize_columns(Matrix& m);

}  // namespace jorbit::linalg
