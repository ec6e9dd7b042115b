#include "jorbit/linalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "jorbit/errors.hpp"

namespace jorbit::linalg {

std::complex<double> pfaffian(Matrix a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n) throw Error(ErrorKind::shape_mismatch, "pfaffian needs a square matrix");
  if (n % 2 == 1) return 0.0;
  std::complex<double> pf = 1.0;
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    Eigen::Index kp = k + 1;
    double best = std::abs(a(k + 1, k));
    for (Eigen::Index i = k + 2; i < n; ++i) {
      if (std::abs(a(i, k)) > best) {
        best = std::abs(a(i, k));
        kp = i;
      }
    }
    if (kp != k + 1) {
      a.row(k + 1).swap(a.row(kp));
      a.col(k + 1).swap(a.col(kp));
      pf = -pf;
    }
    if (a(k + 1, k) == 0.0) return 0.0;
    pf *= a(k, k + 1);
    if (k + 2 < n) {
      const Eigen::Index m = n - k - 2;
      const Eigen::VectorXcd tau = a.row(k).tail(m).transpose() / a(k, k + 1);
      const Eigen::VectorXcd col = a.col(k + 1).tail(m);
      a.bottomRightCorner(m, m) += tau * col.transpose() - col * tau.transpose();
    }
  }
  return pf;
}

void orthonormalize_columns(Matrix& m) {
  const Eigen::Index n = m.cols();
  Eigen::Index next_unit = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (int attempt = 0; attempt <= m.rows() + 1; ++attempt) {
      Eigen::VectorXcd v = m.col(j);
      for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index i = 0; i < j; ++i) v -= m.col(i).dot(v) * m.col(i);
      }
      const double norm = v.norm();
      if (norm > 1e-8) {
        m.col(j) = v / norm;
        break;
      }
      m.col(j).setZero();
      m(next_unit % m.rows(), j) = 1.0;
      ++next_unit;
    }
  }
}

Takagi takagi(const Matrix& x) {
  const Eigen::Index n = x.rows();
  if (x.cols() != n) throw Error(ErrorKind::shape_mismatch, "takagi needs a square matrix");
  RealMatrix emb(2 * n, 2 * n);
  const RealMatrix re = x.real();
  const RealMatrix im = x.imag();
  emb << re, im, im, -re;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(emb);
  // Eigenvalues come in +/- pairs; the n largest are the Takagi values.
  Takagi t;
  t.u.resize(n, n);
  t.sigma.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = 2 * n - 1 - j;
    t.sigma(j) = std::max(0.0, es.eigenvalues()(src));
    const Eigen::VectorXd pq = es.eigenvectors().col(src);
    t.u.col(j) = (pq.head(n).cast<std::complex<double>>() +
                  std::complex<double>(0.0, 1.0) * pq.tail(n).cast<std::complex<double>>());
  }
  const double scale = std::max(1.0, t.sigma.size() ? t.sigma(0) : 0.0);
  const double zero_tol = 1e-12 * scale;
  // Columns with vanishing value may mix the +0 and -0 eigenspaces; they do not enter
  // x = u sigma u^T, so any completion to a unitary is valid.
  Eigen::Index first_zero = n;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (t.sigma(j) <= zero_tol) {
      first_zero = j;
      break;
    }
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (j < first_zero) t.u.col(j).normalize();
  }
  if (first_zero < n) {
    for (Eigen::Index j = first_zero; j < n; ++j) t.sigma(j) = 0.0;
  }
  orthonormalize_columns(t.u);
  return t;
}

SkewCanonical skew_canonical(const RealMatrix& x) {
  const Eigen::Index size = x.rows();
  if (x.cols() != size || size % 2 != 0) {
    throw Error(ErrorKind::shape_mismatch, "skew_canonical needs an even square matrix");
  }
  Eigen::RealSchur<RealMatrix> schur(x);
  const RealMatrix& t = schur.matrixT();
  const RealMatrix& q = schur.matrixU();

  struct Block {
    double z;
    Eigen::Index c0;
    Eigen::Index c1;
    bool flip;
  };
  std::vector<Block> blocks;
  std::vector<Eigen::Index> singles;
  for (Eigen::Index i = 0; i < size;) {
    if (i + 1 < size && t(i + 1, i) != 0.0) {
      const double b = t(i, i + 1);
      const double c = t(i + 1, i);
      blocks.push_back({std::sqrt(std::abs(b * c)), i, i + 1, b < 0.0});
      i += 2;
    } else {
      singles.push_back(i);
      i += 1;
    }
  }
  // 1x1 blocks are (numerically) zero eigenvalues of a skew matrix; pair them up.
  for (std::size_t s = 0; s + 1 < singles.size(); s += 2) {
    blocks.push_back({0.0, singles[s], singles[s + 1], false});
  }
  std::stable_sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.z > b.z; });

  SkewCanonical out;
  out.q.resize(size, size);
  out.z.resize(size / 2);
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    const auto& b = blocks[k];
    out.z(static_cast<Eigen::Index>(k)) = b.z;
    // Swapping the two columns turns [[0, -z], [z, 0]] into [[0, z], [-z, 0]].
    out.q.col(2 * k) = q.col(b.flip ? b.c1 : b.c0);
    out.q.col(2 * k + 1) = q.col(b.flip ? b.c0 : b.c1);
  }
  return out;
}

Vector singular_values(const Matrix& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

RealMatrix haar_orthogonal(int n, Stream& rng) {
  RealMatrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<RealMatrix> qr(g);
  RealMatrix q = qr.householderQ();
  const RealMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix haar_unitary(int n, Stream& rng) {
  Matrix g(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) g(i, j) = rng.complex_normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

double unitarity_residual(const Matrix& m) {
  const Matrix r = m.adjoint() * m - Matrix::Identity(m.cols(), m.cols());
  return r.cwiseAbs().maxCoeff();
}

double condition_number(const Matrix& m) {
  const Vector s = singular_values(m);
  if (s.size() == 0) return 1.0;
  const double lo = s(s.size() - 1);
  if (lo <= 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / lo;
}

}  // namespace jorbit::linalg
